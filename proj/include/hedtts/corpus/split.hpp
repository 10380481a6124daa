// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/corpus/corpus.hpp"

namespace hedtts::corpus {

struct SplitCell {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

struct DatasetSplit {
  std::uint64_t seed = 0;
  std::map<std::pair<std::string, Emotion>, SplitCell> cells;

  std::vector<std::string> train_ids() const;
  std::vector<std::string> val_ids() const;
  std::vector<std::string> test_ids() const;
};

/// Full-size cells use the 300/20/30 quota; smaller cells are scaled
/// proportionally (35 -> 30/2/3), with at least one validation and one test
/// utterance per cell.
struct SplitQuota {
  int train;
  int val;
  int test;
};
SplitQuota quota_for(int cell_size);

DatasetSplit split_dataset(const CorpusIndex& index, std::uint64_t seed);

nlohmann::json split_to_json(const DatasetSplit& split);
DatasetSplit split_from_json(const nlohmann::json& doc);

}  // namespace hedtts::corpus
