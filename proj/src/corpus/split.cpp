// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/corpus/split.hpp"

#include <algorithm>
#include <cmath>

#include "hedtts/common/error.hpp"
#include "hedtts/common/hash.hpp"
#include "hedtts/common/rng.hpp"

namespace hedtts::corpus {
namespace {

constexpr int kFullTrain = 300;
constexpr int kFullVal = 20;
constexpr int kFullTest = 30;
constexpr int kFullCell = kFullTrain + kFullVal + kFullTest;

std::vector<std::string> collect(const DatasetSplit& split,
                                 std::vector<std::string> SplitCell::*member) {
  std::vector<std::string> out;
  for (const auto& [key, cell] : split.cells)
    out.insert(out.end(), (cell.*member).begin(), (cell.*member).end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::string> DatasetSplit::train_ids() const { return collect(*this, &SplitCell::train); }
std::vector<std::string> DatasetSplit::val_ids() const { return collect(*this, &SplitCell::val); }
std::vector<std::string> DatasetSplit::test_ids() const { return collect(*this, &SplitCell::test); }

SplitQuota quota_for(int n) {
  if (n < 3) fail(ErrorCode::InsufficientData, "a split cell needs at least 3 utterances, got " + std::to_string(n));
  int test = static_cast<int>(std::lround(static_cast<double>(n) * kFullTest / kFullCell));
  int val = static_cast<int>(std::lround(static_cast<double>(n) * kFullVal / kFullCell));
  test = std::max(test, 1);
  val = std::max(val, 1);
  return {n - val - test, val, test};
}

DatasetSplit split_dataset(const CorpusIndex& index, std::uint64_t seed) {
  if (index.empty()) fail(ErrorCode::InsufficientData, "cannot split an empty corpus");
  DatasetSplit split;
  split.seed = seed;
  for (auto [key, ids] : index.groups()) {
    const SplitQuota q = quota_for(static_cast<int>(ids.size()));
    // Each cell gets its own stream so adding a speaker leaves other cells unchanged.
    Rng rng(seed ^ fnv1a(key.first + "/" + std::string(emotion_name(key.second))));
    rng.shuffle(ids);
    SplitCell cell;
    cell.train.assign(ids.begin(), ids.begin() + q.train);
    cell.val.assign(ids.begin() + q.train, ids.begin() + q.train + q.val);
    cell.test.assign(ids.begin() + q.train + q.val, ids.end());
    std::sort(cell.train.begin(), cell.train.end());
    std::sort(cell.val.begin(), cell.val.end());
    std::sort(cell.test.begin(), cell.test.end());
    split.cells.emplace(key, std::move(cell));
  }
  return split;
}

nlohmann::json split_to_json(const DatasetSplit& split) {
  nlohmann::json doc;
  doc["seed"] = split.seed;
  doc["cells"] = nlohmann::json::array();
  for (const auto& [key, cell] : split.cells)
    doc["cells"].push_back({{"speaker", key.first},
                            {"emotion", emotion_name(key.second)},
                            {"train", cell.train},
                            {"val", cell.val},
                            {"test", cell.test}});
  return doc;
}

DatasetSplit split_from_json(const nlohmann::json& doc) {
  DatasetSplit split;
  split.seed = doc.at("seed").get<std::uint64_t>();
  for (const auto& c : doc.at("cells")) {
    const auto emotion = parse_emotion(c.at("emotion").get<std::string>());
    if (!emotion) fail(ErrorCode::CorruptPayload, "bad emotion in split document");
    SplitCell cell{c.at("train").get<std::vector<std::string>>(),
                   c.at("val").get<std::vector<std::string>>(),
                   c.at("test").get<std::vector<std::string>>()};
    split.cells.emplace(std::make_pair(c.at("speaker").get<std::string>(), *emotion), std::move(cell));
  }
  return split;
}

}  // namespace hedtts::corpus
