// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/common/emotion.hpp"
#include "hedtts/intensity/model.hpp"

namespace hedtts::intensity {

struct ScoredSegment {
  Level level = Level::Utterance;
  Emotion truth = Emotion::Neutral;
  EmotionIntensity intensity;
};

/// Rows are emotions in intensity order, columns are levels (P, W, U).
struct PresenceTable {
  std::array<std::array<double, 3>, 4> presence{};  // decision intensity >= 0.5 vs truth == emotion
  std::array<std::array<int, 3>, 4> presence_count{};
  /// Fraction of emotional (non-Neutral) segments whose highest intensity is the true emotion.
  std::array<double, 3> argmax{};
  std::array<int, 3> argmax_count{};

  double presence_average(Level level) const;
};

PresenceTable presence_accuracy(const std::vector<ScoredSegment>& segments);

nlohmann::json presence_to_json(const PresenceTable& table);

}  // namespace hedtts::intensity
