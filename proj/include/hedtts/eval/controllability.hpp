// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/common/emotion.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/intensity/model.hpp"

namespace hedtts::eval {

/// Renders test case `case_index` with `target` commanded at `intensity`
/// (all other emotions held fixed).
using SweepSynth = std::function<Waveform(std::size_t case_index, Emotion target, double intensity)>;
/// Probe SER: per-emotion predictions for one rendering.
using Probe = std::function<intensity::EmotionIntensity(const Waveform&)>;

/// predictions[case][target][step] for each commanded sweep value.
using SweepPredictions = std::vector<std::vector<std::vector<intensity::EmotionIntensity>>>;

struct ControllabilityReport {
  std::optional<double> positive;  // mean same-emotion correlation
  std::optional<double> negative;  // mean cross-emotion correlation floored at 0; 0 if all skipped
  std::optional<double> score;     // positive - negative
  /// Mean correlation per (target, predicted); NaN when every case was skipped.
  std::array<std::array<double, 4>, 4> correlation{};
  std::vector<Emotion> targets;
  int pairs = 0;
  int skipped_pairs = 0;  // constant series

  bool defined() const { return score.has_value(); }
};

/// Scores already collected predictions. `targets` lists the swept emotions
/// in the order of the second index of `predictions`.
ControllabilityReport score_predictions(const SweepPredictions& predictions, const std::vector<Emotion>& targets,
                                        const std::vector<double>& sweep);

/// Renders every case's sweep for each target and scores the probe output.
ControllabilityReport controllability_score(const Probe& probe, const SweepSynth& synth, std::size_t cases,
                                            const std::vector<Emotion>& targets,
                                            const std::vector<double>& sweep);

nlohmann::json controllability_to_json(const ControllabilityReport& report);
ControllabilityReport controllability_from_json(const nlohmann::json& doc);

}  // namespace hedtts::eval
