// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/common/emotion.hpp"
#include "hedtts/common/wav.hpp"

namespace hedtts::eval {

inline constexpr int kNumProsodyFeatures = 5;
inline constexpr std::array<std::string_view, kNumProsodyFeatures> kProsodyFeatureNames = {
    "duration", "pitch_mean", "pitch_std", "energy_mean", "energy_std"};

/// Duration in seconds; F0 mean/std (Hz) over voiced frames (NaN when
/// unvoiced); mean/std of log RMS over frames within 40 dB of the peak.
std::array<double, kNumProsodyFeatures> prosody_features(const Waveform& wave);

/// Expected sign (+1, -1, 0 when undefined) per emotion and feature, from the
/// Spearman correlation of each feature with labelled intensity over the
/// utterances of that emotion plus the Neutral ones (intensity 0).
using TrendSigns = std::map<Emotion, std::array<int, kNumProsodyFeatures>>;
TrendSigns expected_trends(const std::vector<std::array<double, kNumProsodyFeatures>>& features,
                           const std::vector<Emotion>& emotions, const std::vector<double>& intensities);

struct TrendCell {
  std::optional<double> rho;  // Spearman vs commanded intensity; missing when constant
  int expected = 0;
  bool matches() const { return rho && expected != 0 && (*rho > 0.0) == (expected > 0); }
};

struct TrendTable {
  std::vector<double> sweep;
  std::map<Emotion, std::array<TrendCell, kNumProsodyFeatures>> cells;
  /// Raw feature values per emotion, [feature][sweep step].
  std::map<Emotion, std::array<std::vector<double>, kNumProsodyFeatures>> curves;
};

using IntensitySynth = std::function<Waveform(Emotion target, double intensity)>;

TrendTable prosody_trend_analysis(const IntensitySynth& synth, const std::vector<Emotion>& emotions,
                                  const std::vector<double>& sweep, const TrendSigns& expected = {});

nlohmann::json trends_to_json(const TrendTable& table);
TrendTable trends_from_json(const nlohmann::json& doc);

}  // namespace hedtts::eval
