// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "hedtts/common/types.hpp"
#include "hedtts/hed/hed.hpp"

namespace hedtts::eval {

inline constexpr int kNumTrajectoryStats = 10;
inline constexpr std::array<std::string_view, kNumTrajectoryStats> kTrajectoryStatNames = {
    "mean", "median", "std", "max", "min", "iqr", "slope", "n_peaks", "mean_peak_prominence", "lag1_autocorr"};

/// Statistics of one series: population std, IQR from linearly interpolated
/// quartiles, least-squares slope against the index, strict interior local
/// maxima, prominence against the higher of the two flanking minima (each
/// searched until a higher sample or the series end), lag-1 autocorrelation
/// with the mean removed (0 when the variance is 0).
std::array<double, kNumTrajectoryStats> series_statistics(const std::vector<double>& x);

/// T x 4 intensities -> 40 values, emotion-major:
/// [Angry stats(10), Happy stats(10), Sad stats(10), Surprise stats(10)].
/// Throws EmptyInput for T == 0.
Vector summarize_trajectory(const Matrix& intensities);

/// Per-utterance leakage features: 4 utterance-level intensities, the word
/// trajectory summary (one row per word) and the phoneme trajectory summary.
inline constexpr int kHedSampleFeatures = 4 + 2 * 4 * kNumTrajectoryStats;  // 84
Vector hed_sample_features(const hed::HierarchicalED& hed);

}  // namespace hedtts::eval
