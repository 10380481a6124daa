// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/common/types.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/dsp/mel.hpp"
#include "hedtts/eval/stats.hpp"

namespace hedtts::eval {

struct DtwResult {
  double total_cost = 0.0;
  std::vector<std::pair<int, int>> path;  // (row of a, row of b), monotone

  double mean_cost() const { return path.empty() ? 0.0 : total_cost / static_cast<double>(path.size()); }
};

/// Dynamic time warping with unit steps (1,0), (0,1), (1,1) over rows of `a`
/// and `b` with Euclidean row distance. Throws EmptyInput.
DtwResult dtw(const Matrix& a, const Matrix& b);

/// Mean Euclidean row distance over the first min(rows) frames, no warping.
double naive_frame_distance(const Matrix& a, const Matrix& b);

inline constexpr int kNumCepstra = 13;
/// 10 * sqrt(2) / ln(10)
inline const double kMcdConstant = 10.0 * std::sqrt(2.0) / std::log(10.0);

/// Real-cepstrum coefficients c1..c13 of each frame's log-amplitude mel
/// spectrum: c_k = (1/M) sum_m (logmel_m / 2) cos(pi k (m + 0.5) / M).
/// Returns frames x 13.
Matrix mel_cepstrum(const dsp::MelSpectrogram& mel);

/// DTW-aligned mel cepstral distortion in dB.
double mcd(const dsp::MelSpectrogram& ref, const dsp::MelSpectrogram& syn);

struct ProsodyDistortion {
  std::optional<double> pitch;  // Hz, missing when either side is unvoiced
  double energy = 0.0;
};

/// Pitch: DTW on log-F0 over the voiced frames of each signal, mean absolute
/// F0 difference in Hz along the path. Energy: frame RMS scaled by the
/// reference's peak RMS, DTW-aligned, mean absolute difference.
ProsodyDistortion pitch_energy_distortion(const Waveform& ref, const Waveform& syn);
/// Same as above but throws AllUnvoiced instead of returning a missing pitch.
double pitch_distortion(const Waveform& ref, const Waveform& syn);

/// Cosine similarity. Throws ZeroVector or LengthMismatch.
double secs(const Vector& a, const Vector& b);

/// Aggregated objective metrics over a set of reference/synthesis pairs.
struct MetricReport {
  MeanInterval mcd;
  MeanInterval pitch_distortion;
  MeanInterval energy_distortion;
  MeanInterval secs;
  int pairs = 0;
  int unvoiced_pairs = 0;  // pitch undefined
};

class MetricAccumulator {
 public:
  /// Adds one pair; `secs` is given when external speaker embeddings exist.
  void add(const Waveform& ref, const Waveform& syn, std::optional<double> secs_value = std::nullopt);
  MetricReport report() const;

 private:
  std::vector<double> mcd_, pitch_, energy_, secs_;
  int pairs_ = 0;
  int unvoiced_ = 0;
};

nlohmann::json metric_report_to_json(const MetricReport& report);
MetricReport metric_report_from_json(const nlohmann::json& doc);

}  // namespace hedtts::eval
