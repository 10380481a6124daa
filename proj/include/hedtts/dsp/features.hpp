// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <string>
#include <vector>

#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/types.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/corpus/segments.hpp"

namespace hedtts::dsp {

enum class FeatureProvider { BuiltinDsp, External };

/// Frame-level features, T x D.
struct FrameFeatures {
  Matrix values;
  double frame_rate = static_cast<double>(kSampleRate) / 256.0;
  FeatureProvider provider = FeatureProvider::BuiltinDsp;

  Eigen::Index frames() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
  double duration() const { return frames() / frame_rate; }
};

FrameFeatures from_external(const FrameMatrix& m);

// Column layout of the builtin provider.
namespace column {
inline constexpr int kLogEnergy = 0;
inline constexpr int kF0 = 1;
inline constexpr int kVoicing = 2;
inline constexpr int kZeroCrossing = 3;
inline constexpr int kCentroid = 4;
inline constexpr int kFlux = 5;
inline constexpr int kFirstMelBand = 6;
}  // namespace column

inline constexpr int kNumFeatureMelBands = 16;
inline constexpr int kNumBuiltinFeatures = 6 + kNumFeatureMelBands;  // 22
inline constexpr int kNumFunctionalStats = 4;                        // mean, std, min, max
inline constexpr int kNumFunctionals = kNumBuiltinFeatures * kNumFunctionalStats;  // 88

struct PitchConfig {
  double min_hz = 50.0;
  double max_hz = 500.0;
  double voicing_threshold = 0.3;  // on the normalised autocorrelation peak
  double silence_rms = 1e-4;
};

/// Autocorrelation F0 for a single raw frame; 0 when unvoiced. `strength`
/// receives the normalised autocorrelation at the chosen lag.
double estimate_f0(const std::vector<double>& frame, int sample_rate, const PitchConfig& config,
                   double* strength = nullptr);

/// 22 features per 256-sample hop: log-energy, F0 (0 if unvoiced), voicing
/// flag, zero-crossing rate, spectral centroid (Hz), spectral flux, and 16
/// mel-band log energies.
FrameFeatures compute_frame_features(const Waveform& wave, const PitchConfig& pitch = {});

/// Per-frame F0 (Hz, 0 when unvoiced) and RMS, on the mel frame grid.
struct ProsodyTrack {
  std::vector<double> f0;
  std::vector<double> rms;
};
ProsodyTrack compute_prosody_track(const Waveform& wave, const PitchConfig& pitch = {});

/// Frames whose centre time (t / frame_rate) falls in [start, end). A span
/// shorter than one hop that captures no centre snaps to the frame nearest
/// its midpoint. Throws EmptySegment for end <= start or spans outside the
/// feature range.
std::pair<Eigen::Index, Eigen::Index> segment_frame_range(const FrameFeatures& ff,
                                                          const corpus::TimeSpan& span);

/// Mean/std/min/max of every feature column over the segment. Output is laid
/// out per feature: [f0.mean, f0.std, f0.min, f0.max, f1.mean, ...].
Vector compute_segment_functionals(const FrameFeatures& ff, const corpus::TimeSpan& span);
Vector functionals_of(const Eigen::Ref<const Matrix>& frames);

}  // namespace hedtts::dsp
