// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hedtts/common/types.hpp"

namespace hedtts::dsp {

inline constexpr int kFftSize = 1024;
inline constexpr int kHopLength = 256;
inline constexpr int kNumBins = kFftSize / 2 + 1;

using ComplexMatrix = Eigen::MatrixXcd;

/// Frames are centred on t * hop for t in [0, ceil(N / hop)); the signal is
/// reflect-padded by n_fft / 2 on both sides.
int num_frames(std::size_t num_samples, int hop = kHopLength);

std::vector<double> hann_window(int length);

/// Returns bins x frames.
ComplexMatrix stft(const std::vector<double>& samples, int n_fft = kFftSize, int hop = kHopLength);

/// Weighted overlap-add inverse of stft(); output has num_samples samples.
std::vector<double> istft(const ComplexMatrix& spec, std::size_t num_samples, int n_fft = kFftSize,
                          int hop = kHopLength);

/// |X|^2, bins x frames.
Matrix power_spectrogram(const std::vector<double>& samples, int n_fft = kFftSize,
                         int hop = kHopLength);

/// Raw (unwindowed) frame of length n_fft centred at t * hop, zero padded
/// beyond the signal.
std::vector<double> centred_frame(const std::vector<double>& samples, int t, int n_fft = kFftSize,
                                  int hop = kHopLength);

}  // namespace hedtts::dsp
