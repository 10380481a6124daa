// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hedtts/common/types.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/dsp/stft.hpp"

namespace hedtts::dsp {

inline constexpr int kNumMels = 100;
inline constexpr double kMelFloor = 1e-10;

double hz_to_mel(double hz);  // HTK: 2595 log10(1 + f / 700)
double mel_to_hz(double mel);

/// Triangular HTK-scale filters, n_mels x (n_fft / 2 + 1), unnormalised.
/// Filter m rises from edge m to its peak at edge m + 1 and falls to edge m + 2,
/// with n_mels + 2 edges evenly spaced in mel between fmin and fmax.
Matrix mel_filterbank(int n_mels, int n_fft = kFftSize, int sample_rate = kSampleRate,
                      double fmin = 0.0, double fmax = kSampleRate / 2.0);

/// Centre frequency (Hz) of each filter.
std::vector<double> mel_centre_frequencies(int n_mels, double fmin = 0.0,
                                           double fmax = kSampleRate / 2.0);

/// 100 log-mel bands x T frames, T == ceil(num_samples / 256).
struct MelSpectrogram {
  Matrix data;  // bands x frames

  Eigen::Index bands() const { return data.rows(); }
  Eigen::Index frames() const { return data.cols(); }
};

/// log(max(power, 1e-10)) of the mel-filtered power spectrum. Throws TooShort
/// for inputs shorter than the FFT size.
MelSpectrogram compute_mel(const Waveform& wave);
MelSpectrogram compute_mel(const std::vector<double>& samples);

}  // namespace hedtts::dsp
