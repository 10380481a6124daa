// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/dsp/mel.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "hedtts/common/error.hpp"

namespace hedtts::dsp {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> mel_centre_frequencies(int n_mels, double fmin, double fmax) {
  const double lo = hz_to_mel(fmin);
  const double hi = hz_to_mel(fmax);
  std::vector<double> out(static_cast<std::size_t>(n_mels));
  for (int m = 0; m < n_mels; ++m) out[static_cast<std::size_t>(m)] = mel_to_hz(lo + (hi - lo) * (m + 1) / (n_mels + 1));
  return out;
}

Matrix mel_filterbank(int n_mels, int n_fft, int sample_rate, double fmin, double fmax) {
  const int bins = n_fft / 2 + 1;
  const double lo = hz_to_mel(fmin);
  const double hi = hz_to_mel(fmax);
  std::vector<double> edges(static_cast<std::size_t>(n_mels + 2));
  for (int i = 0; i < n_mels + 2; ++i) edges[static_cast<std::size_t>(i)] = mel_to_hz(lo + (hi - lo) * i / (n_mels + 1));

  Matrix fb = Matrix::Zero(n_mels, bins);
  for (int m = 0; m < n_mels; ++m) {
    const double left = edges[static_cast<std::size_t>(m)];
    const double centre = edges[static_cast<std::size_t>(m + 1)];
    const double right = edges[static_cast<std::size_t>(m + 2)];
    for (int b = 0; b < bins; ++b) {
      const double f = static_cast<double>(b) * sample_rate / n_fft;
      double w = 0.0;
      if (f > left && f <= centre) w = (f - left) / (centre - left);
      else if (f > centre && f < right) w = (right - f) / (right - centre);
      fb(m, b) = w;
    }
  }
  return fb;
}

namespace {

const Matrix& cached_filterbank(int n_mels) {
  static std::mutex mu;
  static std::map<int, Matrix> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n_mels);
  if (it == cache.end()) it = cache.emplace(n_mels, mel_filterbank(n_mels)).first;
  return it->second;
}

}  // namespace

MelSpectrogram compute_mel(const std::vector<double>& samples) {
  if (samples.size() < static_cast<std::size_t>(kFftSize))
    fail(ErrorCode::TooShort, "need at least " + std::to_string(kFftSize) + " samples for a mel spectrogram");
  const Matrix power = power_spectrogram(samples);
  MelSpectrogram mel;
  mel.data = (cached_filterbank(kNumMels) * power).array().max(kMelFloor).log().matrix();
  return mel;
}

MelSpectrogram compute_mel(const Waveform& wave) {
  require(wave.sample_rate == kSampleRate, ErrorCode::BadSampleRate, "mel expects 16 kHz audio");
  return compute_mel(wave.samples);
}

}  // namespace hedtts::dsp
