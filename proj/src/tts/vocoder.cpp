// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/tts/vocoder.hpp"

#include <cmath>
#include <complex>

#include "hedtts/common/error.hpp"
#include "hedtts/common/rng.hpp"

namespace hedtts::tts {

Matrix mel_to_magnitude(const dsp::MelSpectrogram& mel, int nnls_iterations) {
  require(mel.frames() > 0, ErrorCode::EmptyInput, "empty mel spectrogram");
  require(mel.data.allFinite(), ErrorCode::NonFinite, "mel spectrogram contains non-finite values");
  const Matrix fb = dsp::mel_filterbank(static_cast<int>(mel.bands()));
  const Matrix target = mel.data.array().exp().matrix();
  const Matrix gram = fb.transpose() * fb;
  const Matrix rhs = fb.transpose() * target;
  Matrix power = rhs.cwiseMax(0.0);
  for (int it = 0; it < nnls_iterations; ++it) {
    const Matrix denom = gram * power;
    power = power.cwiseProduct(rhs).cwiseQuotient(denom.cwiseMax(1e-30)).cwiseMax(0.0);
  }
  return power.cwiseSqrt();
}

std::vector<double> griffin_lim(const Matrix& magnitude, const GriffinLimConfig& config) {
  const Eigen::Index frames = magnitude.cols();
  require(magnitude.rows() == dsp::kNumBins, ErrorCode::DimensionMismatch, "magnitude must have one row per FFT bin");
  require(frames * dsp::kHopLength >= dsp::kFftSize, ErrorCode::TooShort, "too few frames to reconstruct audio");
  const std::size_t samples = static_cast<std::size_t>(frames * dsp::kHopLength);
  Rng rng(config.seed);
  dsp::ComplexMatrix spec(magnitude.rows(), frames);
  for (Eigen::Index t = 0; t < frames; ++t)
    for (Eigen::Index b = 0; b < magnitude.rows(); ++b)
      spec(b, t) = std::polar(magnitude(b, t), 2.0 * M_PI * rng.uniform());
  std::vector<double> audio = dsp::istft(spec, samples);
  for (int it = 0; it < config.iterations; ++it) {
    const dsp::ComplexMatrix rebuilt = dsp::stft(audio);
    for (Eigen::Index t = 0; t < frames; ++t)
      for (Eigen::Index b = 0; b < magnitude.rows(); ++b) {
        const std::complex<double> z = rebuilt(b, t);
        const double a = std::abs(z);
        spec(b, t) = a > 1e-12 ? z * (magnitude(b, t) / a) : std::complex<double>(magnitude(b, t), 0.0);
      }
    audio = dsp::istft(spec, samples);
  }
  return audio;
}

Waveform vocode(const dsp::MelSpectrogram& mel, const GriffinLimConfig& config) {
  Waveform w;
  w.sample_rate = kSampleRate;
  w.samples = griffin_lim(mel_to_magnitude(mel, config.nnls_iterations), config);
  for (double& s : w.samples) s = std::clamp(s, -1.0, 1.0);
  return w;
}

}  // namespace hedtts::tts
