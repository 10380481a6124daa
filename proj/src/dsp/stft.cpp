// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/dsp/stft.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

#include "hedtts/common/error.hpp"

namespace hedtts::dsp {
namespace {

std::vector<double> reflect_pad(const std::vector<double>& x, int pad) {
  const auto n = static_cast<long>(x.size());
  std::vector<double> out(x.size() + 2 * static_cast<std::size_t>(pad));
  for (long i = 0; i < static_cast<long>(out.size()); ++i) {
    long j = i - pad;
    // reflect without repeating the edge sample; fold until in range
    while (j < 0 || j >= n) {
      if (j < 0) j = -j;
      if (j >= n) j = 2 * (n - 1) - j;
      if (n == 1) j = 0;
    }
    out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace

int num_frames(std::size_t num_samples, int hop) {
  return static_cast<int>((num_samples + static_cast<std::size_t>(hop) - 1) / static_cast<std::size_t>(hop));
}

std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / length);
  return w;
}

ComplexMatrix stft(const std::vector<double>& samples, int n_fft, int hop) {
  require(samples.size() >= static_cast<std::size_t>(n_fft), ErrorCode::TooShort,
          "signal shorter than the FFT size");
  const int frames = num_frames(samples.size(), hop);
  const int bins = n_fft / 2 + 1;
  const auto padded = reflect_pad(samples, n_fft / 2);
  const auto window = hann_window(n_fft);

  Eigen::FFT<double> fft;
  std::vector<double> buf(static_cast<std::size_t>(n_fft));
  std::vector<std::complex<double>> out;
  ComplexMatrix spec(bins, frames);
  for (int t = 0; t < frames; ++t) {
    const std::size_t offset = static_cast<std::size_t>(t) * static_cast<std::size_t>(hop);
    for (int i = 0; i < n_fft; ++i) {
      const std::size_t k = offset + static_cast<std::size_t>(i);
      buf[static_cast<std::size_t>(i)] = (k < padded.size() ? padded[k] : 0.0) * window[static_cast<std::size_t>(i)];
    }
    fft.fwd(out, buf);
    for (int b = 0; b < bins; ++b) spec(b, t) = out[static_cast<std::size_t>(b)];
  }
  return spec;
}

std::vector<double> istft(const ComplexMatrix& spec, std::size_t num_samples, int n_fft, int hop) {
  const int frames = static_cast<int>(spec.cols());
  const int bins = n_fft / 2 + 1;
  require(spec.rows() == bins, ErrorCode::DimensionMismatch, "istft bin count mismatch");
  const auto window = hann_window(n_fft);
  const std::size_t pad = static_cast<std::size_t>(n_fft / 2);
  const std::size_t total = static_cast<std::size_t>(frames - 1) * static_cast<std::size_t>(hop) +
                            static_cast<std::size_t>(n_fft);
  std::vector<double> acc(std::max(total, num_samples + 2 * pad), 0.0);
  std::vector<double> norm(acc.size(), 0.0);

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> full(static_cast<std::size_t>(n_fft));
  std::vector<double> frame;
  for (int t = 0; t < frames; ++t) {
    for (int b = 0; b < bins; ++b) full[static_cast<std::size_t>(b)] = spec(b, t);
    for (int b = bins; b < n_fft; ++b) full[static_cast<std::size_t>(b)] = std::conj(spec(n_fft - b, t));
    fft.inv(frame, full);
    const std::size_t offset = static_cast<std::size_t>(t) * static_cast<std::size_t>(hop);
    for (int i = 0; i < n_fft; ++i) {
      const double w = window[static_cast<std::size_t>(i)];
      acc[offset + static_cast<std::size_t>(i)] += frame[static_cast<std::size_t>(i)] * w;
      norm[offset + static_cast<std::size_t>(i)] += w * w;
    }
  }
  std::vector<double> out(num_samples, 0.0);
  for (std::size_t i = 0; i < num_samples; ++i) {
    const double n = norm[i + pad];
    out[i] = n > 1e-11 ? acc[i + pad] / n : 0.0;
  }
  return out;
}

Matrix power_spectrogram(const std::vector<double>& samples, int n_fft, int hop) {
  return stft(samples, n_fft, hop).cwiseAbs2();
}

std::vector<double> centred_frame(const std::vector<double>& samples, int t, int n_fft, int hop) {
  std::vector<double> frame(static_cast<std::size_t>(n_fft), 0.0);
  const long start = static_cast<long>(t) * hop - n_fft / 2;
  for (int i = 0; i < n_fft; ++i) {
    const long k = start + i;
    if (k >= 0 && k < static_cast<long>(samples.size()))
      frame[static_cast<std::size_t>(i)] = samples[static_cast<std::size_t>(k)];
  }
  return frame;
}

}  // namespace hedtts::dsp
