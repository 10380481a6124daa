// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/dsp/features.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "hedtts/common/error.hpp"
#include "hedtts/dsp/mel.hpp"
#include "hedtts/dsp/stft.hpp"

namespace hedtts::dsp {

FrameFeatures from_external(const FrameMatrix& m) {
  require(m.frame_rate > 0.0, ErrorCode::InvalidArgument, "frame rate must be positive");
  require(m.matrix.allFinite(), ErrorCode::NonFinite, "external features contain non-finite values");
  return {m.matrix, m.frame_rate, FeatureProvider::External};
}

double estimate_f0(const std::vector<double>& frame, int sample_rate, const PitchConfig& config,
                   double* strength) {
  if (strength) *strength = 0.0;
  const auto n = static_cast<int>(frame.size());
  double energy = 0.0;
  for (double x : frame) energy += x * x;
  if (std::sqrt(energy / std::max(n, 1)) < config.silence_rms) return 0.0;

  const int min_lag = std::max(1, static_cast<int>(std::floor(sample_rate / config.max_hz)));
  const int max_lag = std::min(n - 2, static_cast<int>(std::ceil(sample_rate / config.min_hz)));
  if (max_lag <= min_lag + 1) return 0.0;

  // Lagged products via FFT; overlap energies from prefix sums.
  int size = 1;
  while (size < 2 * n) size <<= 1;
  std::vector<double> padded(static_cast<std::size_t>(size), 0.0);
  std::copy(frame.begin(), frame.end(), padded.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, padded);
  for (auto& c : spec) c = std::norm(c);
  std::vector<double> acf;
  fft.inv(acf, spec);

  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + frame[static_cast<std::size_t>(i)] * frame[static_cast<std::size_t>(i)];

  const int lo = min_lag - 1;
  const int hi = max_lag + 1;
  std::vector<double> r(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (int lag = lo; lag <= hi; ++lag) {
    const double head = prefix[static_cast<std::size_t>(n - lag)];
    const double tail = prefix[static_cast<std::size_t>(n)] - prefix[static_cast<std::size_t>(lag)];
    const double denom = std::sqrt(head * tail);
    r[static_cast<std::size_t>(lag - lo)] = denom > 0.0 ? acf[static_cast<std::size_t>(lag)] / denom : 0.0;
  }
  auto at = [&](int lag) { return r[static_cast<std::size_t>(lag - lo)]; };

  double best = -1.0;
  for (int lag = min_lag; lag <= max_lag; ++lag) best = std::max(best, at(lag));
  if (best < config.voicing_threshold) return 0.0;

  // Shortest lag whose local peak is close to the global one; avoids picking
  // a multiple of the period on strongly periodic input.
  int chosen = -1;
  for (int lag = min_lag; lag <= max_lag; ++lag) {
    const double v = at(lag);
    if (v >= 0.9 * best && v >= at(lag - 1) && v >= at(lag + 1)) {
      chosen = lag;
      break;
    }
  }
  if (chosen < 0) return 0.0;

  const double a = at(chosen - 1);
  const double b = at(chosen);
  const double c = at(chosen + 1);
  const double denom = a - 2.0 * b + c;
  const double shift = std::abs(denom) > 1e-12 ? std::clamp(0.5 * (a - c) / denom, -0.5, 0.5) : 0.0;
  if (strength) *strength = b;
  return sample_rate / (chosen + shift);
}

namespace {

const Matrix& band_filterbank() {
  static const Matrix fb = mel_filterbank(kNumFeatureMelBands);
  return fb;
}

}  // namespace

ProsodyTrack compute_prosody_track(const Waveform& wave, const PitchConfig& pitch) {
  require(wave.samples.size() >= static_cast<std::size_t>(kFftSize), ErrorCode::TooShort,
          "need at least one FFT frame of audio");
  const int frames = num_frames(wave.samples.size());
  ProsodyTrack out;
  out.f0.resize(static_cast<std::size_t>(frames));
  out.rms.resize(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    const auto frame = centred_frame(wave.samples, t);
    double e = 0.0;
    for (double x : frame) e += x * x;
    out.rms[static_cast<std::size_t>(t)] = std::sqrt(e / frame.size());
    out.f0[static_cast<std::size_t>(t)] = estimate_f0(frame, wave.sample_rate, pitch);
  }
  return out;
}

FrameFeatures compute_frame_features(const Waveform& wave, const PitchConfig& pitch) {
  require(wave.samples.size() >= static_cast<std::size_t>(kFftSize), ErrorCode::TooShort,
          "need at least one FFT frame of audio");
  const Matrix magnitude = stft(wave.samples).cwiseAbs();
  const Matrix bands = (band_filterbank() * magnitude.cwiseAbs2()).array().max(kMelFloor).log().matrix();
  const auto frames = magnitude.cols();

  FrameFeatures ff;
  ff.frame_rate = static_cast<double>(wave.sample_rate) / kHopLength;
  ff.values = Matrix::Zero(frames, kNumBuiltinFeatures);
  for (Eigen::Index t = 0; t < frames; ++t) {
    const auto frame = centred_frame(wave.samples, static_cast<int>(t));
    double energy = 0.0;
    int crossings = 0;
    for (std::size_t i = 0; i < frame.size(); ++i) {
      energy += frame[i] * frame[i];
      if (i > 0 && ((frame[i] >= 0.0) != (frame[i - 1] >= 0.0))) ++crossings;
    }
    ff.values(t, column::kLogEnergy) = std::log(energy / frame.size() + kMelFloor);
    const double f0 = estimate_f0(frame, wave.sample_rate, pitch);
    ff.values(t, column::kF0) = f0;
    ff.values(t, column::kVoicing) = f0 > 0.0 ? 1.0 : 0.0;
    ff.values(t, column::kZeroCrossing) = static_cast<double>(crossings) / (frame.size() - 1);

    const auto mag = magnitude.col(t);
    const double total = mag.sum();
    double centroid = 0.0;
    if (total > 1e-12) {
      for (Eigen::Index b = 0; b < mag.size(); ++b)
        centroid += mag(b) * static_cast<double>(b) * wave.sample_rate / kFftSize;
      centroid /= total;
    }
    ff.values(t, column::kCentroid) = centroid;
    ff.values(t, column::kFlux) = t == 0 ? 0.0 : (mag - magnitude.col(t - 1)).norm();
    for (int b = 0; b < kNumFeatureMelBands; ++b) ff.values(t, column::kFirstMelBand + b) = bands(b, t);
  }
  return ff;
}

std::pair<Eigen::Index, Eigen::Index> segment_frame_range(const FrameFeatures& ff,
                                                          const corpus::TimeSpan& span) {
  if (!(span.end > span.start)) fail(ErrorCode::EmptySegment, "segment has non-positive length");
  const double fr = ff.frame_rate;
  const double horizon = ff.frames() / fr;
  if (span.start < -1e-9 || span.start >= horizon)
    fail(ErrorCode::EmptySegment, "segment starts outside the feature range");
  auto first = static_cast<Eigen::Index>(std::ceil(span.start * fr - 1e-9));
  auto last = static_cast<Eigen::Index>(std::ceil(span.end * fr - 1e-9));
  first = std::clamp<Eigen::Index>(first, 0, ff.frames());
  last = std::clamp<Eigen::Index>(last, 0, ff.frames());
  if (last <= first) {
    const auto mid = static_cast<Eigen::Index>(std::floor(0.5 * (span.start + span.end) * fr + 0.5));
    first = std::clamp<Eigen::Index>(mid, 0, ff.frames() - 1);
    last = first + 1;
  }
  return {first, last};
}

Vector functionals_of(const Eigen::Ref<const Matrix>& frames) {
  if (frames.rows() == 0) fail(ErrorCode::EmptySegment, "no frames in segment");
  const auto d = frames.cols();
  Vector out(d * kNumFunctionalStats);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto col = frames.col(j);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    out(4 * j + 0) = mean;
    out(4 * j + 1) = std::sqrt(std::max(var, 0.0));
    out(4 * j + 2) = col.minCoeff();
    out(4 * j + 3) = col.maxCoeff();
  }
  return out;
}

Vector compute_segment_functionals(const FrameFeatures& ff, const corpus::TimeSpan& span) {
  const auto [first, last] = segment_frame_range(ff, span);
  return functionals_of(ff.values.middleRows(first, last - first));
}

}  // namespace hedtts::dsp
