// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hedtts/common/error.hpp"
#include "hedtts/dsp/features.hpp"

namespace hedtts::eval {

DtwResult dtw(const Matrix& a, const Matrix& b) {
  require(a.rows() > 0 && b.rows() > 0, ErrorCode::EmptyInput, "DTW needs non-empty sequences");
  require(a.cols() == b.cols(), ErrorCode::DimensionMismatch, "DTW inputs differ in feature width");
  const Eigen::Index n = a.rows(), m = b.rows();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Matrix acc = Matrix::Constant(n + 1, m + 1, kInf);
  acc(0, 0) = 0.0;
  for (Eigen::Index i = 1; i <= n; ++i)
    for (Eigen::Index j = 1; j <= m; ++j) {
      const double d = (a.row(i - 1) - b.row(j - 1)).norm();
      acc(i, j) = d + std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
    }
  DtwResult out;
  out.total_cost = acc(n, m);
  Eigen::Index i = n, j = m;
  while (i > 0 && j > 0) {
    out.path.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
    const double diag = acc(i - 1, j - 1), up = acc(i - 1, j), left = acc(i, j - 1);
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

double naive_frame_distance(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = std::min(a.rows(), b.rows());
  require(n > 0, ErrorCode::EmptyInput, "frame distance needs non-empty sequences");
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += (a.row(i) - b.row(i)).norm();
  return total / static_cast<double>(n);
}

Matrix mel_cepstrum(const dsp::MelSpectrogram& mel) {
  const Eigen::Index bands = mel.bands();
  require(mel.frames() > 0 && bands > kNumCepstra, ErrorCode::EmptyInput, "mel spectrogram is empty");
  Matrix dct(kNumCepstra, bands);
  for (int k = 1; k <= kNumCepstra; ++k)
    for (Eigen::Index b = 0; b < bands; ++b)
      dct(k - 1, b) = 0.5 / static_cast<double>(bands) *
                      std::cos(M_PI * k * (static_cast<double>(b) + 0.5) / static_cast<double>(bands));
  return (dct * mel.data).transpose();
}

double mcd(const dsp::MelSpectrogram& ref, const dsp::MelSpectrogram& syn) {
  return kMcdConstant * dtw(mel_cepstrum(ref), mel_cepstrum(syn)).mean_cost();
}

namespace {

Matrix column(const std::vector<double>& v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = v[i];
  return m;
}

std::optional<double> pitch_from_tracks(const dsp::ProsodyTrack& a, const dsp::ProsodyTrack& b) {
  std::vector<double> fa, fb;
  for (double f : a.f0)
    if (f > 0.0) fa.push_back(f);
  for (double f : b.f0)
    if (f > 0.0) fb.push_back(f);
  if (fa.empty() || fb.empty()) return std::nullopt;
  std::vector<double> la(fa.size()), lb(fb.size());
  std::transform(fa.begin(), fa.end(), la.begin(), [](double f) { return std::log(f); });
  std::transform(fb.begin(), fb.end(), lb.begin(), [](double f) { return std::log(f); });
  const auto path = dtw(column(la), column(lb)).path;
  double total = 0.0;
  for (const auto& [i, j] : path) total += std::abs(fa[static_cast<std::size_t>(i)] - fb[static_cast<std::size_t>(j)]);
  return total / static_cast<double>(path.size());
}

double energy_from_tracks(const dsp::ProsodyTrack& a, const dsp::ProsodyTrack& b) {
  double scale = *std::max_element(a.rms.begin(), a.rms.end());
  if (scale <= 0.0) scale = *std::max_element(b.rms.begin(), b.rms.end());
  if (scale <= 0.0) return 0.0;
  std::vector<double> ea(a.rms), eb(b.rms);
  for (double& e : ea) e /= scale;
  for (double& e : eb) e /= scale;
  return dtw(column(ea), column(eb)).mean_cost();
}

}  // namespace

ProsodyDistortion pitch_energy_distortion(const Waveform& ref, const Waveform& syn) {
  const auto a = dsp::compute_prosody_track(ref);
  const auto b = dsp::compute_prosody_track(syn);
  return {pitch_from_tracks(a, b), energy_from_tracks(a, b)};
}

double pitch_distortion(const Waveform& ref, const Waveform& syn) {
  const auto p = pitch_from_tracks(dsp::compute_prosody_track(ref), dsp::compute_prosody_track(syn));
  if (!p) fail(ErrorCode::AllUnvoiced, "no voiced frames on one side; pitch distortion undefined");
  return *p;
}

double secs(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), ErrorCode::LengthMismatch, "embeddings differ in dimension");
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::ZeroVector, "embedding has zero norm");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

void MetricAccumulator::add(const Waveform& ref, const Waveform& syn, std::optional<double> secs_value) {
  mcd_.push_back(mcd(dsp::compute_mel(ref), dsp::compute_mel(syn)));
  const auto pe = pitch_energy_distortion(ref, syn);
  if (pe.pitch) {
    pitch_.push_back(*pe.pitch);
  } else {
    ++unvoiced_;
  }
  energy_.push_back(pe.energy);
  if (secs_value) secs_.push_back(*secs_value);
  ++pairs_;
}

MetricReport MetricAccumulator::report() const {
  MetricReport r;
  r.mcd = mean_interval(mcd_);
  r.pitch_distortion = mean_interval(pitch_);
  r.energy_distortion = mean_interval(energy_);
  r.secs = mean_interval(secs_);
  r.pairs = pairs_;
  r.unvoiced_pairs = unvoiced_;
  return r;
}

namespace {

nlohmann::json interval_json(const MeanInterval& m) {
  if (m.count == 0) return {{"mean", nullptr}, {"ci95", nullptr}, {"count", 0}};
  return {{"mean", m.mean}, {"ci95", m.half_width}, {"count", m.count}};
}

}  // namespace

nlohmann::json metric_report_to_json(const MetricReport& report) {
  return {{"mcd_db", interval_json(report.mcd)},
          {"pitch_distortion_hz", interval_json(report.pitch_distortion)},
          {"energy_distortion", interval_json(report.energy_distortion)},
          {"secs", interval_json(report.secs)},
          {"pairs", report.pairs},
          {"unvoiced_pairs", report.unvoiced_pairs}};
}

MetricReport metric_report_from_json(const nlohmann::json& doc) {
  auto interval = [](const nlohmann::json& j) {
    MeanInterval m;
    m.count = j.at("count").get<int>();
    if (m.count > 0) {
      m.mean = j.at("mean").get<double>();
      m.half_width = j.at("ci95").get<double>();
    }
    return m;
  };
  MetricReport r;
  r.mcd = interval(doc.at("mcd_db"));
  r.pitch_distortion = interval(doc.at("pitch_distortion_hz"));
  r.energy_distortion = interval(doc.at("energy_distortion"));
  r.secs = interval(doc.at("secs"));
  r.pairs = doc.at("pairs").get<int>();
  r.unvoiced_pairs = doc.at("unvoiced_pairs").get<int>();
  return r;
}

}  // namespace hedtts::eval
