// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/trends.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hedtts/common/error.hpp"
#include "hedtts/dsp/features.hpp"
#include "hedtts/eval/stats.hpp"

namespace hedtts::eval {
namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(v.size()))};
}

std::optional<double> safe_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> a, b;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::isfinite(y[i])) {
      a.push_back(x[i]);
      b.push_back(y[i]);
    }
  try {
    return spearman(a, b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ConstantSeries) throw;
    return std::nullopt;
  }
}

}  // namespace

std::array<double, kNumProsodyFeatures> prosody_features(const Waveform& wave) {
  const auto track = dsp::compute_prosody_track(wave);
  std::vector<double> f0, energy;
  for (double f : track.f0)
    if (f > 0.0) f0.push_back(f);
  const double peak = *std::max_element(track.rms.begin(), track.rms.end());
  for (double r : track.rms)
    if (peak > 0.0 && r >= peak * 0.01) energy.push_back(std::log(r));
  const auto [pm, ps] = mean_std(f0);
  const auto [em, es] = mean_std(energy);
  return {wave.duration(), pm, ps, em, es};
}

TrendSigns expected_trends(const std::vector<std::array<double, kNumProsodyFeatures>>& features,
                           const std::vector<Emotion>& emotions, const std::vector<double>& intensities) {
  require(features.size() == emotions.size() && features.size() == intensities.size(), ErrorCode::LengthMismatch,
          "trend inputs differ in length");
  TrendSigns out;
  for (Emotion target : kIntensityOrder) {
    std::array<int, kNumProsodyFeatures> signs{};
    for (int f = 0; f < kNumProsodyFeatures; ++f) {
      std::vector<double> x, y;
      for (std::size_t i = 0; i < features.size(); ++i) {
        if (emotions[i] != target && emotions[i] != Emotion::Neutral) continue;
        x.push_back(emotions[i] == Emotion::Neutral ? 0.0 : intensities[i]);
        y.push_back(features[i][static_cast<std::size_t>(f)]);
      }
      const auto rho = safe_spearman(x, y);
      signs[static_cast<std::size_t>(f)] = !rho || *rho == 0.0 ? 0 : (*rho > 0.0 ? 1 : -1);
    }
    out[target] = signs;
  }
  return out;
}

TrendTable prosody_trend_analysis(const IntensitySynth& synth, const std::vector<Emotion>& emotions,
                                  const std::vector<double>& sweep, const TrendSigns& expected) {
  require(sweep.size() >= 2, ErrorCode::InvalidArgument, "sweep needs at least two values");
  TrendTable table;
  table.sweep = sweep;
  for (Emotion e : emotions) {
    require(intensity_index(e) >= 0, ErrorCode::InvalidArgument, "Neutral cannot be swept");
    auto& curves = table.curves[e];
    for (double v : sweep) {
      const auto f = prosody_features(synth(e, v));
      for (int k = 0; k < kNumProsodyFeatures; ++k) curves[static_cast<std::size_t>(k)].push_back(f[static_cast<std::size_t>(k)]);
    }
    auto& cells = table.cells[e];
    const auto it = expected.find(e);
    for (int k = 0; k < kNumProsodyFeatures; ++k) {
      cells[static_cast<std::size_t>(k)].rho = safe_spearman(sweep, curves[static_cast<std::size_t>(k)]);
      if (it != expected.end()) cells[static_cast<std::size_t>(k)].expected = it->second[static_cast<std::size_t>(k)];
    }
  }
  return table;
}

nlohmann::json trends_to_json(const TrendTable& table) {
  nlohmann::json out = {{"sweep", table.sweep}, {"emotions", nlohmann::json::object()}};
  for (const auto& [e, cells] : table.cells) {
    nlohmann::json row = nlohmann::json::object();
    for (int k = 0; k < kNumProsodyFeatures; ++k) {
      const auto& c = cells[static_cast<std::size_t>(k)];
      nlohmann::json values = nlohmann::json::array();
      for (double v : table.curves.at(e)[static_cast<std::size_t>(k)])
        values.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
      row[std::string(kProsodyFeatureNames[static_cast<std::size_t>(k)])] = {
          {"spearman", c.rho ? nlohmann::json(*c.rho) : nlohmann::json(nullptr)},
          {"expected_sign", c.expected},
          {"matches", c.matches()},
          {"values", values}};
    }
    out["emotions"][std::string(emotion_name(e))] = row;
  }
  return out;
}

TrendTable trends_from_json(const nlohmann::json& doc) {
  TrendTable t;
  t.sweep = doc.at("sweep").get<std::vector<double>>();
  for (const auto& [name, row] : doc.at("emotions").items()) {
    const auto e = parse_emotion(name);
    require(e.has_value(), ErrorCode::CorruptPayload, "unknown emotion '" + name + "' in trend report");
    auto& cells = t.cells[*e];
    auto& curves = t.curves[*e];
    for (std::size_t k = 0; k < kProsodyFeatureNames.size(); ++k) {
      const auto& j = row.at(std::string(kProsodyFeatureNames[k]));
      if (!j.at("spearman").is_null()) cells[k].rho = j.at("spearman").get<double>();
      cells[k].expected = j.at("expected_sign").get<int>();
      for (const auto& v : j.at("values"))
        curves[k].push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    }
  }
  return t;
}

}  // namespace hedtts::eval
