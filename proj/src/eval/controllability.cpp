// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/controllability.hpp"

#include <cmath>
#include <limits>

#include "hedtts/common/error.hpp"
#include "hedtts/eval/stats.hpp"

namespace hedtts::eval {

ControllabilityReport score_predictions(const SweepPredictions& predictions, const std::vector<Emotion>& targets,
                                        const std::vector<double>& sweep) {
  require(!targets.empty(), ErrorCode::EmptyInput, "no target emotions");
  require(sweep.size() >= 2, ErrorCode::InvalidArgument, "sweep needs at least two values");
  ControllabilityReport r;
  r.targets = targets;
  std::array<std::array<double, 4>, 4> sum{};
  std::array<std::array<int, 4>, 4> count{};
  double pos_sum = 0.0, neg_sum = 0.0;
  int pos_n = 0, neg_n = 0;
  for (const auto& per_case : predictions) {
    require(per_case.size() == targets.size(), ErrorCode::LengthMismatch, "predictions do not cover every target");
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const int target = intensity_index(targets[t]);
      require(target >= 0, ErrorCode::InvalidArgument, "Neutral cannot be a sweep target");
      require(per_case[t].size() == sweep.size(), ErrorCode::LengthMismatch, "prediction count != sweep length");
      for (int p = 0; p < kNumIntensityEmotions; ++p) {
        std::vector<double> y;
        for (const auto& pred : per_case[t]) y.push_back(pred.values[static_cast<std::size_t>(p)]);
        ++r.pairs;
        double c = 0.0;
        try {
          c = pearson(sweep, y);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ConstantSeries) throw;
          ++r.skipped_pairs;
          continue;
        }
        sum[static_cast<std::size_t>(target)][static_cast<std::size_t>(p)] += c;
        ++count[static_cast<std::size_t>(target)][static_cast<std::size_t>(p)];
        if (p == target) {
          pos_sum += c;
          ++pos_n;
        } else {
          neg_sum += std::max(0.0, c);
          ++neg_n;
        }
      }
    }
  }
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      r.correlation[a][b] = count[a][b] > 0 ? sum[a][b] / count[a][b] : std::numeric_limits<double>::quiet_NaN();
  if (pos_n > 0) r.positive = pos_sum / pos_n;
  if (pos_n > 0) {
    // a constant cross-emotion prediction shows no confusion
    r.negative = neg_n > 0 ? neg_sum / neg_n : 0.0;
    r.score = *r.positive - *r.negative;
  }
  return r;
}

ControllabilityReport controllability_score(const Probe& probe, const SweepSynth& synth, std::size_t cases,
                                            const std::vector<Emotion>& targets,
                                            const std::vector<double>& sweep) {
  SweepPredictions predictions(cases);
  for (std::size_t c = 0; c < cases; ++c)
    for (Emotion target : targets) {
      std::vector<intensity::EmotionIntensity> row;
      for (double v : sweep) row.push_back(probe(synth(c, target, v)));
      predictions[c].push_back(std::move(row));
    }
  return score_predictions(predictions, targets, sweep);
}

nlohmann::json controllability_to_json(const ControllabilityReport& report) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json matrix = nlohmann::json::object();
  for (int a = 0; a < 4; ++a) {
    nlohmann::json row = nlohmann::json::object();
    for (int b = 0; b < 4; ++b) {
      const double v = report.correlation[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      row[std::string(emotion_name(emotion_at(b)))] = std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
    }
    matrix[std::string(emotion_name(emotion_at(a)))] = row;
  }
  nlohmann::json targets = nlohmann::json::array();
  for (Emotion e : report.targets) targets.push_back(emotion_name(e));
  return {{"positive", opt(report.positive)}, {"negative", opt(report.negative)}, {"score", opt(report.score)},
          {"defined", report.defined()},      {"pairs", report.pairs},           {"skipped_pairs", report.skipped_pairs},
          {"targets", targets},               {"correlation", matrix}};
}

ControllabilityReport controllability_from_json(const nlohmann::json& doc) {
  auto opt = [](const nlohmann::json& j) { return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>()); };
  ControllabilityReport r;
  r.positive = opt(doc.at("positive"));
  r.negative = opt(doc.at("negative"));
  r.score = opt(doc.at("score"));
  r.pairs = doc.at("pairs").get<int>();
  r.skipped_pairs = doc.at("skipped_pairs").get<int>();
  for (const auto& t : doc.at("targets")) {
    const auto e = parse_emotion(t.get<std::string>());
    require(e.has_value(), ErrorCode::CorruptPayload, "unknown target emotion in report");
    r.targets.push_back(*e);
  }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto& v = doc.at("correlation").at(std::string(emotion_name(emotion_at(a)))).at(std::string(emotion_name(emotion_at(b))));
      r.correlation[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    }
  return r;
}

}  // namespace hedtts::eval
