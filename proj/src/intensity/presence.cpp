// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/intensity/presence.hpp"

#include <cmath>

#include "hedtts/common/error.hpp"

namespace hedtts::intensity {

double PresenceTable::presence_average(Level level) const {
  const auto l = static_cast<std::size_t>(level);
  double sum = 0.0;
  int n = 0;
  for (std::size_t e = 0; e < 4; ++e)
    if (presence_count[e][l] > 0) {
      sum += presence[e][l];
      ++n;
    }
  return n > 0 ? sum / n : std::nan("");
}

PresenceTable presence_accuracy(const std::vector<ScoredSegment>& segments) {
  if (segments.empty()) fail(ErrorCode::EmptyTestSet, "no segments to score");
  PresenceTable t;
  std::array<std::array<int, 3>, 4> hits{};
  std::array<int, 3> argmax_hits{};
  for (const auto& s : segments) {
    const auto l = static_cast<std::size_t>(s.level);
    const int truth = intensity_index(s.truth);
    for (int e = 0; e < kNumIntensityEmotions; ++e) {
      const auto ei = static_cast<std::size_t>(e);
      const bool predicted = s.intensity[e] >= 0.5;
      hits[ei][l] += predicted == (truth == e) ? 1 : 0;
      t.presence_count[ei][l] += 1;
    }
    if (truth >= 0) {
      int best = 0;
      for (int e = 1; e < kNumIntensityEmotions; ++e)
        if (s.intensity[e] > s.intensity[best]) best = e;
      argmax_hits[l] += best == truth ? 1 : 0;
      t.argmax_count[l] += 1;
    }
  }
  for (std::size_t l = 0; l < 3; ++l) {
    for (std::size_t e = 0; e < 4; ++e)
      t.presence[e][l] = t.presence_count[e][l] > 0 ? static_cast<double>(hits[e][l]) / t.presence_count[e][l]
                                                    : std::nan("");
    t.argmax[l] = t.argmax_count[l] > 0 ? static_cast<double>(argmax_hits[l]) / t.argmax_count[l] : std::nan("");
  }
  return t;
}

nlohmann::json presence_to_json(const PresenceTable& table) {
  nlohmann::json presence = nlohmann::json::object();
  for (int e = 0; e < kNumIntensityEmotions; ++e) {
    nlohmann::json row = nlohmann::json::object();
    for (Level l : kAllLevels) {
      const double v = table.presence[static_cast<std::size_t>(e)][static_cast<std::size_t>(l)];
      row[std::string(level_name(l))] = std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
    }
    presence[std::string(emotion_name(emotion_at(e)))] = row;
  }
  nlohmann::json argmax = nlohmann::json::object();
  for (Level l : kAllLevels) {
    const double v = table.argmax[static_cast<std::size_t>(l)];
    argmax[std::string(level_name(l))] = std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
  }
  return {{"presence", presence}, {"argmax", argmax}};
}

}  // namespace hedtts::intensity
