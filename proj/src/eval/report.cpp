// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hedtts/corpus/corpus.hpp"
#include "hedtts/eval/mig.hpp"

namespace hedtts::eval {
namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::string interval(const MeanInterval& m) { return m.count == 0 ? "," : num(m.mean) + "," + num(m.half_width); }

}  // namespace

std::string metric_table_csv(const std::map<std::string, MetricReport>& systems) {
  std::string out = "system,mcd_db,mcd_ci95,pitch_hz,pitch_ci95,energy,energy_ci95,secs,secs_ci95,pairs,unvoiced_pairs\n";
  for (const auto& [name, r] : systems)
    out += corpus::csv_escape(name) + "," + interval(r.mcd) + "," + interval(r.pitch_distortion) + "," +
           interval(r.energy_distortion) + "," + interval(r.secs) + "," + std::to_string(r.pairs) + "," +
           std::to_string(r.unvoiced_pairs) + "\n";
  return out;
}

std::string controllability_table_csv(const std::map<std::string, ControllabilityReport>& systems) {
  std::string out = "system,positive,negative,score,pairs,skipped_pairs\n";
  for (const auto& [name, r] : systems)
    out += corpus::csv_escape(name) + "," + num(r.positive) + "," + num(r.negative) + "," + num(r.score) + "," +
           std::to_string(r.pairs) + "," + std::to_string(r.skipped_pairs) + "\n";
  return out;
}

std::string leakage_table_csv(const std::map<std::string, DisentanglementReport>& systems) {
  std::string out = "system";
  for (int b : kMigBinCounts) out += ",mig_" + std::to_string(b);
  out += ",disentanglement_rf,disentanglement_lasso,explicitness_rf,explicitness_lasso\n";
  for (const auto& [name, r] : systems) {
    out += corpus::csv_escape(name);
    for (int b : kMigBinCounts) {
      const auto it = r.mig.find(b);
      out += "," + (it == r.mig.end() ? std::string() : num(it->second));
    }
    auto field = [&](const char* cls, bool dis) {
      const auto it = r.classifiers.find(cls);
      if (it == r.classifiers.end()) return std::string();
      return num(dis ? it->second.disentanglement : it->second.explicitness);
    };
    out += "," + field("RF", true) + "," + field("Lasso", true) + "," + field("RF", false) + "," +
           field("Lasso", false) + "\n";
  }
  return out;
}

std::string trend_table_csv(const TrendTable& table) {
  std::string out = "emotion,feature";
  for (double v : table.sweep) out += ",at_" + num(v);
  out += ",spearman,expected_sign,matches\n";
  for (const auto& [e, cells] : table.cells)
    for (int k = 0; k < kNumProsodyFeatures; ++k) {
      const auto& c = cells[static_cast<std::size_t>(k)];
      out += std::string(emotion_name(e)) + "," + std::string(kProsodyFeatureNames[static_cast<std::size_t>(k)]);
      for (double v : table.curves.at(e)[static_cast<std::size_t>(k)]) out += "," + num(v);
      out += "," + num(c.rho) + "," + std::to_string(c.expected) + "," + (c.matches() ? "1" : "0") + "\n";
    }
  return out;
}

std::string trend_plot_svg(const TrendTable& table) {
  constexpr int kCellW = 180, kCellH = 120, kPad = 30, kLabelW = 80, kHeaderH = 30;
  const int rows = static_cast<int>(table.cells.size());
  const int width = kLabelW + kNumProsodyFeatures * kCellW;
  const int height = kHeaderH + rows * kCellH;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
                    std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int k = 0; k < kNumProsodyFeatures; ++k)
    svg += "<text x=\"" + std::to_string(kLabelW + k * kCellW + kCellW / 2) + "\" y=\"18\" text-anchor=\"middle\">" +
           std::string(kProsodyFeatureNames[static_cast<std::size_t>(k)]) + "</text>\n";
  const double x0 = table.sweep.empty() ? 0.0 : table.sweep.front();
  const double x1 = table.sweep.empty() ? 1.0 : table.sweep.back();
  int r = 0;
  for (const auto& [e, cells] : table.cells) {
    const int top = kHeaderH + r * kCellH;
    svg += "<text x=\"4\" y=\"" + std::to_string(top + kCellH / 2) + "\">" + std::string(emotion_name(e)) + "</text>\n";
    for (int k = 0; k < kNumProsodyFeatures; ++k) {
      const auto& cell = cells[static_cast<std::size_t>(k)];
      const auto& ys = table.curves.at(e)[static_cast<std::size_t>(k)];
      const int left = kLabelW + k * kCellW;
      // expected trend as background: blue positive, red negative
      const char* fill = cell.expected > 0 ? "#dde8ff" : (cell.expected < 0 ? "#ffdede" : "#f4f4f4");
      svg += "<rect x=\"" + std::to_string(left + 4) + "\" y=\"" + std::to_string(top + 4) + "\" width=\"" +
             std::to_string(kCellW - 8) + "\" height=\"" + std::to_string(kCellH - 8) + "\" fill=\"" + fill + "\"/>\n";
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (double y : ys)
        if (std::isfinite(y)) {
          lo = std::min(lo, y);
          hi = std::max(hi, y);
        }
      if (!std::isfinite(lo)) continue;
      if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
      }
      std::string points;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        if (!std::isfinite(ys[i])) continue;
        const double px = left + kPad / 2 + (table.sweep[i] - x0) / (x1 - x0 == 0.0 ? 1.0 : x1 - x0) * (kCellW - kPad);
        const double py = top + kCellH - kPad / 2 - (ys[i] - lo) / (hi - lo) * (kCellH - kPad);
        points += num(px) + "," + num(py) + " ";
      }
      svg += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      svg += "<text x=\"" + std::to_string(left + 10) + "\" y=\"" + std::to_string(top + 18) + "\">rho " +
             (cell.rho ? num(*cell.rho) : std::string("n/a")) + "</text>\n";
    }
    ++r;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace hedtts::eval
