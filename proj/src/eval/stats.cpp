// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hedtts/common/error.hpp"

namespace hedtts::eval {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorCode::LengthMismatch, "correlation inputs differ in length");
  require(x.size() >= 2, ErrorCode::ConstantSeries, "correlation needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  // relative floor so that float noise on a constant series still counts as constant
  const auto flat = [&](double ss, double m) { return ss <= 1e-24 * std::max(1.0, m * m) * n; };
  if (flat(sxx, mx) || flat(syy, my)) fail(ErrorCode::ConstantSeries, "series has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), ErrorCode::LengthMismatch, "correlation inputs differ in length");
  return pearson(average_ranks(x), average_ranks(y));
}

double roc_auc(const std::vector<double>& scores, const std::vector<bool>& positive) {
  require(scores.size() == positive.size(), ErrorCode::LengthMismatch, "scores and labels differ in length");
  const auto ranks = average_ranks(scores);
  double pos = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (!positive[i]) continue;
    pos += 1.0;
    rank_sum += ranks[i];
  }
  const double neg = static_cast<double>(scores.size()) - pos;
  if (pos == 0.0 || neg == 0.0) fail(ErrorCode::SingleClass, "AUC needs both classes");
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

MeanInterval mean_interval(const std::vector<double>& values) {
  MeanInterval out;
  out.count = static_cast<int>(values.size());
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.half_width = 1.96 * std::sqrt(ss / (n - 1.0) / n);
  return out;
}

}  // namespace hedtts::eval
