// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hedtts/common/error.hpp"

namespace hedtts::eval {
namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::array<double, kNumTrajectoryStats> series_statistics(const std::vector<double>& x) {
  require(!x.empty(), ErrorCode::EmptyInput, "empty series");
  const std::size_t n = x.size();
  const double dn = static_cast<double>(n);
  std::array<double, kNumTrajectoryStats> s{};
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / dn;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end());

  s[0] = mean;
  s[1] = quantile(sorted, 0.5);
  s[2] = std::sqrt(ss / dn);
  s[3] = sorted.back();
  s[4] = sorted.front();
  s[5] = quantile(sorted, 0.75) - quantile(sorted, 0.25);

  const double tmean = (dn - 1.0) / 2.0;
  double stt = 0.0, sty = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    stt += (static_cast<double>(t) - tmean) * (static_cast<double>(t) - tmean);
    sty += (static_cast<double>(t) - tmean) * (x[t] - mean);
  }
  s[6] = stt > 0.0 ? sty / stt : 0.0;

  int peaks = 0;
  double prominence = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(x[i] > x[i - 1] && x[i] > x[i + 1])) continue;
    ++peaks;
    double left = x[i];
    for (std::size_t j = i; j-- > 0 && x[j] <= x[i];) left = std::min(left, x[j]);
    double right = x[i];
    for (std::size_t j = i + 1; j < n && x[j] <= x[i]; ++j) right = std::min(right, x[j]);
    prominence += x[i] - std::max(left, right);
  }
  s[7] = peaks;
  s[8] = peaks > 0 ? prominence / peaks : 0.0;

  double lag = 0.0;
  for (std::size_t t = 0; t + 1 < n; ++t) lag += (x[t] - mean) * (x[t + 1] - mean);
  s[9] = ss > 0.0 ? lag / ss : 0.0;
  return s;
}

Vector summarize_trajectory(const Matrix& intensities) {
  require(intensities.rows() > 0, ErrorCode::EmptyInput, "empty trajectory");
  require(intensities.cols() == 4, ErrorCode::DimensionMismatch, "trajectory must have 4 emotion columns");
  Vector out(4 * kNumTrajectoryStats);
  for (int e = 0; e < 4; ++e) {
    const Vector col = intensities.col(e);
    const auto s = series_statistics(std::vector<double>(col.data(), col.data() + col.size()));
    for (int k = 0; k < kNumTrajectoryStats; ++k) out[e * kNumTrajectoryStats + k] = s[static_cast<std::size_t>(k)];
  }
  return out;
}

Vector hed_sample_features(const hed::HierarchicalED& hed) {
  hed::validate_hed(hed);
  // one row per word that owns phones
  std::vector<int> first_rows;
  for (int p = 0; p < hed.num_phones(); ++p)
    if (p == 0 || hed.word_index[static_cast<std::size_t>(p)] != hed.word_index[static_cast<std::size_t>(p) - 1])
      first_rows.push_back(p);
  Matrix word_rows(static_cast<Eigen::Index>(first_rows.size()), 4);
  for (std::size_t w = 0; w < first_rows.size(); ++w)
    word_rows.row(static_cast<Eigen::Index>(w)) = hed.block(Level::Word, first_rows[w]).transpose();
  Vector out(kHedSampleFeatures);
  out.head(4) = hed.block(Level::Utterance, 0);
  out.segment(4, 40) = summarize_trajectory(word_rows);
  out.tail(40) = summarize_trajectory(hed.matrix.leftCols(4));
  return out;
}

}  // namespace hedtts::eval
