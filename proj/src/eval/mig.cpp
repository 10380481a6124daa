// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/mig.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hedtts/common/error.hpp"

namespace hedtts::eval {
namespace {

// Relabels arbitrary ints as 0..K-1.
std::vector<int> compact(const std::vector<int>& labels, int& k) {
  std::map<int, int> ids;
  for (int l : labels) ids.emplace(l, 0);
  k = 0;
  for (auto& [l, id] : ids) id = k++;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = ids[labels[i]];
  return out;
}

}  // namespace

std::vector<int> equal_frequency_bins(const Vector& values, int bins) {
  require(bins >= 1, ErrorCode::InvalidArgument, "bin count must be positive");
  const auto n = static_cast<std::size_t>(values.size());
  require(n >= static_cast<std::size_t>(bins), ErrorCode::InvalidArgument, "fewer samples than bins");
  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> edges;
  for (int k = 1; k < bins; ++k) edges.push_back(sorted[static_cast<std::size_t>(k) * n / static_cast<std::size_t>(bins)]);
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = static_cast<int>(std::upper_bound(edges.begin(), edges.end(), values[static_cast<Eigen::Index>(i)]) -
                              edges.begin());
  return out;
}

double entropy(const std::vector<int>& labels) {
  int k = 0;
  const auto c = compact(labels, k);
  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  for (int l : c) counts[static_cast<std::size_t>(l)] += 1.0;
  const double n = static_cast<double>(labels.size());
  double h = 0.0;
  for (double x : counts)
    if (x > 0.0) h -= x / n * std::log(x / n);
  return h;
}

double mutual_information(const std::vector<int>& a, const std::vector<int>& b) {
  require(a.size() == b.size(), ErrorCode::LengthMismatch, "labellings differ in length");
  require(!a.empty(), ErrorCode::EmptyInput, "no samples");
  int ka = 0, kb = 0;
  const auto ca = compact(a, ka);
  const auto cb = compact(b, kb);
  Matrix joint = Matrix::Zero(ka, kb);
  for (std::size_t i = 0; i < ca.size(); ++i) joint(ca[i], cb[i]) += 1.0;
  joint /= static_cast<double>(a.size());
  const Vector pa = joint.rowwise().sum();
  const RowVector pb = joint.colwise().sum();
  double mi = 0.0;
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j)
      if (joint(i, j) > 0.0) mi += joint(i, j) * std::log(joint(i, j) / (pa[i] * pb[j]));
  return std::max(0.0, mi);
}

std::vector<double> code_mutual_information(const Matrix& codes, const std::vector<int>& factor, int bins) {
  require(static_cast<std::size_t>(codes.rows()) == factor.size(), ErrorCode::LengthMismatch,
          "codes and factor labels differ in length");
  std::vector<double> out;
  for (Eigen::Index j = 0; j < codes.cols(); ++j)
    out.push_back(mutual_information(factor, equal_frequency_bins(codes.col(j), bins)));
  return out;
}

double mig(const Matrix& codes, const std::vector<std::vector<int>>& factors, int bins) {
  require(!factors.empty(), ErrorCode::EmptyInput, "no factors");
  require(codes.cols() >= 2, ErrorCode::InvalidArgument, "MIG needs at least two code dimensions");
  double total = 0.0;
  for (const auto& factor : factors) {
    const double h = entropy(factor);
    if (h <= 0.0) fail(ErrorCode::DegenerateFactor, "factor has a single label");
    auto mi = code_mutual_information(codes, factor, bins);
    std::sort(mi.begin(), mi.end(), std::greater<>());
    total += (mi[0] - mi[1]) / h;
  }
  return total / static_cast<double>(factors.size());
}

double mig(const Matrix& codes, const std::vector<int>& factor, int bins) {
  return mig(codes, std::vector<std::vector<int>>{factor}, bins);
}

}  // namespace hedtts::eval
