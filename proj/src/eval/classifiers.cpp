// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hedtts/common/error.hpp"
#include "hedtts/common/rng.hpp"

namespace hedtts::eval {
namespace {

double gini(double pos, double n) {
  if (n <= 0.0) return 0.0;
  const double p = pos / n;
  return 2.0 * p * (1.0 - p);
}

struct TreeBuilder {
  const Matrix& x;
  const std::vector<bool>& y;
  const ForestConfig& config;
  Rng& rng;
  Vector& importance;
  double total;

  template <typename NodeT>
  int build(std::vector<NodeT>& nodes, std::vector<int>& idx, int depth) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    double pos = 0.0;
    for (int i : idx) pos += y[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    const double n = static_cast<double>(idx.size());
    nodes[static_cast<std::size_t>(id)].value = pos / n;
    if (depth >= config.max_depth || pos == 0.0 || pos == n ||
        idx.size() < 2 * static_cast<std::size_t>(config.min_samples_leaf))
      return id;

    const int features = static_cast<int>(x.cols());
    const int mtry = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(features)))));
    std::vector<int> candidates(static_cast<std::size_t>(features));
    std::iota(candidates.begin(), candidates.end(), 0);
    rng.shuffle(candidates);
    candidates.resize(static_cast<std::size_t>(mtry));

    const double parent = gini(pos, n);
    double best_gain = 1e-12;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<int> order(idx);
    for (int f : candidates) {
      std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
      double left_pos = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        left_pos += y[static_cast<std::size_t>(order[k])] ? 1.0 : 0.0;
        const double lo = x(order[k], f), hi = x(order[k + 1], f);
        if (lo == hi) continue;
        const double nl = static_cast<double>(k + 1), nr = n - nl;
        if (nl < config.min_samples_leaf || nr < config.min_samples_leaf) continue;
        const double gain = parent - (nl * gini(left_pos, nl) + nr * gini(pos - left_pos, nr)) / n;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = f;
          best_threshold = 0.5 * (lo + hi);
        }
      }
    }
    if (best_feature < 0) return id;
    importance[best_feature] += n / total * best_gain;
    std::vector<int> left, right;
    for (int i : idx) (x(i, best_feature) <= best_threshold ? left : right).push_back(i);
    nodes[static_cast<std::size_t>(id)].feature = best_feature;
    nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
    const int l = build(nodes, left, depth + 1);
    const int r = build(nodes, right, depth + 1);
    nodes[static_cast<std::size_t>(id)].left = l;
    nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }
};

}  // namespace

void RandomForest::fit(const Matrix& x, const std::vector<bool>& y, const ForestConfig& config) {
  require(x.rows() > 0 && static_cast<std::size_t>(x.rows()) == y.size(), ErrorCode::LengthMismatch,
          "forest inputs differ in length");
  require(config.trees > 0, ErrorCode::InvalidArgument, "forest needs at least one tree");
  Rng rng(config.seed);
  trees_.assign(static_cast<std::size_t>(config.trees), {});
  importances_ = Vector::Zero(x.cols());
  const auto n = static_cast<std::uint64_t>(x.rows());
  for (auto& tree : trees_) {
    std::vector<int> sample(n);
    for (auto& s : sample) s = static_cast<int>(rng.index(n));
    Vector imp = Vector::Zero(x.cols());
    TreeBuilder builder{x, y, config, rng, imp, static_cast<double>(n)};
    builder.build(tree, sample, 0);
    if (imp.sum() > 0.0) importances_ += imp / imp.sum();
  }
  importances_ /= static_cast<double>(config.trees);
}

double RandomForest::predict_proba(const Eigen::Ref<const RowVector>& row) const {
  require(!trees_.empty(), ErrorCode::ModelNotLoaded, "forest is not fitted");
  double total = 0.0;
  for (const auto& tree : trees_) {
    int node = 0;
    while (tree[static_cast<std::size_t>(node)].feature >= 0) {
      const auto& nd = tree[static_cast<std::size_t>(node)];
      node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    total += tree[static_cast<std::size_t>(node)].value;
  }
  return total / static_cast<double>(trees_.size());
}

void L1Logistic::fit(const Matrix& x, const std::vector<bool>& y, const LassoConfig& config) {
  require(x.rows() > 0 && static_cast<std::size_t>(x.rows()) == y.size(), ErrorCode::LengthMismatch,
          "logistic inputs differ in length");
  const double n = static_cast<double>(x.rows());
  mean_ = x.colwise().mean();
  scale_ = ((x.rowwise() - mean_).array().square().colwise().sum() / n).sqrt();
  for (Eigen::Index j = 0; j < scale_.size(); ++j)
    if (scale_[j] < 1e-12) scale_[j] = 1.0;
  const Matrix z = (x.rowwise() - mean_).array().rowwise() / scale_.array();
  Vector target(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) target[i] = y[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  // step 1/L from the largest eigenvalue of Z'Z/n (power iteration)
  Vector v = Vector::Ones(x.cols()) / std::sqrt(static_cast<double>(x.cols()));
  double eig = 1.0;
  for (int k = 0; k < 30; ++k) {
    const Vector w = z.transpose() * (z * v) / n;
    eig = w.norm();
    if (eig <= 0.0) break;
    v = w / eig;
  }
  const double step = 1.0 / (0.25 * std::max(eig, 1.0));
  weight_ = Vector::Zero(x.cols());
  bias_ = 0.0;
  for (int it = 0; it < config.iterations; ++it) {
    const Vector logits = (z * weight_).array() + bias_;
    const Vector p = logits.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    const Vector r = p - target;
    weight_ -= step * (z.transpose() * r) / n;
    bias_ -= step * r.mean();
    const double t = step * config.lambda;
    weight_ = weight_.unaryExpr([t](double w) { return w > t ? w - t : (w < -t ? w + t : 0.0); });
  }
}

double L1Logistic::predict_proba(const Eigen::Ref<const RowVector>& row) const {
  require(weight_.size() == row.size(), ErrorCode::DimensionMismatch, "logistic model is not fitted for this width");
  const double v = ((row - mean_).array() / scale_.array()).matrix().dot(weight_.transpose()) + bias_;
  return 1.0 / (1.0 + std::exp(-v));
}

}  // namespace hedtts::eval
