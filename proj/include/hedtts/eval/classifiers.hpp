// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "hedtts/common/types.hpp"

namespace hedtts::eval {

struct ForestConfig {
  int trees = 50;
  int max_depth = 8;
  int min_samples_leaf = 2;
  std::uint64_t seed = 0;
};

/// Binary random forest: bootstrap samples, sqrt(F) candidate features per
/// split, Gini impurity. Importances are per-tree normalised mean decrease
/// in impurity, averaged over trees.
class RandomForest {
 public:
  void fit(const Matrix& x, const std::vector<bool>& y, const ForestConfig& config = {});
  double predict_proba(const Eigen::Ref<const RowVector>& row) const;
  const Vector& importances() const { return importances_; }

 private:
  struct Node {
    int feature = -1;  // -1 for a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // positive fraction at a leaf
  };
  std::vector<std::vector<Node>> trees_;
  Vector importances_;
};

struct LassoConfig {
  double lambda = 0.01;
  int iterations = 500;
};

/// L1-penalised logistic regression by proximal gradient descent (step 1/L) on
/// standardised features. Importances are |weights| in standardised units.
class L1Logistic {
 public:
  void fit(const Matrix& x, const std::vector<bool>& y, const LassoConfig& config = {});
  double predict_proba(const Eigen::Ref<const RowVector>& row) const;
  Vector importances() const { return weight_.cwiseAbs(); }
  const Vector& weight() const { return weight_; }

 private:
  RowVector mean_, scale_;
  Vector weight_;
  double bias_ = 0.0;
};

}  // namespace hedtts::eval
