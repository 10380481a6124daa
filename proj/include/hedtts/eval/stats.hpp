// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hedtts/common/types.hpp"

namespace hedtts::eval {

/// Pearson correlation. Throws ConstantSeries when either side has zero
/// variance and LengthMismatch on unequal lengths.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Pearson on average ranks (ties share their mean rank).
double spearman(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> average_ranks(const std::vector<double>& x);

/// Area under the ROC curve of `scores` for binary `positive` labels, with
/// ties counted as one half. Throws SingleClass if one side is empty.
double roc_auc(const std::vector<double>& scores, const std::vector<bool>& positive);

/// Mean and 95 % normal-approximation confidence half-width.
struct MeanInterval {
  double mean = 0.0;
  double half_width = 0.0;
  int count = 0;
};
MeanInterval mean_interval(const std::vector<double>& values);

}  // namespace hedtts::eval
