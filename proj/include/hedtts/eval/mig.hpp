// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hedtts/common/types.hpp"

namespace hedtts::eval {

/// Equal-frequency discretisation: edges are the values at sorted positions
/// floor(k * N / bins), k = 1..bins-1, and a value's bin is the number of
/// edges <= it. Ties always share a bin, so some bins may be empty.
std::vector<int> equal_frequency_bins(const Vector& values, int bins);

/// Plug-in entropy (nats) of a discrete labelling.
double entropy(const std::vector<int>& labels);
/// Plug-in mutual information (nats) from the joint histogram.
double mutual_information(const std::vector<int>& a, const std::vector<int>& b);

/// Per-dimension mutual information between a factor and binned codes.
std::vector<double> code_mutual_information(const Matrix& codes, const std::vector<int>& factor, int bins);

/// Mutual information gap (normalised by H(factor)) of an N x D code matrix,
/// averaged over factors. Throws DegenerateFactor for a single-valued factor,
/// InvalidArgument when N < bins or D < 2.
double mig(const Matrix& codes, const std::vector<std::vector<int>>& factors, int bins);
double mig(const Matrix& codes, const std::vector<int>& factor, int bins);

inline const std::vector<int> kMigBinCounts = {30, 50, 100};

}  // namespace hedtts::eval
