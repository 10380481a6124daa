// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hedtts/common/types.hpp"

namespace hedtts::intensity {

enum class HeadType { SER, EPR };

/// s(z)_i = alpha^z_i / sum_j alpha^z_j, evaluated as
/// exp(z_i ln(alpha) - logsumexp(z ln(alpha))).
Vector tempered_softmax(const Vector& logits, double alpha);

/// The 20 candidates 1.1, 1.2, ..., 3.0.
std::vector<double> alpha_grid();

inline constexpr int kCalibrationBins = 10;

/// Intensity values a head emits for a batch of logits. SER rows hold 4
/// logits and yield all 4 probabilities; EPR rows hold 4 (absent, present)
/// pairs and yield the 4 "present" probabilities.
Matrix intensities_from_logits(const Matrix& logits, HeadType head, double alpha);

/// KL(uniform || histogram) over kCalibrationBins equal bins on [0, 1].
double kl_from_uniform(const Matrix& intensities);

struct AlphaSelection {
  double alpha = 1.1;
  std::vector<double> grid;
  std::vector<double> kl;  // aligned with grid
};

/// Evaluates every grid point on the calibration logits and returns the
/// argmin of the KL score, preferring the smaller alpha on ties.
AlphaSelection select_alpha(const Matrix& calibration_logits, HeadType head);

}  // namespace hedtts::intensity
