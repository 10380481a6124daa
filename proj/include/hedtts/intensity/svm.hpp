// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hedtts/dsp/norm.hpp"
#include "hedtts/intensity/model.hpp"
#include "hedtts/intensity/train.hpp"

namespace hedtts::intensity {

/// Linear SVM trained with the Pegasos stochastic sub-gradient method.
struct LinearSvm {
  Vector weight;
  double bias = 0.0;

  double decision(const Vector& x) const { return weight.dot(x) + bias; }
};

LinearSvm train_linear_svm(const Matrix& x, const std::vector<int>& positive, double lambda, int epochs,
                           std::uint64_t seed);

/// One-vs-rest presence baseline over per-segment functionals. Intensity is
/// the logistic of the decision value, so presence (>= 0.5) is the SVM sign.
class SvmPresenceBaseline {
 public:
  void fit(const std::vector<SegmentSample>& train, double lambda = 1e-3, int epochs = 30, std::uint64_t seed = 0);
  EmotionIntensity predict(const Matrix& raw_frames) const;

 private:
  dsp::NormStats norm_;
  std::array<LinearSvm, 4> svms_;
};

}  // namespace hedtts::intensity
