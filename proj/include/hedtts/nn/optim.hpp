// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hedtts/nn/layers.hpp"

namespace hedtts::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // L2 penalty added to the gradient
};

class Adam {
 public:
  Adam(ParameterList params, AdamConfig config = {});

  void step();
  void zero_grad() { nn::zero_grad(params_); }

  double lr() const { return config_.lr; }
  void set_lr(double lr) { config_.lr = lr; }
  const ParameterList& params() const { return params_; }

 private:
  ParameterList params_;
  AdamConfig config_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long t_ = 0;
};

/// Multiplies the learning rate by gamma every step_size calls to step().
class StepLR {
 public:
  StepLR(Adam& optimizer, int step_size = 5, double gamma = 0.8)
      : optimizer_(optimizer), step_size_(step_size), gamma_(gamma) {}

  void step() {
    if (++count_ % step_size_ == 0) optimizer_.set_lr(optimizer_.lr() * gamma_);
  }

 private:
  Adam& optimizer_;
  int step_size_;
  double gamma_;
  int count_ = 0;
};

}  // namespace hedtts::nn
