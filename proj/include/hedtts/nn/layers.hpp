// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "hedtts/common/archive.hpp"
#include "hedtts/common/rng.hpp"
#include "hedtts/nn/tape.hpp"

namespace hedtts::nn {

using ParameterList = std::vector<Parameter*>;

/// y = x W + b with W stored (in x out), uniform(+-1/sqrt(in)) init.
class Linear {
 public:
  Linear() = default;
  Linear(const std::string& name, int in, int out, Rng& rng, bool bias = true);

  Var operator()(Var x) const;
  void collect(ParameterList& out) const;

  int in_features() const { return static_cast<int>(weight.value.rows()); }
  int out_features() const { return static_cast<int>(weight.value.cols()); }

  mutable Parameter weight;
  mutable Parameter bias;
  bool has_bias = true;
};

/// 1-D convolution over a (T x C_in) sequence via im2col; weight is (K*C_in x C_out).
class Conv1d {
 public:
  Conv1d() = default;
  Conv1d(const std::string& name, int in, int out, int kernel, Rng& rng, int stride = 1, int pad = -1);

  Var operator()(Var x) const;
  void collect(ParameterList& out) const;

  int kernel = 3;
  int stride = 1;
  int pad = 1;
  mutable Parameter weight;
  mutable Parameter bias;
};

class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(const std::string& name, int dim);

  Var operator()(Var x) const;
  void collect(ParameterList& out) const;

  mutable Parameter gain;
  mutable Parameter bias;
};

class Embedding {
 public:
  Embedding() = default;
  Embedding(const std::string& name, int count, int dim, Rng& rng);

  Var operator()(Tape& tape, const std::vector<int>& ids) const;
  void collect(ParameterList& out) const;

  mutable Parameter table;
};

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng);
Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng);

std::size_t parameter_count(const ParameterList& params);
void zero_grad(const ParameterList& params);
/// Scales gradients so their global L2 norm is at most max_norm; returns the pre-clip norm.
double clip_grad_norm(const ParameterList& params, double max_norm);

void store_parameters(TensorArchive& archive, const ParameterList& params);
/// Loads by name; shapes must match exactly.
void restore_parameters(const TensorArchive& archive, const ParameterList& params);

}  // namespace hedtts::nn
