// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hedtts/common/types.hpp"

namespace hedtts::nn {

/// A trainable tensor. Gradients accumulate across backward passes until
/// zero_grad() is called.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v) : name(std::move(n)), value(std::move(v)) { zero_grad(); }

  void zero_grad() { grad = Matrix::Zero(value.rows(), value.cols()); }
  Eigen::Index size() const { return value.size(); }
};

class Tape;

/// Handle to a node on a Tape. Cheap to copy; only valid while the tape lives.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }
};

/// Reverse-mode automatic differentiation over dense matrices. Nodes are
/// appended in evaluation order, so a reverse sweep is a valid topological
/// order. Nodes that do not depend on any Parameter carry no backward closure.
class Tape {
 public:
  Var constant(Matrix value);
  Var param(Parameter& p);

  /// Seeds d(loss)/d(loss) = 1 and accumulates into every reachable Parameter.
  void backward(Var loss);

  const Matrix& value(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].value; }
  bool needs_grad(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].needs_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Used by op implementations.
  using Backward = std::function<void(Tape&, const Matrix& grad)>;
  Var push(Matrix value, bool needs_grad, Backward backward);
  void accumulate(Var v, const Matrix& grad);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool needs_grad = false;
    bool has_grad = false;
    Backward backward;
  };
  std::vector<Node> nodes_;
};

inline const Matrix& Var::value() const { return tape->value(*this); }

// Elementwise and linear algebra.
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);
/// a (N x C) + row (1 x C), broadcast over rows.
Var add_row(Var a, Var row);
/// a (N x C) * row (1 x C), broadcast over rows.
Var mul_row(Var a, Var row);
/// a (N x C) * col (N x 1), broadcast over columns.
Var mul_col(Var a, Var col);
Var transpose(Var a);

// Activations.
Var relu(Var a);
Var silu(Var a);
Var tanh(Var a);
Var sigmoid(Var a);
Var softmax_rows(Var a);
/// Per-row standardisation without affine parameters.
Var layer_norm_rows(Var a, double eps = 1e-5);

// Shape.
Var concat_cols(const std::vector<Var>& parts);
Var concat_rows(const std::vector<Var>& parts);
Var slice_rows(Var a, Eigen::Index start, Eigen::Index count);
Var slice_cols(Var a, Eigen::Index start, Eigen::Index count);
/// out.row(i) = a.row(index[i]); indices may repeat (scatter-add backward).
Var gather_rows(Var a, const std::vector<int>& index);
/// Unfolds a (T x C) sequence into (T_out x K*C) patches for 1-D convolution,
/// zero-padding `pad` frames on each side. Patch layout is [k0 channels | k1 channels | ...].
Var im2col(Var a, int kernel, int stride, int pad);

// Reductions and losses (all return 1 x 1 except mean_rows).
Var sum(Var a);
Var mean(Var a);
/// Mean over rows: (N x C) -> (1 x C).
Var mean_rows(Var a);
Var mse(Var prediction, Var target);
/// Weighted mean of per-row softmax cross-entropy: sum_i w_i CE_i / sum_i w_i.
Var cross_entropy(Var logits, const std::vector<int>& labels, const std::vector<double>& weights = {});

// Gradient flow control.
/// Identity forward; backward multiplies the upstream gradient by -scale.
Var grl(Var a, double scale);
/// Identity forward; blocks gradients.
Var detach(Var a);

/// Row-wise numerically stable softmax on a plain matrix.
Matrix softmax_rows(const Matrix& logits);

}  // namespace hedtts::nn
