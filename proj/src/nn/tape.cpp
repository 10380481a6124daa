// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/nn/tape.hpp"

#include <cmath>

#include "hedtts/common/error.hpp"

namespace hedtts::nn {

namespace {

Tape& tape_of(Var a) {
  require(a.tape != nullptr, ErrorCode::InvalidArgument, "variable is not attached to a tape");
  return *a.tape;
}

void same_tape(Var a, Var b) {
  require(a.tape == b.tape, ErrorCode::InvalidArgument, "variables belong to different tapes");
}

void same_shape(const Matrix& a, const Matrix& b, const char* op) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
          std::string(op) + ": shape " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
              " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

}  // namespace

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Tape::param(Parameter& p) {
  Parameter* target = &p;
  return push(p.value, true, [target](Tape&, const Matrix& g) { target->grad += g; });
}

Var Tape::push(Matrix value, bool needs_grad, Backward backward) {
  Node node;
  node.value = std::move(value);
  node.needs_grad = needs_grad;
  if (needs_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

void Tape::accumulate(Var v, const Matrix& grad) {
  Node& node = nodes_[static_cast<std::size_t>(v.id)];
  if (!node.needs_grad) return;
  if (!node.has_grad) {
    node.grad = grad;
    node.has_grad = true;
  } else {
    node.grad += grad;
  }
}

void Tape::backward(Var loss) {
  require(loss.tape == this, ErrorCode::InvalidArgument, "loss belongs to another tape");
  const Matrix& value = nodes_[static_cast<std::size_t>(loss.id)].value;
  require(value.size() == 1, ErrorCode::DimensionMismatch, "backward expects a scalar loss");
  if (!value.allFinite()) fail(ErrorCode::DivergedLoss, "loss is not finite");
  accumulate(loss, Matrix::Ones(1, 1));
  for (int i = loss.id; i >= 0; --i) {
    Node& node = nodes_[static_cast<std::size_t>(i)];
    if (!node.has_grad || !node.backward) continue;
    node.backward(*this, node.grad);
    node.grad.resize(0, 0);
    node.has_grad = false;
  }
}

Var matmul(Var a, Var b) {
  same_tape(a, b);
  Tape& t = tape_of(a);
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch,
          "matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " * " +
              std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  return t.push(a.value() * b.value(), t.needs_grad(a) || t.needs_grad(b), [a, b](Tape& t, const Matrix& g) {
    if (t.needs_grad(a)) t.accumulate(a, g * t.value(b).transpose());
    if (t.needs_grad(b)) t.accumulate(b, t.value(a).transpose() * g);
  });
}

Var add(Var a, Var b) {
  same_tape(a, b);
  same_shape(a.value(), b.value(), "add");
  Tape& t = tape_of(a);
  return t.push(a.value() + b.value(), t.needs_grad(a) || t.needs_grad(b), [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

Var sub(Var a, Var b) {
  same_tape(a, b);
  same_shape(a.value(), b.value(), "sub");
  Tape& t = tape_of(a);
  return t.push(a.value() - b.value(), t.needs_grad(a) || t.needs_grad(b), [a, b](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    if (t.needs_grad(b)) t.accumulate(b, -g);
  });
}

Var mul(Var a, Var b) {
  same_tape(a, b);
  same_shape(a.value(), b.value(), "mul");
  Tape& t = tape_of(a);
  return t.push(a.value().cwiseProduct(b.value()), t.needs_grad(a) || t.needs_grad(b),
                [a, b](Tape& t, const Matrix& g) {
                  if (t.needs_grad(a)) t.accumulate(a, g.cwiseProduct(t.value(b)));
                  if (t.needs_grad(b)) t.accumulate(b, g.cwiseProduct(t.value(a)));
                });
}

Var scale(Var a, double s) {
  Tape& t = tape_of(a);
  return t.push(a.value() * s, t.needs_grad(a), [a, s](Tape& t, const Matrix& g) { t.accumulate(a, g * s); });
}

Var add_scalar(Var a, double s) {
  Tape& t = tape_of(a);
  return t.push((a.value().array() + s).matrix(), t.needs_grad(a),
                [a](Tape& t, const Matrix& g) { t.accumulate(a, g); });
}

Var add_row(Var a, Var row) {
  same_tape(a, row);
  require(row.rows() == 1 && row.cols() == a.cols(), ErrorCode::DimensionMismatch, "add_row: bad row shape");
  Tape& t = tape_of(a);
  Matrix out = a.value();
  out.rowwise() += row.value().row(0);
  return t.push(std::move(out), t.needs_grad(a) || t.needs_grad(row), [a, row](Tape& t, const Matrix& g) {
    t.accumulate(a, g);
    if (t.needs_grad(row)) t.accumulate(row, g.colwise().sum());
  });
}

Var mul_row(Var a, Var row) {
  same_tape(a, row);
  require(row.rows() == 1 && row.cols() == a.cols(), ErrorCode::DimensionMismatch, "mul_row: bad row shape");
  Tape& t = tape_of(a);
  Matrix out = a.value().array().rowwise() * row.value().row(0).array();
  return t.push(std::move(out), t.needs_grad(a) || t.needs_grad(row), [a, row](Tape& t, const Matrix& g) {
    if (t.needs_grad(a)) t.accumulate(a, (g.array().rowwise() * t.value(row).row(0).array()).matrix());
    if (t.needs_grad(row)) t.accumulate(row, g.cwiseProduct(t.value(a)).colwise().sum());
  });
}

Var mul_col(Var a, Var col) {
  same_tape(a, col);
  require(col.cols() == 1 && col.rows() == a.rows(), ErrorCode::DimensionMismatch, "mul_col: bad column shape");
  Tape& t = tape_of(a);
  Matrix out = a.value().array().colwise() * col.value().col(0).array();
  return t.push(std::move(out), t.needs_grad(a) || t.needs_grad(col), [a, col](Tape& t, const Matrix& g) {
    if (t.needs_grad(a)) t.accumulate(a, (g.array().colwise() * t.value(col).col(0).array()).matrix());
    if (t.needs_grad(col)) t.accumulate(col, g.cwiseProduct(t.value(a)).rowwise().sum());
  });
}

Var transpose(Var a) {
  Tape& t = tape_of(a);
  return t.push(a.value().transpose(), t.needs_grad(a),
                [a](Tape& t, const Matrix& g) { t.accumulate(a, g.transpose()); });
}

Var relu(Var a) {
  Tape& t = tape_of(a);
  return t.push(a.value().cwiseMax(0.0), t.needs_grad(a), [a](Tape& t, const Matrix& g) {
    t.accumulate(a, (t.value(a).array() > 0.0).select(g, 0.0).matrix());
  });
}

Var silu(Var a) {
  Tape& t = tape_of(a);
  const Eigen::ArrayXXd sig = 1.0 / (1.0 + (-a.value().array()).exp());
  Matrix out = (a.value().array() * sig).matrix();
  return t.push(std::move(out), t.needs_grad(a), [a, sig](Tape& t, const Matrix& g) {
    const auto& x = t.value(a).array();
    t.accumulate(a, (g.array() * (sig * (1.0 + x * (1.0 - sig)))).matrix());
  });
}

Var tanh(Var a) {
  Tape& t = tape_of(a);
  Matrix out = a.value().array().tanh().matrix();
  const int id = static_cast<int>(t.size());
  return t.push(std::move(out), t.needs_grad(a), [a, id](Tape& t, const Matrix& g) {
    const auto& y = t.value(Var{&t, id}).array();
    t.accumulate(a, (g.array() * (1.0 - y * y)).matrix());
  });
}

Var sigmoid(Var a) {
  Tape& t = tape_of(a);
  Matrix out = (1.0 / (1.0 + (-a.value().array()).exp())).matrix();
  const int id = static_cast<int>(t.size());
  return t.push(std::move(out), t.needs_grad(a), [a, id](Tape& t, const Matrix& g) {
    const auto& y = t.value(Var{&t, id}).array();
    t.accumulate(a, (g.array() * y * (1.0 - y)).matrix());
  });
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out = logits;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double m = out.row(i).maxCoeff();
    out.row(i) = (out.row(i).array() - m).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Var softmax_rows(Var a) {
  Tape& t = tape_of(a);
  const int id = static_cast<int>(t.size());
  return t.push(softmax_rows(a.value()), t.needs_grad(a), [a, id](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(Var{&t, id});
    const Vector dot = g.cwiseProduct(y).rowwise().sum();
    t.accumulate(a, (y.array() * (g.colwise() - dot).array()).matrix());
  });
}

Var layer_norm_rows(Var a, double eps) {
  Tape& t = tape_of(a);
  const Matrix& x = a.value();
  const Eigen::Index n = x.cols();
  const Vector mu = x.rowwise().mean();
  Matrix centred = x.colwise() - mu;
  const Vector inv_std = ((centred.array().square().rowwise().sum() / static_cast<double>(n)) + eps).rsqrt();
  Matrix y = centred.array().colwise() * inv_std.array();
  const int id = static_cast<int>(t.size());
  return t.push(std::move(y), t.needs_grad(a), [a, id, inv_std, n](Tape& t, const Matrix& g) {
    const Matrix& y = t.value(Var{&t, id});
    const Vector g_mean = g.rowwise().mean();
    const Vector gy_mean = g.cwiseProduct(y).rowwise().sum() / static_cast<double>(n);
    Matrix dx = (g.colwise() - g_mean) - (y.array().colwise() * gy_mean.array()).matrix();
    t.accumulate(a, (dx.array().colwise() * inv_std.array()).matrix());
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  require(!parts.empty(), ErrorCode::InvalidArgument, "concat_cols: no inputs");
  Tape& t = tape_of(parts[0]);
  const Eigen::Index rows = parts[0].rows();
  Eigen::Index cols = 0;
  bool needs = false;
  for (Var p : parts) {
    same_tape(parts[0], p);
    require(p.rows() == rows, ErrorCode::DimensionMismatch, "concat_cols: row count differs");
    cols += p.cols();
    needs = needs || t.needs_grad(p);
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (Var p : parts) {
    out.middleCols(at, p.cols()) = p.value();
    at += p.cols();
  }
  return t.push(std::move(out), needs, [parts](Tape& t, const Matrix& g) {
    Eigen::Index at = 0;
    for (Var p : parts) {
      const Eigen::Index c = t.value(p).cols();
      if (t.needs_grad(p)) t.accumulate(p, g.middleCols(at, c));
      at += c;
    }
  });
}

Var concat_rows(const std::vector<Var>& parts) {
  require(!parts.empty(), ErrorCode::InvalidArgument, "concat_rows: no inputs");
  Tape& t = tape_of(parts[0]);
  const Eigen::Index cols = parts[0].cols();
  Eigen::Index rows = 0;
  bool needs = false;
  for (Var p : parts) {
    same_tape(parts[0], p);
    require(p.cols() == cols, ErrorCode::DimensionMismatch, "concat_rows: column count differs");
    rows += p.rows();
    needs = needs || t.needs_grad(p);
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (Var p : parts) {
    out.middleRows(at, p.rows()) = p.value();
    at += p.rows();
  }
  return t.push(std::move(out), needs, [parts](Tape& t, const Matrix& g) {
    Eigen::Index at = 0;
    for (Var p : parts) {
      const Eigen::Index r = t.value(p).rows();
      if (t.needs_grad(p)) t.accumulate(p, g.middleRows(at, r));
      at += r;
    }
  });
}

Var slice_rows(Var a, Eigen::Index start, Eigen::Index count) {
  Tape& t = tape_of(a);
  require(start >= 0 && count >= 0 && start + count <= a.rows(), ErrorCode::IndexOutOfRange, "slice_rows out of range");
  return t.push(a.value().middleRows(start, count), t.needs_grad(a), [a, start, count](Tape& t, const Matrix& g) {
    Matrix full = Matrix::Zero(t.value(a).rows(), t.value(a).cols());
    full.middleRows(start, count) = g;
    t.accumulate(a, full);
  });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  Tape& t = tape_of(a);
  require(start >= 0 && count >= 0 && start + count <= a.cols(), ErrorCode::IndexOutOfRange, "slice_cols out of range");
  return t.push(a.value().middleCols(start, count), t.needs_grad(a), [a, start, count](Tape& t, const Matrix& g) {
    Matrix full = Matrix::Zero(t.value(a).rows(), t.value(a).cols());
    full.middleCols(start, count) = g;
    t.accumulate(a, full);
  });
}

Var gather_rows(Var a, const std::vector<int>& index) {
  Tape& t = tape_of(a);
  const Matrix& x = a.value();
  Matrix out(static_cast<Eigen::Index>(index.size()), x.cols());
  for (std::size_t i = 0; i < index.size(); ++i) {
    require(index[i] >= 0 && index[i] < x.rows(), ErrorCode::IndexOutOfRange, "gather_rows index out of range");
    out.row(static_cast<Eigen::Index>(i)) = x.row(index[i]);
  }
  return t.push(std::move(out), t.needs_grad(a), [a, index](Tape& t, const Matrix& g) {
    Matrix full = Matrix::Zero(t.value(a).rows(), t.value(a).cols());
    for (std::size_t i = 0; i < index.size(); ++i) full.row(index[i]) += g.row(static_cast<Eigen::Index>(i));
    t.accumulate(a, full);
  });
}

Var im2col(Var a, int kernel, int stride, int pad) {
  Tape& t = tape_of(a);
  require(kernel >= 1 && stride >= 1 && pad >= 0, ErrorCode::InvalidArgument, "im2col: bad geometry");
  const Matrix& x = a.value();
  const Eigen::Index T = x.rows(), C = x.cols();
  const Eigen::Index padded = T + 2 * pad;
  require(padded >= kernel, ErrorCode::DimensionMismatch, "im2col: sequence shorter than kernel");
  const Eigen::Index T_out = (padded - kernel) / stride + 1;
  Matrix out = Matrix::Zero(T_out, kernel * C);
  for (Eigen::Index o = 0; o < T_out; ++o)
    for (int k = 0; k < kernel; ++k) {
      const Eigen::Index src = o * stride + k - pad;
      if (src >= 0 && src < T) out.block(o, k * C, 1, C) = x.row(src);
    }
  return t.push(std::move(out), t.needs_grad(a), [a, kernel, stride, pad](Tape& t, const Matrix& g) {
    const Eigen::Index T = t.value(a).rows(), C = t.value(a).cols();
    Matrix dx = Matrix::Zero(T, C);
    for (Eigen::Index o = 0; o < g.rows(); ++o)
      for (int k = 0; k < kernel; ++k) {
        const Eigen::Index src = o * stride + k - pad;
        if (src >= 0 && src < T) dx.row(src) += g.block(o, k * C, 1, C);
      }
    t.accumulate(a, dx);
  });
}

Var sum(Var a) {
  Tape& t = tape_of(a);
  return t.push(Matrix::Constant(1, 1, a.value().sum()), t.needs_grad(a), [a](Tape& t, const Matrix& g) {
    t.accumulate(a, Matrix::Constant(t.value(a).rows(), t.value(a).cols(), g(0, 0)));
  });
}

Var mean(Var a) {
  require(a.value().size() > 0, ErrorCode::EmptyInput, "mean of an empty matrix");
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var mean_rows(Var a) {
  Tape& t = tape_of(a);
  require(a.rows() > 0, ErrorCode::EmptyInput, "mean_rows of an empty matrix");
  return t.push(a.value().colwise().mean(), t.needs_grad(a), [a](Tape& t, const Matrix& g) {
    const Eigen::Index n = t.value(a).rows();
    t.accumulate(a, g.replicate(n, 1) / static_cast<double>(n));
  });
}

Var mse(Var prediction, Var target) {
  Var diff = sub(prediction, target);
  return mean(mul(diff, diff));
}

Var cross_entropy(Var logits, const std::vector<int>& labels, const std::vector<double>& weights) {
  Tape& t = tape_of(logits);
  const Matrix& z = logits.value();
  const auto n = static_cast<std::size_t>(z.rows());
  require(labels.size() == n, ErrorCode::DimensionMismatch, "cross_entropy: label count differs from rows");
  require(weights.empty() || weights.size() == n, ErrorCode::DimensionMismatch,
          "cross_entropy: weight count differs from rows");
  const Matrix p = softmax_rows(z);
  double total_w = 0.0, loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    require(labels[i] >= 0 && labels[i] < z.cols(), ErrorCode::IndexOutOfRange, "cross_entropy: bad label");
    const double w = weights.empty() ? 1.0 : weights[i];
    total_w += w;
    loss -= w * std::log(std::max(p(static_cast<Eigen::Index>(i), labels[i]), 1e-300));
  }
  require(total_w > 0.0, ErrorCode::InvalidArgument, "cross_entropy: weights sum to zero");
  return t.push(Matrix::Constant(1, 1, loss / total_w), t.needs_grad(logits),
                [logits, labels, weights, p, total_w](Tape& t, const Matrix& g) {
                  Matrix d = p;
                  for (std::size_t i = 0; i < labels.size(); ++i) {
                    const auto r = static_cast<Eigen::Index>(i);
                    d(r, labels[i]) -= 1.0;
                    d.row(r) *= (weights.empty() ? 1.0 : weights[i]) / total_w;
                  }
                  t.accumulate(logits, d * g(0, 0));
                });
}

Var grl(Var a, double s) {
  Tape& t = tape_of(a);
  return t.push(a.value(), t.needs_grad(a), [a, s](Tape& t, const Matrix& g) { t.accumulate(a, -s * g); });
}

Var detach(Var a) { return tape_of(a).constant(a.value()); }

}  // namespace hedtts::nn
