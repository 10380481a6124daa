// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/nn/layers.hpp"

#include <cmath>

#include "hedtts/common/error.hpp"

namespace hedtts::nn {

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  return m;
}

Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, double stddev, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, stddev);
  return m;
}

Linear::Linear(const std::string& name, int in, int out, Rng& rng, bool bias_enabled) : has_bias(bias_enabled) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  weight = Parameter(name + ".weight", uniform_matrix(in, out, bound, rng));
  if (has_bias) bias = Parameter(name + ".bias", uniform_matrix(1, out, bound, rng));
}

Var Linear::operator()(Var x) const {
  Var y = matmul(x, x.tape->param(weight));
  return has_bias ? add_row(y, x.tape->param(bias)) : y;
}

void Linear::collect(ParameterList& out) const {
  out.push_back(&weight);
  if (has_bias) out.push_back(&bias);
}

Conv1d::Conv1d(const std::string& name, int in, int out, int k, Rng& rng, int s, int p)
    : kernel(k), stride(s), pad(p < 0 ? k / 2 : p) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in * k));
  weight = Parameter(name + ".weight", uniform_matrix(in * k, out, bound, rng));
  bias = Parameter(name + ".bias", uniform_matrix(1, out, bound, rng));
}

Var Conv1d::operator()(Var x) const {
  require(x.cols() * kernel == weight.value.rows(), ErrorCode::DimensionMismatch,
          "conv1d " + weight.name + ": expected " + std::to_string(weight.value.rows() / kernel) +
              " input channels, got " + std::to_string(x.cols()));
  Tape& t = *x.tape;
  return add_row(matmul(im2col(x, kernel, stride, pad), t.param(weight)), t.param(bias));
}

void Conv1d::collect(ParameterList& out) const {
  out.push_back(&weight);
  out.push_back(&bias);
}

LayerNorm::LayerNorm(const std::string& name, int dim)
    : gain(name + ".gain", Matrix::Ones(1, dim)), bias(name + ".bias", Matrix::Zero(1, dim)) {}

Var LayerNorm::operator()(Var x) const {
  Tape& t = *x.tape;
  return add_row(mul_row(layer_norm_rows(x), t.param(gain)), t.param(bias));
}

void LayerNorm::collect(ParameterList& out) const {
  out.push_back(&gain);
  out.push_back(&bias);
}

Embedding::Embedding(const std::string& name, int count, int dim, Rng& rng)
    : table(name + ".table", normal_matrix(count, dim, 1.0 / std::sqrt(static_cast<double>(dim)), rng)) {}

Var Embedding::operator()(Tape& tape, const std::vector<int>& ids) const {
  return gather_rows(tape.param(table), ids);
}

void Embedding::collect(ParameterList& out) const { out.push_back(&table); }

std::size_t parameter_count(const ParameterList& params) {
  std::size_t n = 0;
  for (const Parameter* p : params) n += static_cast<std::size_t>(p->size());
  return n;
}

void zero_grad(const ParameterList& params) {
  for (Parameter* p : params) p->zero_grad();
}

double clip_grad_norm(const ParameterList& params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params) sq += p->grad.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0)
    for (Parameter* p : params) p->grad *= max_norm / norm;
  return norm;
}

void store_parameters(TensorArchive& archive, const ParameterList& params) {
  for (const Parameter* p : params) {
    require(!archive.tensors.count(p->name), ErrorCode::DuplicateId, "duplicate parameter name " + p->name);
    archive.tensors[p->name] = p->value;
  }
}

void restore_parameters(const TensorArchive& archive, const ParameterList& params) {
  for (Parameter* p : params) {
    const Matrix& m = archive.tensor(p->name);
    require(m.rows() == p->value.rows() && m.cols() == p->value.cols(), ErrorCode::CorruptPayload,
            "parameter " + p->name + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                ", expected " + std::to_string(p->value.rows()) + "x" + std::to_string(p->value.cols()));
    p->value = m;
    p->zero_grad();
  }
}

}  // namespace hedtts::nn
