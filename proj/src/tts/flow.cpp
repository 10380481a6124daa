// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/tts/flow.hpp"

#include "hedtts/common/error.hpp"

namespace hedtts::tts {

Matrix ot_path(const Matrix& x0, const Matrix& x1, double t, double sigma_min) {
  require(x0.rows() == x1.rows() && x0.cols() == x1.cols(), ErrorCode::DimensionMismatch, "x0 and x1 shapes differ");
  return (1.0 - (1.0 - sigma_min) * t) * x0 + t * x1;
}

Matrix ot_target(const Matrix& x0, const Matrix& x1, double sigma_min) {
  require(x0.rows() == x1.rows() && x0.cols() == x1.cols(), ErrorCode::DimensionMismatch, "x0 and x1 shapes differ");
  return x1 - (1.0 - sigma_min) * x0;
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

nn::Var cfm_loss(const FlowDecoder& decoder, const Matrix& x1, nn::Var mu, double t, const Matrix& x0,
                 double sigma_min) {
  require(x1.allFinite(), ErrorCode::NonFinite, "target mel contains non-finite values");
  nn::Tape& tape = *mu.tape;
  const nn::Var xt = tape.constant(ot_path(x0, x1, t, sigma_min));
  return nn::mse(decoder(xt, mu, t), tape.constant(ot_target(x0, x1, sigma_min)));
}

nn::Var cfm_loss(const FlowDecoder& decoder, const Matrix& x1, nn::Var mu, Rng& rng, double sigma_min) {
  const double t = rng.uniform();
  const Matrix x0 = gaussian_matrix(x1.rows(), x1.cols(), rng);
  return cfm_loss(decoder, x1, mu, t, x0, sigma_min);
}

Matrix integrate_flow(const FlowDecoder& decoder, const Matrix& mu, Matrix x, int steps) {
  require(steps >= 1, ErrorCode::InvalidValue, "need at least one ODE step");
  const double dt = 1.0 / steps;
  for (int i = 0; i < steps; ++i) {
    nn::Tape tape;
    const Matrix v = decoder(tape.constant(x), tape.constant(mu), i * dt).value();
    x += dt * v;
  }
  return x;
}

Matrix sample_flow(const FlowDecoder& decoder, const Matrix& mu, int steps, Rng& rng, double temperature) {
  return integrate_flow(decoder, mu, temperature * gaussian_matrix(mu.rows(), mu.cols(), rng), steps);
}

}  // namespace hedtts::tts
