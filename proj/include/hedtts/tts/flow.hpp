// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hedtts/common/rng.hpp"
#include "hedtts/tts/model.hpp"

namespace hedtts::tts {

/// Point on the straight path from noise x0 to data x1:
/// (1 - (1 - sigma_min) t) x0 + t x1.
Matrix ot_path(const Matrix& x0, const Matrix& x1, double t, double sigma_min);
/// Constant velocity of that path: x1 - (1 - sigma_min) x0.
Matrix ot_target(const Matrix& x0, const Matrix& x1, double sigma_min);

/// Standard-normal matrix from the generator, row-major draw order.
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Mean squared error between decoder(x_t, t, mu) and the path velocity.
nn::Var cfm_loss(const FlowDecoder& decoder, const Matrix& x1, nn::Var mu, double t, const Matrix& x0,
                 double sigma_min);
/// Draws t ~ U[0, 1) and x0 ~ N(0, I) from `rng`, then evaluates cfm_loss.
nn::Var cfm_loss(const FlowDecoder& decoder, const Matrix& x1, nn::Var mu, Rng& rng, double sigma_min);

/// Euler integration of the learned field from t = 0 to 1 starting at x0.
Matrix integrate_flow(const FlowDecoder& decoder, const Matrix& mu, Matrix x0, int steps);
/// Same, with x0 = temperature * N(0, I) drawn from `rng`.
Matrix sample_flow(const FlowDecoder& decoder, const Matrix& mu, int steps, Rng& rng, double temperature = 1.0);

}  // namespace hedtts::tts
