// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/intensity/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hedtts/common/emotion.hpp"
#include "hedtts/common/error.hpp"

namespace hedtts::intensity {

namespace {

constexpr double kHistogramSmoothing = 1e-6;
constexpr double kTieTolerance = 1e-12;

}  // namespace

Vector tempered_softmax(const Vector& logits, double alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), ErrorCode::NonFinite, "alpha must be positive and finite");
  require(logits.size() > 0, ErrorCode::EmptyInput, "tempered_softmax of an empty vector");
  if (!logits.allFinite()) fail(ErrorCode::NonFinite, "logits contain non-finite values");
  const Vector scaled = logits * std::log(alpha);
  const double m = scaled.maxCoeff();
  const double lse = m + std::log((scaled.array() - m).exp().sum());
  return (scaled.array() - lse).exp().matrix();
}

std::vector<double> alpha_grid() {
  std::vector<double> grid;
  for (int k = 0; k < 20; ++k) grid.push_back((11 + k) / 10.0);
  return grid;
}

Matrix intensities_from_logits(const Matrix& logits, HeadType head, double alpha) {
  require(logits.cols() == (head == HeadType::SER ? 4 : 8), ErrorCode::DimensionMismatch,
          "calibration logits have " + std::to_string(logits.cols()) + " columns");
  Matrix out(logits.rows(), kNumIntensityEmotions);
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    if (head == HeadType::SER) {
      out.row(i) = tempered_softmax(logits.row(i).transpose(), alpha).transpose();
    } else {
      for (int e = 0; e < kNumIntensityEmotions; ++e)
        out(i, e) = tempered_softmax(logits.block(i, 2 * e, 1, 2).transpose(), alpha)(1);
    }
  }
  return out;
}

double kl_from_uniform(const Matrix& intensities) {
  require(intensities.size() > 0, ErrorCode::EmptyCalibrationSet, "no intensities to histogram");
  std::vector<double> counts(kCalibrationBins, 0.0);
  for (Eigen::Index i = 0; i < intensities.size(); ++i) {
    const double v = std::clamp(intensities(i), 0.0, 1.0);
    const int bin = std::min(kCalibrationBins - 1, static_cast<int>(v * kCalibrationBins));
    counts[static_cast<std::size_t>(bin)] += 1.0;
  }
  const double total = static_cast<double>(intensities.size()) + kCalibrationBins * kHistogramSmoothing;
  const double u = 1.0 / kCalibrationBins;
  double kl = 0.0;
  for (double c : counts) kl += u * std::log(u / ((c + kHistogramSmoothing) / total));
  return kl;
}

AlphaSelection select_alpha(const Matrix& calibration_logits, HeadType head) {
  if (calibration_logits.rows() == 0) fail(ErrorCode::EmptyCalibrationSet, "calibration set is empty");
  AlphaSelection sel;
  sel.grid = alpha_grid();
  double best = std::numeric_limits<double>::infinity();
  for (double alpha : sel.grid) {
    const double kl = kl_from_uniform(intensities_from_logits(calibration_logits, head, alpha));
    sel.kl.push_back(kl);
    if (kl < best - kTieTolerance) {
      best = kl;
      sel.alpha = alpha;
    }
  }
  return sel;
}

}  // namespace hedtts::intensity
