// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/intensity/svm.hpp"

#include <cmath>
#include <numeric>

#include "hedtts/common/error.hpp"

namespace hedtts::intensity {

LinearSvm train_linear_svm(const Matrix& x, const std::vector<int>& positive, double lambda, int epochs,
                           std::uint64_t seed) {
  require(x.rows() == static_cast<Eigen::Index>(positive.size()) && x.rows() > 0, ErrorCode::DimensionMismatch,
          "svm: labels do not match rows");
  require(lambda > 0.0, ErrorCode::InvalidValue, "svm: lambda must be positive");
  LinearSvm svm;
  svm.weight = Vector::Zero(x.cols());
  Rng rng(seed);
  std::vector<std::size_t> order(positive.size());
  std::iota(order.begin(), order.end(), 0);
  long t = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double y = positive[i] ? 1.0 : -1.0;
      const auto row = static_cast<Eigen::Index>(i);
      const double margin = y * (svm.weight.dot(x.row(row).transpose()) + svm.bias);
      svm.weight *= 1.0 - eta * lambda;
      if (margin < 1.0) {
        svm.weight += eta * y * x.row(row).transpose();
        svm.bias += eta * y * 0.01;  // unregularised, damped bias step
      }
    }
  }
  return svm;
}

void SvmPresenceBaseline::fit(const std::vector<SegmentSample>& train, double lambda, int epochs, std::uint64_t seed) {
  require(!train.empty(), ErrorCode::InsufficientData, "svm baseline needs training data");
  Matrix x(static_cast<Eigen::Index>(train.size()), train[0].frames.cols());
  for (std::size_t i = 0; i < train.size(); ++i) {
    require(train[i].frames.rows() == 1, ErrorCode::DimensionMismatch, "svm baseline expects one row per segment");
    x.row(static_cast<Eigen::Index>(i)) = train[i].frames.row(0);
  }
  norm_ = dsp::fit_norm_stats(x);
  x = norm_.apply_rows(x);
  for (int e = 0; e < kNumIntensityEmotions; ++e) {
    std::vector<int> positive;
    for (const auto& s : train) positive.push_back(intensity_index(s.emotion) == e ? 1 : 0);
    svms_[static_cast<std::size_t>(e)] = train_linear_svm(x, positive, lambda, epochs, seed + static_cast<std::uint64_t>(e));
  }
}

EmotionIntensity SvmPresenceBaseline::predict(const Matrix& raw_frames) const {
  require(raw_frames.rows() == 1, ErrorCode::DimensionMismatch, "svm baseline expects one row per segment");
  const Vector x = norm_.apply(raw_frames.row(0).transpose());
  EmotionIntensity out;
  for (int e = 0; e < kNumIntensityEmotions; ++e)
    out.values[static_cast<std::size_t>(e)] = 1.0 / (1.0 + std::exp(-svms_[static_cast<std::size_t>(e)].decision(x)));
  return out;
}

}  // namespace hedtts::intensity
