// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <nlohmann/json.hpp>

#include "hedtts/common/types.hpp"

namespace hedtts::dsp {

inline constexpr double kStdFloor = 1e-8;

/// Per-dimension standardisation statistics, fitted on training data only.
struct NormStats {
  Vector mean;
  Vector std;  // population std, floored at kStdFloor
  long count = 0;

  Eigen::Index dim() const { return mean.size(); }

  Vector apply(const Vector& v) const;
  Matrix apply_rows(const Matrix& rows) const;
  Vector invert(const Vector& v) const;

  /// Identity statistics (mean 0, std 1).
  static NormStats identity(Eigen::Index dim);
};

/// Rows are samples. Requires at least two rows.
NormStats fit_norm_stats(const Matrix& rows);

nlohmann::json norm_to_json(const NormStats& stats);
NormStats norm_from_json(const nlohmann::json& doc);

}  // namespace hedtts::dsp
