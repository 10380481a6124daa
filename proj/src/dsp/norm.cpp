// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/dsp/norm.hpp"

#include "hedtts/common/error.hpp"

namespace hedtts::dsp {

NormStats fit_norm_stats(const Matrix& rows) {
  if (rows.rows() < 2) fail(ErrorCode::InsufficientData, "normalisation needs at least two vectors");
  require(rows.allFinite(), ErrorCode::NonFinite, "normalisation input contains non-finite values");
  NormStats s;
  s.count = static_cast<long>(rows.rows());
  s.mean = rows.colwise().mean().transpose();
  const Matrix centred = rows.rowwise() - s.mean.transpose();
  s.std = (centred.array().square().colwise().sum() / static_cast<double>(rows.rows()))
              .sqrt()
              .max(kStdFloor)
              .transpose();
  return s;
}

Vector NormStats::apply(const Vector& v) const {
  require(v.size() == mean.size(), ErrorCode::DimensionMismatch, "normalisation dimension mismatch");
  return (v - mean).cwiseQuotient(std);
}

Matrix NormStats::apply_rows(const Matrix& rows) const {
  require(rows.cols() == mean.size(), ErrorCode::DimensionMismatch, "normalisation dimension mismatch");
  return (rows.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
}

Vector NormStats::invert(const Vector& v) const {
  require(v.size() == mean.size(), ErrorCode::DimensionMismatch, "normalisation dimension mismatch");
  return v.cwiseProduct(std) + mean;
}

NormStats NormStats::identity(Eigen::Index dim) {
  return {Vector::Zero(dim), Vector::Ones(dim), 0};
}

nlohmann::json norm_to_json(const NormStats& stats) {
  return {{"mean", std::vector<double>(stats.mean.data(), stats.mean.data() + stats.mean.size())},
          {"std", std::vector<double>(stats.std.data(), stats.std.data() + stats.std.size())},
          {"count", stats.count}};
}

NormStats norm_from_json(const nlohmann::json& doc) {
  const auto mean = doc.at("mean").get<std::vector<double>>();
  const auto std = doc.at("std").get<std::vector<double>>();
  require(mean.size() == std.size(), ErrorCode::CorruptPayload, "norm stats length mismatch");
  NormStats s;
  s.mean = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  s.std = Eigen::Map<const Vector>(std.data(), static_cast<Eigen::Index>(std.size()));
  s.count = doc.value("count", 0L);
  return s;
}

}  // namespace hedtts::dsp
