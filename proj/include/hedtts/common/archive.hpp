// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "hedtts/common/types.hpp"

namespace hedtts {

/// Versioned checkpoint container: a JSON metadata block followed by named
/// float64 tensors. Doubles keep reloaded models bit-identical to the ones
/// that were saved.
struct TensorArchive {
  std::string kind;  // e.g. "intensity-model", "acoustic-model"
  nlohmann::json meta = nlohmann::json::object();
  std::map<std::string, Matrix> tensors;

  const Matrix& tensor(const std::string& name) const;
};

inline constexpr std::uint32_t kArchiveVersion = 1;

std::string encode_archive(const TensorArchive& archive);
TensorArchive decode_archive(const std::string& bytes, const std::string& expected_kind);
void save_archive(const std::filesystem::path& path, const TensorArchive& archive);
TensorArchive load_archive(const std::filesystem::path& path, const std::string& expected_kind);

}  // namespace hedtts
