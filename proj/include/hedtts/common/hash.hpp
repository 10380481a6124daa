// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "hedtts/common/types.hpp"

namespace hedtts {

/// 64-bit FNV-1a. Used for config fingerprints and reproducibility checks,
/// never for anything security related.
class Fnv1a {
 public:
  void update(const void* data, std::size_t size);
  void update(std::string_view text) { update(text.data(), text.size()); }
  void update(const Matrix& m);
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a(std::string_view text);
std::string to_hex(std::uint64_t value);
std::string hash_matrix(const Matrix& m);

}  // namespace hedtts
