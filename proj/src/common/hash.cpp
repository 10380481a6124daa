// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/common/hash.hpp"

#include <cstdio>

namespace hedtts {

void Fnv1a::update(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    state_ ^= bytes[i];
    state_ *= 0x100000001b3ULL;
  }
}

void Fnv1a::update(const Matrix& m) {
  const std::int64_t shape[2] = {m.rows(), m.cols()};
  update(shape, sizeof(shape));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      update(&v, sizeof(v));
    }
  }
}

std::string Fnv1a::hex() const { return to_hex(state_); }

std::uint64_t fnv1a(std::string_view text) {
  Fnv1a h;
  h.update(text);
  return h.digest();
}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string hash_matrix(const Matrix& m) {
  Fnv1a h;
  h.update(m);
  return h.hex();
}

}  // namespace hedtts
