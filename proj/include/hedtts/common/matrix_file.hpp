// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "hedtts/common/types.hpp"

namespace hedtts {

/// A frames x dim matrix tagged with its utterance and frame rate. Used for
/// ingested external embeddings, feature caches and mel caches.
struct FrameMatrix {
  std::string utterance_id;
  double frame_rate = 0.0;
  Matrix matrix;  // frames x dim

  Eigen::Index frames() const { return matrix.rows(); }
  Eigen::Index dim() const { return matrix.cols(); }
};

// Layout (little endian):
//   "HEDMAT01" | u32 version | u32 id_len | id bytes | f64 frame_rate |
//   u32 dim | u64 frames | frames*dim float32, row-major
inline constexpr std::uint32_t kMatrixFileVersion = 1;

std::string encode_frame_matrix(const FrameMatrix& m);
FrameMatrix decode_frame_matrix(const std::string& bytes);
void write_frame_matrix(const std::filesystem::path& path, const FrameMatrix& m);
FrameMatrix read_frame_matrix(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace hedtts
