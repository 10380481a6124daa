// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/common/matrix_file.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "hedtts/common/error.hpp"

namespace hedtts {
namespace {

constexpr char kMagic[8] = {'H', 'E', 'D', 'M', 'A', 'T', '0', '1'};

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) fail(ErrorCode::CorruptPayload, "matrix file truncated");
  }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_frame_matrix(const FrameMatrix& m) {
  std::string out(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kMatrixFileVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.utterance_id.size()));
  out += m.utterance_id;
  put<double>(out, m.frame_rate);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(m.dim()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.frames()));
  for (Eigen::Index r = 0; r < m.frames(); ++r)
    for (Eigen::Index c = 0; c < m.dim(); ++c) put<float>(out, static_cast<float>(m.matrix(r, c)));
  return out;
}

FrameMatrix decode_frame_matrix(const std::string& bytes) {
  Reader in(bytes);
  if (in.get_string(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic)))
    fail(ErrorCode::CorruptPayload, "bad matrix file magic");
  const auto version = in.get<std::uint32_t>();
  if (version != kMatrixFileVersion)
    fail(ErrorCode::SchemaVersionMismatch,
         "matrix file version " + std::to_string(version) + " unsupported");
  FrameMatrix m;
  m.utterance_id = in.get_string(in.get<std::uint32_t>());
  m.frame_rate = in.get<double>();
  const auto dim = in.get<std::uint32_t>();
  const auto frames = in.get<std::uint64_t>();
  in.need(frames * dim * sizeof(float));
  m.matrix.resize(static_cast<Eigen::Index>(frames), dim);
  for (std::uint64_t r = 0; r < frames; ++r)
    for (std::uint32_t c = 0; c < dim; ++c)
      m.matrix(static_cast<Eigen::Index>(r), c) = in.get<float>();
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_frame_matrix(const std::filesystem::path& path, const FrameMatrix& m) {
  write_file(path, encode_frame_matrix(m));
}

FrameMatrix read_frame_matrix(const std::filesystem::path& path) {
  return decode_frame_matrix(read_file(path));
}

}  // namespace hedtts
