// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/common/archive.hpp"

#include <cstring>

#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"

namespace hedtts {
namespace {

constexpr char kMagic[8] = {'H', 'E', 'D', 'A', 'R', 'C', 'H', '1'};

}  // namespace

const Matrix& TensorArchive::tensor(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) fail(ErrorCode::CorruptPayload, "archive lacks tensor " + name);
  return it->second;
}

std::string encode_archive(const TensorArchive& archive) {
  nlohmann::json header;
  header["kind"] = archive.kind;
  header["meta"] = archive.meta;
  header["tensors"] = nlohmann::json::array();
  for (const auto& [name, m] : archive.tensors)
    header["tensors"].push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}});
  const std::string text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  auto put = [&out](const void* p, std::size_t n) { out.append(static_cast<const char*>(p), n); };
  const std::uint32_t version = kArchiveVersion;
  const std::uint64_t len = text.size();
  put(&version, sizeof(version));
  put(&len, sizeof(len));
  out += text;
  for (const auto& [name, m] : archive.tensors)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        const double v = m(r, c);
        put(&v, sizeof(v));
      }
  return out;
}

TensorArchive decode_archive(const std::string& bytes, const std::string& expected_kind) {
  std::size_t pos = 0;
  auto take = [&](void* dst, std::size_t n) {
    if (pos + n > bytes.size()) fail(ErrorCode::CorruptPayload, "archive truncated");
    std::memcpy(dst, bytes.data() + pos, n);
    pos += n;
  };
  char magic[8];
  take(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    fail(ErrorCode::CorruptPayload, "bad archive magic");
  std::uint32_t version = 0;
  take(&version, sizeof(version));
  if (version != kArchiveVersion)
    fail(ErrorCode::SchemaVersionMismatch, "archive version " + std::to_string(version));
  std::uint64_t len = 0;
  take(&len, sizeof(len));
  if (pos + len > bytes.size()) fail(ErrorCode::CorruptPayload, "archive truncated");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(pos, len));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptPayload, std::string("archive header: ") + e.what());
  }
  pos += len;

  TensorArchive archive;
  archive.kind = header.value("kind", "");
  if (!expected_kind.empty() && archive.kind != expected_kind)
    fail(ErrorCode::CorruptPayload,
         "archive holds '" + archive.kind + "', expected '" + expected_kind + "'");
  archive.meta = header.value("meta", nlohmann::json::object());
  for (const auto& entry : header.at("tensors")) {
    const auto rows = entry.at("rows").get<Eigen::Index>();
    const auto cols = entry.at("cols").get<Eigen::Index>();
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) take(&m(r, c), sizeof(double));
    archive.tensors.emplace(entry.at("name").get<std::string>(), std::move(m));
  }
  if (pos != bytes.size()) fail(ErrorCode::CorruptPayload, "trailing bytes in archive");
  return archive;
}

void save_archive(const std::filesystem::path& path, const TensorArchive& archive) {
  write_file(path, encode_archive(archive));
}

TensorArchive load_archive(const std::filesystem::path& path, const std::string& expected_kind) {
  return decode_archive(read_file(path), expected_kind);
}

}  // namespace hedtts
