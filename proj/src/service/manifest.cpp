// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/service/manifest.hpp"

#include "hedtts/common/hash.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/hed/hed.hpp"
#include "hedtts/service/config.hpp"

namespace hedtts::service {
namespace fs = std::filesystem;

std::string file_hash(const fs::path& file) { return to_hex(fnv1a(read_file(file))); }

nlohmann::json manifest_to_json(const RunManifest& manifest, const fs::path& manifest_dir) {
  nlohmann::json artifacts = nlohmann::json::array();
  for (const auto& a : manifest.artifacts)
    artifacts.push_back({{"path", fs::relative(a, manifest_dir).generic_string()}, {"hash", file_hash(a)}});
  return {{"command", manifest.command},
          {"config_hash", manifest.config_hash},
          {"seed", manifest.seed},
          {"arguments", manifest.arguments},
          {"versions", {{"hedtts", kVersion}, {"hed_schema", hed::kHedVersion}}},
          {"artifacts", artifacts}};
}

void write_manifest(const fs::path& file, const RunManifest& manifest) {
  const fs::path dir = fs::absolute(file).parent_path();
  write_file(file, manifest_to_json(manifest, dir).dump(2) + "\n");
}

}  // namespace hedtts::service
