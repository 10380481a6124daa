// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hedtts::service {

/// Provenance record written next to every run's outputs.
struct RunManifest {
  std::string command;
  std::string config_hash;  // empty when the command ran without a config
  std::uint64_t seed = 0;
  nlohmann::json arguments = nlohmann::json::object();
  std::vector<std::filesystem::path> artifacts;
};

/// Content hash (FNV-1a, hex) of a file.
std::string file_hash(const std::filesystem::path& file);

/// {command, config_hash, seed, arguments, versions, artifacts: [{path, hash}]}
/// Artifact paths are stored relative to the manifest's directory.
nlohmann::json manifest_to_json(const RunManifest& manifest, const std::filesystem::path& manifest_dir);
void write_manifest(const std::filesystem::path& file, const RunManifest& manifest);

}  // namespace hedtts::service
