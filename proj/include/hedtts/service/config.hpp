// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hedtts/common/emotion.hpp"
#include "hedtts/intensity/train.hpp"
#include "hedtts/tts/train.hpp"

namespace hedtts::service {

inline constexpr std::string_view kVersion = "0.1.0";

/// Where a level's features come from: computed from audio ("builtin") or
/// read from `<dir>/<utterance id>.fmat` frame matrices ("external").
struct FeatureSource {
  std::string kind = "builtin";
  std::filesystem::path dir;
  intensity::SampleMode mode = intensity::SampleMode::Functionals;
};

/// Job configuration. Relative paths in the file resolve against the file's
/// directory. Keys (all optional unless stated):
///   corpus.root (required), corpus.manifest, corpus.alignment_dir,
///   corpus.allow_resample,
///   features.{phoneme,word,utterance}.{provider,dir,mode},
///   extractor.{head,hidden_dim,grl,grl_scale,adversary,epochs,batch_size,
///              learning_rate,patience,stabilization_epochs},
///   tts.{preset,steps,batch_size,learning_rate},
///   synthesis.{n_ode_steps,temperature},
///   checkpoints.{extractor,acoustic}, cache_dir, output_dir, seed, device.
struct JobConfig {
  std::filesystem::path corpus_root;
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> alignment_dir;
  bool allow_resample = false;
  std::map<Level, FeatureSource> features;

  intensity::IntensityModelConfig extractor;
  intensity::TrainConfig extractor_training;

  std::string tts_preset = "toy";
  tts::TtsTrainConfig tts_training;

  int n_ode_steps = 10;
  double temperature = 0.667;

  std::optional<std::filesystem::path> extractor_checkpoint;
  std::optional<std::filesystem::path> acoustic_checkpoint;
  std::filesystem::path cache_dir;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  std::string device = "cpu";

  nlohmann::json source;  // the parsed document, for hashing
};

/// Parses and validates: the corpus root and every external feature
/// directory must exist (NotFound); unknown enum values are InvalidValue.
JobConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
JobConfig load_config(const std::filesystem::path& file);

/// Stable hash of the canonical JSON of the configuration.
std::string config_hash(const JobConfig& config);

}  // namespace hedtts::service
