// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "hedtts/common/archive.hpp"
#include "hedtts/common/rng.hpp"
#include "hedtts/dsp/features.hpp"
#include "hedtts/dsp/norm.hpp"
#include "hedtts/intensity/calibration.hpp"
#include "hedtts/nn/layers.hpp"

namespace hedtts::intensity {

enum class AdversaryTarget { Speaker, Gender };

std::string_view head_name(HeadType h);
HeadType parse_head(std::string_view s);
std::string_view adversary_name(AdversaryTarget t);
AdversaryTarget parse_adversary(std::string_view s);

struct IntensityModelConfig {
  int input_dim = dsp::kNumFunctionals;
  int hidden_dim = 256;
  HeadType head_type = HeadType::EPR;
  double alpha = 1.0;  // 1.0 until calibrated
  bool grl_enabled = true;
  double grl_scale = 0.5;
  AdversaryTarget adversary_target = AdversaryTarget::Speaker;
  int adversary_classes = 10;
};

nlohmann::json config_to_json(const IntensityModelConfig& c);
IntensityModelConfig config_from_json(const nlohmann::json& doc);

/// Calibrated probabilities ordered (Angry, Happy, Sad, Surprise).
struct EmotionIntensity {
  std::array<double, 4> values{};

  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
  Vector as_vector() const { return Eigen::Map<const Vector>(values.data(), 4); }
};

/// Shared extractor (two fully connected layers with a ReLU between), a SER
/// or EPR head over the mean-pooled extractor output, and a linear adversary.
class IntensityModel {
 public:
  IntensityModel() = default;
  IntensityModel(const IntensityModelConfig& config, Rng& rng);

  const IntensityModelConfig& config() const { return config_; }
  IntensityModelConfig& mutable_config() { return config_; }

  /// Frames (n x input_dim, already normalised) -> per-frame hidden (n x hidden).
  nn::Var extract(nn::Var frames) const;
  /// Pooled (B x hidden) -> head logits (B x 4 for SER, B x 8 as (absent, present) pairs for EPR).
  nn::Var head_logits(nn::Var pooled) const;
  nn::Var adversary_logits(nn::Var pooled) const;

  /// Head logits for one segment of raw (unnormalised) frames.
  Vector segment_logits(const Matrix& raw_frames) const;

  nn::ParameterList extractor_parameters() const;
  nn::ParameterList head_parameters() const;
  nn::ParameterList adversary_parameters() const;
  nn::ParameterList all_parameters() const;

  dsp::NormStats norm;

  // Exposed for tests and checkpointing.
  nn::Linear fc1, fc2;
  nn::Linear ser_head;
  std::array<nn::Linear, 4> epr_heads;
  nn::Linear adversary;

 private:
  IntensityModelConfig config_;
};

/// Extractor per frame, mean-pooled over the segment, head, tempered softmax.
EmotionIntensity forward_intensity(const IntensityModel& model, const Matrix& raw_frames);
EmotionIntensity forward_intensity(const IntensityModel& model, const dsp::FrameFeatures& ff,
                                   const corpus::TimeSpan& span);
/// Same as forward_intensity but from precomputed head logits.
EmotionIntensity intensity_from_logits(const Vector& logits, HeadType head, double alpha);

inline constexpr std::string_view kIntensityArchiveKind = "intensity-model";

TensorArchive model_to_archive(const IntensityModel& model);
IntensityModel model_from_archive(const TensorArchive& archive);
void save_model(const std::filesystem::path& path, const IntensityModel& model);
IntensityModel load_model(const std::filesystem::path& path);

}  // namespace hedtts::intensity
