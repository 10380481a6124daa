// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/common/archive.hpp"
#include "hedtts/common/rng.hpp"
#include "hedtts/nn/layers.hpp"
#include "hedtts/tts/phonemes.hpp"

namespace hedtts::tts {

struct EncoderConfig {
  int dim = 192;
  int heads = 2;
  int blocks = 2;
  int ffn_dim = 384;
};

struct DecoderConfig {
  int mel_dim = 100;
  int width = 64;
  int time_dim = 32;
};

struct AcousticConfig {
  EncoderConfig encoder;
  DecoderConfig decoder;
  int speaker_dim = 256;
  int hed_dim = 12;
  int duration_hidden = 192;
  double sigma_min = 1e-4;

  /// Reduced sizes used by the toy corpus and tests.
  static AcousticConfig toy();
};

nlohmann::json config_to_json(const AcousticConfig& c);
AcousticConfig acoustic_config_from_json(const nlohmann::json& doc);

/// Pre-norm transformer encoder over phoneme ids with sinusoidal positions.
class TextEncoder {
 public:
  TextEncoder() = default;
  TextEncoder(const EncoderConfig& config, int vocab, Rng& rng);

  /// n x dim.
  nn::Var operator()(nn::Tape& tape, const std::vector<int>& ids) const;
  void collect(nn::ParameterList& out) const;

 private:
  struct Block {
    nn::LayerNorm ln1, ln2;
    nn::Linear q, k, v, o, ff1, ff2;
  };
  EncoderConfig config_;
  nn::Embedding embed_;
  std::vector<Block> blocks_;
  nn::LayerNorm final_;
};

/// n x dim sinusoidal position table.
Matrix sinusoidal_positions(Eigen::Index n, int dim);
/// 1 x dim sinusoidal embedding of a scalar flow time (scaled by 1000).
Matrix time_features(double t, int dim);

/// Two conv layers and a projection predicting log frame counts per phoneme.
class DurationPredictor {
 public:
  DurationPredictor() = default;
  DurationPredictor(int in, int hidden, Rng& rng);

  nn::Var operator()(nn::Var cond) const;  // n x 1
  void collect(nn::ParameterList& out) const;

 private:
  nn::Conv1d conv1_, conv2_;
  nn::LayerNorm ln1_, ln2_;
  nn::Linear proj_;
};

/// 1-D U-Net flow-prediction network: two stride-2 down stages, a middle
/// residual block and two up stages with skip connections. No normalisation
/// layers: per-frame layer norm discards the frame scale the velocity needs. Input and output
/// are T x mel_dim with rows as frames; T is padded to a multiple of 4.
class FlowDecoder {
 public:
  FlowDecoder() = default;
  FlowDecoder(const DecoderConfig& config, Rng& rng);

  nn::Var operator()(nn::Var x, nn::Var mu, double t) const;
  void collect(nn::ParameterList& out) const;
  const DecoderConfig& config() const { return config_; }

 private:
  struct ResBlock {
    nn::Conv1d conv1, conv2;
    nn::Linear time;
    nn::Var operator()(nn::Var x, nn::Var temb) const;
    void collect(nn::ParameterList& out) const;
  };
  static ResBlock make_block(const std::string& name, int width, Rng& rng);

  DecoderConfig config_;
  nn::Linear time1_, time2_;
  nn::Conv1d in_;
  ResBlock down1_, down2_, mid_, up2_block_, up1_block_;
  nn::Conv1d pool1_, pool2_, up2_, up1_;
  nn::Conv1d out_;
};

/// Per-band mean and standard deviation of log-mel frames.
struct MelNorm {
  Vector mean;
  Vector stddev;

  Matrix normalize(const Matrix& frames) const;    // T x bands
  Matrix denormalize(const Matrix& frames) const;  // T x bands
};

MelNorm fit_mel_norm(const std::vector<Matrix>& frame_mels);

/// Text encoder, conditioning projection, duration predictor, mean-mel
/// projection and flow decoder, plus the phone inventory and mel statistics.
class AcousticModel {
 public:
  AcousticModel() = default;
  AcousticModel(const AcousticConfig& config, PhoneInventory inventory, Rng& rng);

  const AcousticConfig& config() const { return config_; }
  const PhoneInventory& inventory() const { return inventory_; }

  nn::Var encode_text(nn::Tape& tape, const std::vector<int>& ids) const;
  /// FC(concat(ling, speaker, hed)) -> n x encoder.dim.
  nn::Var conditioning(nn::Tape& tape, nn::Var ling, const Vector& speaker, const Matrix& hed) const;
  nn::Var log_durations(nn::Var cond) const;
  /// Frame-rate mean mel in normalised units: T x mel_dim.
  nn::Var mean_mel(nn::Var cond, const std::vector<int>& durations) const;
  const FlowDecoder& decoder() const { return decoder_; }

  nn::ParameterList parameters() const;

  MelNorm mel_norm;

 private:
  AcousticConfig config_;
  PhoneInventory inventory_;
  TextEncoder encoder_;
  nn::Linear cond_proj_;
  DurationPredictor duration_;
  nn::Linear mel_proj_;
  FlowDecoder decoder_;
};

/// Frame indices mapping each output frame to its phoneme.
std::vector<int> expand_index(const std::vector<int>& durations);
/// max(1, round(exp(log_d) * length_scale)) per phoneme.
std::vector<int> durations_from_log(const Matrix& log_durations, double length_scale = 1.0);

TensorArchive acoustic_to_archive(const AcousticModel& model);
AcousticModel acoustic_from_archive(const TensorArchive& archive);
void save_acoustic_model(const std::filesystem::path& path, const AcousticModel& model);
AcousticModel load_acoustic_model(const std::filesystem::path& path);

}  // namespace hedtts::tts
