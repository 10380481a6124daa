// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/common/wav.hpp"
#include "hedtts/corpus/alignment.hpp"
#include "hedtts/tts/model.hpp"

namespace hedtts::tts {

struct TtsExample {
  std::string utterance_id;
  std::string speaker_id;
  std::vector<int> phone_ids;
  std::vector<int> durations;
  Matrix mel;  // frames x bands, raw log-mel, frames == sum(durations)
  Matrix hed;  // phones x 12
  Vector speaker_embedding;
};

/// Cuts the mel to the aligned span (padding by repeating the edge frame when
/// rounding leaves it up to two frames short). Throws AlignmentMismatch when
/// the alignment runs further past the audio.
TtsExample make_example(const PhoneInventory& inventory, const corpus::AlignmentTrack& track, const Waveform& audio,
                        const Matrix& hed, const Vector& speaker_embedding, const std::string& speaker_id);

struct TtsTrainConfig {
  int steps = 2000;
  int batch_size = 4;
  double learning_rate = 2e-3;
  double grad_clip = 5.0;
  std::uint64_t seed = 0;
  /// Feed each utterance the embedding of another utterance by the same speaker.
  bool cross_utterance_speaker = true;
  bool fit_mel_norm = true;
};

nlohmann::json train_config_to_json(const TtsTrainConfig& c);
TtsTrainConfig train_config_from_json(const nlohmann::json& doc);

struct TtsStepRecord {
  double duration_loss = 0.0;
  double prior_loss = 0.0;
  double cfm_loss = 0.0;
};

struct TtsTrainReport {
  std::vector<TtsStepRecord> steps;

  /// Mean CFM loss over steps [begin, end).
  double mean_cfm(std::size_t begin, std::size_t end) const;
};

nlohmann::json report_to_json(const TtsTrainReport& report);

struct TtsLosses {
  nn::Var duration, prior, cfm;
};

/// Loss terms for one example on `tape`: log-duration MSE, mean-mel prior MSE
/// and the flow-matching loss.
TtsLosses example_losses(nn::Tape& tape, const AcousticModel& model, const TtsExample& example,
                         const Vector& speaker_embedding, Rng& rng);

TtsTrainReport train_acoustic_model(AcousticModel& model, const std::vector<TtsExample>& examples,
                                    const TtsTrainConfig& config);

/// Mean absolute frame error of the duration predictor (rounded durations).
double duration_frame_error(const AcousticModel& model, const std::vector<TtsExample>& examples);

}  // namespace hedtts::tts
