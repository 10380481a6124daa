// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hedtts/common/emotion.hpp"
#include "hedtts/corpus/segments.hpp"
#include "hedtts/intensity/model.hpp"

namespace hedtts::intensity {

/// One training segment: raw feature rows (one row for functionals, many
/// for frame features), its utterance-level label and the adversary class.
struct SegmentSample {
  Matrix frames;
  Emotion emotion = Emotion::Neutral;
  Level level = Level::Utterance;
  int adversary_class = 0;
  std::string utterance_id;
};

enum class SampleMode { Frames, Functionals };

/// Samples for every utterance/word/phone segment of one utterance.
std::vector<SegmentSample> segment_samples(const dsp::FrameFeatures& ff, const corpus::SegmentSet& segments,
                                           Emotion emotion, int adversary_class, const std::string& utterance_id,
                                           SampleMode mode);

struct TrainConfig {
  int epochs = 200;
  int batch_size = 16;
  double learning_rate = 1e-3;
  int lr_step_epochs = 5;
  double lr_gamma = 0.8;
  double weight_decay = 0.0;
  // A faster adversary keeps the reversed gradient informative; at the
  // extractor's rate the extractor learns to permute speaker cues instead.
  double adversary_learning_rate = 1e-2;
  int patience = 30;  // epochs without validation improvement before stopping
  int stabilization_epochs = 100;
  double chance_tolerance = 0.10;
  int top_k = 5;
  std::uint64_t seed = 0;
  bool calibrate = true;
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;
  double emotion_loss = 0.0;
  double adversary_loss = 0.0;
  double val_accuracy = 0.0;
};

struct CheckpointRecord {
  int epoch = 0;
  double val_accuracy = 0.0;
  double adversary_accuracy = 0.0;
  bool near_chance = false;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::vector<CheckpointRecord> candidates;  // stabilised, in evaluation order
  int selected_epoch = -1;
  double val_accuracy = 0.0;
  double adversary_accuracy = 0.0;
  double adversary_chance = 0.0;
  bool fallback_used = false;  // no candidate was near chance
  AlphaSelection alpha;
};

nlohmann::json report_to_json(const TrainReport& report);

struct TrainResult {
  IntensityModel model;
  TrainReport report;
};

/// Joint emotion + adversary training, then per-candidate adversary
/// stabilisation, checkpoint selection and alpha calibration.
TrainResult train_intensity_model(const std::vector<SegmentSample>& train, const std::vector<SegmentSample>& val,
                                  IntensityModelConfig config, const TrainConfig& options);

/// Argmax accuracy over non-Neutral segments (the emotion with the highest
/// intensity, or logit, matches the label).
double emotion_accuracy(const IntensityModel& model, const std::vector<SegmentSample>& samples);

/// Accuracy of the adversary over the samples, with the extractor frozen.
double adversary_accuracy(const IntensityModel& model, const std::vector<SegmentSample>& samples);

/// Head logits for every sample (rows aligned with samples).
Matrix batch_logits(const IntensityModel& model, const std::vector<SegmentSample>& samples);

}  // namespace hedtts::intensity
