// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hedtts/common/emotion.hpp"
#include "hedtts/common/types.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/corpus/alignment.hpp"
#include "hedtts/corpus/corpus.hpp"

namespace hedtts::toy {

/// Acoustic cue strengths per unit of emotion intensity.
struct EmotionCues {
  double sad_log_gain = -1.0;      // natural-log amplitude shift
  double angry_tilt = -0.6;        // change of spectral tilt exponent
  double angry_log_gain = 0.25;
  double happy_f0_ratio = 0.25;    // relative F0 raise
  double surprise_f0_rise = 0.5;   // relative F0 rise across the utterance
};

struct ToyCorpusConfig {
  int speakers = 4;
  int utterances_per_cell = 6;  // per (speaker, emotion)
  int min_words = 2;
  int max_words = 4;
  std::vector<double> intensity_levels = {0.25, 0.5, 0.75, 1.0};
  std::vector<Emotion> emotions = {Emotion::Neutral, Emotion::Angry, Emotion::Happy, Emotion::Sad, Emotion::Surprise};
  EmotionCues cues;
  std::uint64_t seed = 0;
};

struct ToySpeaker {
  std::string id;
  corpus::Gender gender = corpus::Gender::Unknown;
  double f0 = 120.0;
  double formant_scale = 1.0;
};

std::vector<ToySpeaker> toy_speakers(int count);

struct ToyUtterance {
  std::string id;
  std::string speaker_id;
  corpus::Gender gender = corpus::Gender::Unknown;
  Emotion emotion = Emotion::Neutral;
  double intensity = 0.0;  // 0 for Neutral
  std::string text;
  corpus::AlignmentTrack alignment;
  Waveform audio;
};

/// Renders one utterance of the given words with formant synthesis.
ToyUtterance render_utterance(const std::string& id, const ToySpeaker& speaker, const std::vector<std::string>& words,
                              Emotion emotion, double intensity, const EmotionCues& cues, std::uint64_t seed);

std::vector<ToyUtterance> generate_toy_corpus(const ToyCorpusConfig& config);

/// Ground-truth HED: every level carries the utterance's intensity in its
/// emotion column (all zeros for Neutral).
Matrix toy_hed_matrix(const ToyUtterance& utt);

/// Writes wavs/, alignments/, manifest.csv (with gender) and intensities.csv.
void write_toy_corpus(const std::filesystem::path& root, const std::vector<ToyUtterance>& utterances);

struct ToyLabel {
  Emotion emotion = Emotion::Neutral;
  double intensity = 0.0;
};
/// Reads intensities.csv keyed by utterance id.
std::map<std::string, ToyLabel> read_toy_labels(const std::filesystem::path& file);

}  // namespace hedtts::toy
