// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hedtts::corpus {

struct AlignedPhone {
  std::string symbol;
  double start = 0.0;
  double end = 0.0;
  int word_index = 0;

  bool operator==(const AlignedPhone&) const = default;
};

struct AlignedWord {
  std::string text;
  double start = 0.0;
  double end = 0.0;

  bool operator==(const AlignedWord&) const = default;
};

/// Forced-alignment output for one utterance. Invariants (checked by
/// validate_alignment): phones ordered, non-overlapping, end > start; each
/// word_index addresses a word; a word's phones lie inside the word interval
/// within kWordSpanTolerance.
struct AlignmentTrack {
  std::string utterance_id;
  std::vector<AlignedPhone> phones;
  std::vector<AlignedWord> words;

  bool operator==(const AlignmentTrack&) const = default;
};

inline constexpr double kWordSpanTolerance = 0.010;

/// Upper-cases ARPA-style symbols and maps pause spellings onto "SIL"/"SP".
std::string normalize_phone_symbol(std::string_view symbol);
bool is_silence_symbol(std::string_view symbol);

void validate_alignment(const AlignmentTrack& track);

AlignmentTrack alignment_from_json(const nlohmann::json& doc);
nlohmann::json alignment_to_json(const AlignmentTrack& track);

AlignmentTrack parse_alignment(const std::filesystem::path& file);
std::string serialize_alignment(const AlignmentTrack& track);
void write_alignment(const std::filesystem::path& file, const AlignmentTrack& track);

/// Frame count covered by a span at the mel hop: seconds * 16000 / 256.
int seconds_to_frames(double seconds);
std::vector<int> phone_frame_durations(const AlignmentTrack& track);

}  // namespace hedtts::corpus
