// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hedtts/common/emotion.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/wav.hpp"

namespace hedtts::corpus {

enum class Gender { Unknown, Female, Male };

std::string_view gender_name(Gender g);
Gender parse_gender(std::string_view text);

struct UtteranceRecord {
  std::string id;
  std::string speaker_id;
  Emotion emotion_label = Emotion::Neutral;
  std::string text;
  std::filesystem::path audio_path;
  int sample_rate = 16000;  // rate of the file on disk
  double duration = 0.0;    // seconds
  Gender gender = Gender::Unknown;
  std::optional<std::filesystem::path> alignment_path;
};

/// Immutable after load; safe to share between workers.
class CorpusIndex {
 public:
  CorpusIndex() = default;

  void add(UtteranceRecord record);

  const UtteranceRecord& at(const std::string& id) const;
  bool contains(const std::string& id) const { return by_id_.count(id) > 0; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// Records ordered by id.
  const std::vector<UtteranceRecord>& records() const { return records_; }
  std::vector<std::string> speakers() const;
  /// (speaker, emotion) -> ids, ids sorted.
  std::map<std::pair<std::string, Emotion>, std::vector<std::string>> groups() const;

  std::vector<std::string> warnings;
  std::filesystem::path root;

 private:
  std::vector<UtteranceRecord> records_;
  std::map<std::string, std::size_t> by_id_;
};

struct LoadOptions {
  /// Accept non-16 kHz files; load_audio then resamples them.
  bool allow_resample = false;
  /// Directory holding <id>.json alignments; defaults to <root>/alignments.
  std::optional<std::filesystem::path> alignment_dir;
};

/// Manifest CSV columns: id,speaker,emotion,text,audio_relpath[,gender].
/// Without a manifest the ESD layout is scanned:
///   <root>/<speaker>/<speaker>.txt  lines "id<TAB>text<TAB>emotion"
///   <root>/<speaker>/<Emotion>/**/<id>.wav
CorpusIndex load_corpus(const std::filesystem::path& root,
                        const std::optional<std::filesystem::path>& manifest = std::nullopt,
                        const LoadOptions& options = {});

/// Decoded mono audio at 16 kHz (resampled when the record is not).
Waveform load_audio(const UtteranceRecord& record);

void write_manifest(const std::filesystem::path& file, const CorpusIndex& index);

/// Ingests an external frame embedding (SSL features, speaker embeddings ...)
/// and checks it covers the utterance: frames ~= duration * rate (+-2).
FrameMatrix load_external_embedding(const std::filesystem::path& file,
                                    const UtteranceRecord& record);

std::vector<std::vector<std::string>> parse_csv(const std::string& text);
std::string csv_escape(const std::string& field);

}  // namespace hedtts::corpus
