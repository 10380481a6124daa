// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/common/emotion.hpp"
#include "hedtts/common/types.hpp"
#include "hedtts/corpus/alignment.hpp"
#include "hedtts/corpus/segments.hpp"
#include "hedtts/intensity/model.hpp"
#include "hedtts/intensity/train.hpp"

namespace hedtts::hed {

enum class Provenance { Extracted, Edited, Manual };

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view s);

inline constexpr int kHedColumns = 12;
inline constexpr int kHedVersion = 1;

/// Column of (level, emotion) in the 12-wide matrix: blocks ordered
/// [phoneme | word | utterance], emotions (Angry, Happy, Sad, Surprise).
constexpr int hed_column(Level level, int emotion) { return 4 * static_cast<int>(level) + emotion; }

/// Per-phone stack of phoneme-, word- and utterance-level intensities.
struct HierarchicalED {
  std::string utterance_id;
  std::vector<std::string> phones;
  std::vector<int> word_index;  // per phone
  Matrix matrix;                // phones x 12
  Provenance provenance = Provenance::Extracted;

  int num_phones() const { return static_cast<int>(phones.size()); }
  int num_words() const;
  /// 4-vector of one level's block for a phone row.
  Vector block(Level level, int row) const;

  bool operator==(const HierarchicalED& other) const;
};

/// Every entry in [0, 1]; utterance block equal on all rows; word block equal
/// on rows that share a word index; shapes consistent. Empty string when valid.
std::string invariant_violation(const HierarchicalED& hed);
void validate_hed(const HierarchicalED& hed);

/// Builds rows as concat(phone[i], word[word_of(i)], utterance).
HierarchicalED assemble_hed(const corpus::AlignmentTrack& track, const Matrix& phone_eds, const Matrix& word_eds,
                            const Vector& utterance_ed, Provenance provenance = Provenance::Extracted);

/// Intensity for one segment, e.g. a trained model or a test oracle.
using SegmentScorer = std::function<intensity::EmotionIntensity(const corpus::Segment&)>;

HierarchicalED extract_hed(const corpus::AlignmentTrack& track, const std::map<Level, SegmentScorer>& scorers);

/// Where one level's intensities come from: a model and the features it reads.
struct LevelSource {
  const intensity::IntensityModel* model = nullptr;
  const dsp::FrameFeatures* features = nullptr;
  intensity::SampleMode mode = intensity::SampleMode::Functionals;
};

HierarchicalED extract_hed(const corpus::AlignmentTrack& track, const std::map<Level, LevelSource>& sources);

enum class EditMode { Set, Scale };

/// Edit of one (level, emotion) entry over a target range of phones or words
/// ([begin, end), ignored for the utterance level).
struct EDEdit {
  Level level = Level::Utterance;
  int begin = 0;
  int end = 1;
  int emotion = 0;
  EditMode mode = EditMode::Set;
  double value = 0.0;
};

/// Field-level validation message or empty; used by the service for 422s.
std::string edit_violation(const HierarchicalED& hed, const EDEdit& edit);

/// Returns an edited copy. Word and utterance edits fan out to member rows;
/// multi-phone spans skip pause phones. Results clamp to [0, 1].
HierarchicalED apply_edit(const HierarchicalED& hed, const EDEdit& edit);

nlohmann::json edit_to_json(const EDEdit& edit);
EDEdit edit_from_json(const nlohmann::json& doc);

std::vector<double> default_sweep_values();  // 0.0, 0.2, ..., 1.0

/// One HED per value, each a set-edit of the target entries.
std::vector<HierarchicalED> intensity_sweep(const HierarchicalED& hed, Level level, int begin, int end, int emotion,
                                            const std::vector<double>& values);

/// Indices of the k words with the most non-pause phones (ties: earlier word).
std::vector<int> longest_words(const corpus::AlignmentTrack& track, int k = 3);

std::string serialize_hed(const HierarchicalED& hed);
HierarchicalED deserialize_hed(const std::string& text, int reader_version = kHedVersion);
nlohmann::json hed_to_json(const HierarchicalED& hed);
HierarchicalED hed_from_json(const nlohmann::json& doc, int reader_version = kHedVersion);

}  // namespace hedtts::hed
