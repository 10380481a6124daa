// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "hedtts/common/emotion.hpp"
#include "hedtts/corpus/alignment.hpp"

namespace hedtts::corpus {

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
  bool operator==(const TimeSpan&) const = default;
};

/// One classification unit. first_phone/last_phone is the half-open range of
/// phones the segment covers, so each level partitions the phone list.
struct Segment {
  Level level = Level::Utterance;
  int index = 0;  // word index for Level::Word, phone index for Level::Phoneme
  TimeSpan span;
  int first_phone = 0;
  int last_phone = 0;
};

struct SegmentSet {
  Segment utterance;
  std::vector<Segment> words;
  std::vector<Segment> phones;

  std::size_t size() const { return 1 + words.size() + phones.size(); }
  std::vector<Segment> all() const;
};

struct SliceOptions {
  /// Trim leading/trailing pause phones off word spans (a word made entirely
  /// of pauses keeps its full span).
  bool trim_word_silence = false;
};

SegmentSet slice_segments(const AlignmentTrack& track, const SliceOptions& options = {});

}  // namespace hedtts::corpus
