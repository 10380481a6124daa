// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/corpus/segments.hpp"

#include "hedtts/common/error.hpp"

namespace hedtts::corpus {

std::vector<Segment> SegmentSet::all() const {
  std::vector<Segment> out;
  out.reserve(size());
  out.push_back(utterance);
  out.insert(out.end(), words.begin(), words.end());
  out.insert(out.end(), phones.begin(), phones.end());
  return out;
}

SegmentSet slice_segments(const AlignmentTrack& track, const SliceOptions& options) {
  if (track.phones.empty()) fail(ErrorCode::EmptyTrack, "alignment has no phones");
  const auto n_phones = static_cast<int>(track.phones.size());

  SegmentSet out;
  out.utterance = {Level::Utterance, 0, {track.phones.front().start, track.phones.back().end}, 0,
                   n_phones};

  for (int i = 0; i < n_phones; ++i) {
    const auto& p = track.phones[static_cast<std::size_t>(i)];
    out.phones.push_back({Level::Phoneme, i, {p.start, p.end}, i, i + 1});
  }

  int cursor = 0;
  for (int w = 0; w < static_cast<int>(track.words.size()); ++w) {
    int first = cursor;
    while (first < n_phones && track.phones[static_cast<std::size_t>(first)].word_index < w) ++first;
    int last = first;
    while (last < n_phones && track.phones[static_cast<std::size_t>(last)].word_index == w) ++last;
    cursor = last;

    Segment seg{Level::Word, w, {}, first, last};
    if (first == last) {
      // word without phones: keep its own interval, cover no phones
      seg.span = {track.words[static_cast<std::size_t>(w)].start,
                  track.words[static_cast<std::size_t>(w)].end};
    } else {
      int lo = first;
      int hi = last;
      if (options.trim_word_silence) {
        while (lo < hi && is_silence_symbol(track.phones[static_cast<std::size_t>(lo)].symbol)) ++lo;
        while (hi > lo && is_silence_symbol(track.phones[static_cast<std::size_t>(hi - 1)].symbol)) --hi;
        if (lo == hi) {
          lo = first;
          hi = last;
        }
      }
      seg.span = {track.phones[static_cast<std::size_t>(lo)].start,
                  track.phones[static_cast<std::size_t>(hi - 1)].end};
    }
    out.words.push_back(seg);
  }
  return out;
}

}  // namespace hedtts::corpus
