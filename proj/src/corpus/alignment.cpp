// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/corpus/alignment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"

namespace hedtts::corpus {

std::string normalize_phone_symbol(std::string_view symbol) {
  std::string out;
  for (char c : symbol)
    if (!std::isspace(static_cast<unsigned char>(c)))
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (out.empty() || out == "<SIL>" || out == "SILENCE" || out == "<EPS>") return "SIL";
  if (out == "<SP>" || out == "PAU" || out == "SPN") return "SP";
  return out;
}

bool is_silence_symbol(std::string_view symbol) {
  const std::string s = normalize_phone_symbol(symbol);
  return s == "SIL" || s == "SP";
}

void validate_alignment(const AlignmentTrack& track) {
  const auto n_words = static_cast<int>(track.words.size());
  for (std::size_t i = 0; i < track.phones.size(); ++i) {
    const auto& p = track.phones[i];
    if (!(std::isfinite(p.start) && std::isfinite(p.end)) || p.end <= p.start)
      fail(ErrorCode::NonMonotonic, "phone " + std::to_string(i) + " has end <= start");
    if (i > 0) {
      const auto& prev = track.phones[i - 1];
      if (p.start < prev.start)
        fail(ErrorCode::NonMonotonic, "phone " + std::to_string(i) + " starts before its predecessor");
      if (p.start < prev.end - 1e-9)
        fail(ErrorCode::OverlappingIntervals,
             "phones " + std::to_string(i - 1) + " and " + std::to_string(i) + " overlap");
      if (p.word_index < prev.word_index)
        fail(ErrorCode::NonMonotonic, "word_index decreases at phone " + std::to_string(i));
    }
    if (p.word_index < 0 || p.word_index >= n_words)
      fail(ErrorCode::OrphanPhone, "phone " + std::to_string(i) + " references word " +
                                       std::to_string(p.word_index));
  }
  for (std::size_t w = 0; w < track.words.size(); ++w) {
    const auto& word = track.words[w];
    if (!(std::isfinite(word.start) && std::isfinite(word.end)) || word.end <= word.start)
      fail(ErrorCode::NonMonotonic, "word " + std::to_string(w) + " has end <= start");
    if (w > 0 && word.start < track.words[w - 1].end - 1e-9)
      fail(ErrorCode::OverlappingIntervals, "words " + std::to_string(w - 1) + " and " +
                                                std::to_string(w) + " overlap");
  }
  for (std::size_t i = 0; i < track.phones.size(); ++i) {
    const auto& p = track.phones[i];
    const auto& word = track.words[static_cast<std::size_t>(p.word_index)];
    if (p.start < word.start - kWordSpanTolerance || p.end > word.end + kWordSpanTolerance)
      fail(ErrorCode::WordSpanMismatch,
           "phone " + std::to_string(i) + " lies outside word " + std::to_string(p.word_index));
  }
}

AlignmentTrack alignment_from_json(const nlohmann::json& doc) {
  AlignmentTrack track;
  try {
    track.utterance_id = doc.at("utterance_id").get<std::string>();
    for (const auto& w : doc.at("words"))
      track.words.push_back({w.at("text").get<std::string>(), w.at("start").get<double>(),
                             w.at("end").get<double>()});
    for (const auto& p : doc.at("phones"))
      track.phones.push_back({normalize_phone_symbol(p.at("symbol").get<std::string>()),
                              p.at("start").get<double>(), p.at("end").get<double>(),
                              p.at("word_index").get<int>()});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptPayload, std::string("alignment document: ") + e.what());
  }
  validate_alignment(track);
  return track;
}

nlohmann::json alignment_to_json(const AlignmentTrack& track) {
  nlohmann::json doc;
  doc["utterance_id"] = track.utterance_id;
  doc["words"] = nlohmann::json::array();
  for (const auto& w : track.words)
    doc["words"].push_back({{"text", w.text}, {"start", w.start}, {"end", w.end}});
  doc["phones"] = nlohmann::json::array();
  for (const auto& p : track.phones)
    doc["phones"].push_back(
        {{"symbol", p.symbol}, {"start", p.start}, {"end", p.end}, {"word_index", p.word_index}});
  return doc;
}

AlignmentTrack parse_alignment(const std::filesystem::path& file) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptPayload, file.string() + ": " + e.what());
  }
  return alignment_from_json(doc);
}

std::string serialize_alignment(const AlignmentTrack& track) {
  return alignment_to_json(track).dump(2) + "\n";
}

void write_alignment(const std::filesystem::path& file, const AlignmentTrack& track) {
  write_file(file, serialize_alignment(track));
}

int seconds_to_frames(double seconds) {
  return static_cast<int>(std::lround(seconds * 16000.0 / 256.0));
}

std::vector<int> phone_frame_durations(const AlignmentTrack& track) {
  // Boundaries are rounded, not individual lengths, so the sum matches the
  // utterance span without accumulating rounding drift.
  std::vector<int> out;
  out.reserve(track.phones.size());
  for (const auto& p : track.phones) {
    const int d = seconds_to_frames(p.end) - seconds_to_frames(p.start);
    out.push_back(std::max(1, d));
  }
  return out;
}

}  // namespace hedtts::corpus
