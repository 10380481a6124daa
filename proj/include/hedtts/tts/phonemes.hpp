// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hedtts/corpus/alignment.hpp"

namespace hedtts::tts {

/// Symbol table for the text encoder. Index 0 is reserved for padding.
class PhoneInventory {
 public:
  PhoneInventory() = default;
  explicit PhoneInventory(std::vector<std::string> symbols);

  /// ARPAbet with stress-marked vowels plus SIL and SP.
  static PhoneInventory arpabet();

  int id(const std::string& symbol) const;  // throws UnknownSymbol
  bool contains(const std::string& symbol) const { return index_.count(symbol) > 0; }
  std::vector<int> encode(const std::vector<std::string>& symbols) const;
  const std::vector<std::string>& symbols() const { return symbols_; }
  int size() const { return static_cast<int>(symbols_.size()) + 1; }

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, int> index_;
};

struct PhonemeSequence {
  std::vector<std::string> symbols;
  std::vector<int> word_index;
  std::vector<std::string> words;

  std::size_t size() const { return symbols.size(); }
};

PhonemeSequence phonemes_from_alignment(const corpus::AlignmentTrack& track);

/// Word to pronunciation lookup. Words missing from the table fall back to a
/// crude letter-to-phone map.
class Lexicon {
 public:
  Lexicon() = default;

  /// Small built-in table covering the toy corpus vocabulary.
  static Lexicon builtin();
  /// CMUdict-style text: "WORD  PH1 PH2 ...", ';;;' comments.
  static Lexicon load(const std::filesystem::path& file);

  void add(const std::string& word, std::vector<std::string> phones);
  std::vector<std::string> pronounce(const std::string& word) const;
  bool contains(const std::string& word) const;

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

/// Splits text into words and looks each up. Throws EmptyInput when the text
/// has no words.
PhonemeSequence text_to_phonemes(const std::string& text, const Lexicon& lexicon);

}  // namespace hedtts::tts
