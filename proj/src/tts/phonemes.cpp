// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/tts/phonemes.hpp"

#include <cctype>
#include <sstream>

#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"

namespace hedtts::tts {

namespace {

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

const std::map<char, std::vector<std::string>>& letter_map() {
  static const std::map<char, std::vector<std::string>> m = {
      {'A', {"AE1"}}, {'B', {"B"}},  {'C', {"K"}},  {'D', {"D"}},   {'E', {"EH1"}}, {'F', {"F"}},  {'G', {"G"}},
      {'H', {"HH"}},  {'I', {"IH1"}}, {'J', {"JH"}}, {'K', {"K"}},  {'L', {"L"}},   {'M', {"M"}},  {'N', {"N"}},
      {'O', {"AA1"}}, {'P', {"P"}},  {'Q', {"K"}},  {'R', {"R"}},   {'S', {"S"}},   {'T', {"T"}},  {'U', {"AH1"}},
      {'V', {"V"}},   {'W', {"W"}},  {'X', {"K", "S"}}, {'Y', {"Y"}}, {'Z', {"Z"}}};
  return m;
}

}  // namespace

PhoneInventory::PhoneInventory(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i], static_cast<int>(i) + 1).second)
      fail(ErrorCode::DuplicateId, "phone inventory lists '" + symbols_[i] + "' twice");
  }
}

PhoneInventory PhoneInventory::arpabet() {
  static const char* vowels[] = {"AA", "AE", "AH", "AO", "AW", "AY", "EH", "ER", "EY", "IH", "IY", "OW", "OY", "UH", "UW"};
  static const char* consonants[] = {"B", "CH", "D",  "DH", "F", "G", "HH", "JH", "K", "L", "M", "N",
                                     "NG", "P", "R", "S", "SH", "T", "TH", "V", "W", "Y", "Z", "ZH"};
  std::vector<std::string> s = {"SIL", "SP"};
  for (const char* v : vowels)
    for (int stress = 0; stress < 3; ++stress) s.push_back(std::string(v) + std::to_string(stress));
  for (const char* c : consonants) s.emplace_back(c);
  return PhoneInventory(std::move(s));
}

int PhoneInventory::id(const std::string& symbol) const {
  auto it = index_.find(symbol);
  if (it == index_.end()) fail(ErrorCode::UnknownSymbol, "phone '" + symbol + "' is not in the inventory");
  return it->second;
}

std::vector<int> PhoneInventory::encode(const std::vector<std::string>& symbols) const {
  std::vector<int> out;
  out.reserve(symbols.size());
  for (const auto& s : symbols) out.push_back(id(s));
  return out;
}

PhonemeSequence phonemes_from_alignment(const corpus::AlignmentTrack& track) {
  PhonemeSequence seq;
  for (const auto& p : track.phones) {
    seq.symbols.push_back(p.symbol);
    seq.word_index.push_back(p.word_index);
  }
  for (const auto& w : track.words) seq.words.push_back(w.text);
  return seq;
}

Lexicon Lexicon::builtin() {
  Lexicon lex;
  const std::pair<const char*, const char*> table[] = {
      {"THE", "DH AH0"},          {"A", "AH0"},           {"CAT", "K AE1 T"},        {"SAT", "S AE1 T"},
      {"HELLO", "HH AH0 L OW1"},  {"WORLD", "W ER1 L D"}, {"DOG", "D AO1 G"},        {"RAN", "R AE1 N"},
      {"SUN", "S AH1 N"},         {"IS", "IH1 Z"},        {"BIG", "B IH1 G"},        {"RED", "R EH1 D"},
      {"BLUE", "B L UW1"},        {"SKY", "S K AY1"},     {"WE", "W IY1"},           {"GO", "G OW1"},
      {"HOME", "HH OW1 M"},       {"NOW", "N AW1"},       {"MAMA", "M AA1 M AH0"},   {"NINE", "N AY1 N"},
      {"MOON", "M UW1 N"},        {"LOVELY", "L AH1 V L IY0"}, {"WINDOW", "W IH1 N D OW0"},
      {"MORNING", "M AO1 R N IH0 NG"}, {"YELLOW", "Y EH1 L OW0"}, {"LEMON", "L EH1 M AH0 N"},
      {"RAINBOW", "R EY1 N B OW2"}, {"ANIMAL", "AE1 N AH0 M AH0 L"}, {"MELODY", "M EH1 L AH0 D IY0"},
      {"NO", "N OW1"},            {"YES", "Y EH1 S"},     {"SO", "S OW1"},           {"AND", "AE1 N D"}};
  for (const auto& [w, p] : table) {
    std::istringstream ss(p);
    std::vector<std::string> phones;
    std::string ph;
    while (ss >> ph) phones.push_back(ph);
    lex.add(w, std::move(phones));
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& file) {
  Lexicon lex;
  std::istringstream in(read_file(file));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind(";;;", 0) == 0) continue;
    std::istringstream ss(line);
    std::string word, ph;
    ss >> word;
    std::vector<std::string> phones;
    while (ss >> ph) phones.push_back(corpus::normalize_phone_symbol(ph));
    if (!word.empty() && !phones.empty()) lex.add(word, std::move(phones));
  }
  return lex;
}

void Lexicon::add(const std::string& word, std::vector<std::string> phones) { entries_[upper(word)] = std::move(phones); }

bool Lexicon::contains(const std::string& word) const { return entries_.count(upper(word)) > 0; }

std::vector<std::string> Lexicon::pronounce(const std::string& word) const {
  const std::string w = upper(word);
  auto it = entries_.find(w);
  if (it != entries_.end()) return it->second;
  std::vector<std::string> out;
  for (char c : w) {
    auto m = letter_map().find(c);
    if (m != letter_map().end()) out.insert(out.end(), m->second.begin(), m->second.end());
  }
  return out;
}

PhonemeSequence text_to_phonemes(const std::string& text, const Lexicon& lexicon) {
  PhonemeSequence seq;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    const auto phones = lexicon.pronounce(word);
    if (!phones.empty()) {
      const int w = static_cast<int>(seq.words.size());
      seq.words.push_back(word);
      for (const auto& p : phones) {
        seq.symbols.push_back(p);
        seq.word_index.push_back(w);
      }
    }
    word.clear();
  };
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '\'') {
      word.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  if (seq.symbols.empty()) fail(ErrorCode::EmptyInput, "text contains no pronounceable words");
  return seq;
}

}  // namespace hedtts::tts
