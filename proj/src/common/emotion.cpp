// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/common/emotion.hpp"

#include <algorithm>
#include <cctype>

#include "hedtts/common/error.hpp"

namespace hedtts {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view emotion_name(Emotion e) {
  switch (e) {
    case Emotion::Neutral: return "Neutral";
    case Emotion::Angry: return "Angry";
    case Emotion::Happy: return "Happy";
    case Emotion::Sad: return "Sad";
    case Emotion::Surprise: return "Surprise";
  }
  return "Neutral";
}

std::optional<Emotion> parse_emotion(std::string_view name) {
  const std::string n = lower(name);
  if (n == "neutral") return Emotion::Neutral;
  if (n == "angry" || n == "ang" || n == "a") return Emotion::Angry;
  if (n == "happy" || n == "hap" || n == "h") return Emotion::Happy;
  if (n == "sad" || n == "s") return Emotion::Sad;
  if (n == "surprise" || n == "sur") return Emotion::Surprise;
  return std::nullopt;
}

int intensity_index(Emotion e) {
  switch (e) {
    case Emotion::Angry: return 0;
    case Emotion::Happy: return 1;
    case Emotion::Sad: return 2;
    case Emotion::Surprise: return 3;
    case Emotion::Neutral: return -1;
  }
  return -1;
}

Emotion emotion_at(int column) {
  if (column < 0 || column >= kNumIntensityEmotions)
    fail(ErrorCode::IndexOutOfRange, "intensity column " + std::to_string(column));
  return kIntensityOrder[static_cast<std::size_t>(column)];
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Phoneme: return "phoneme";
    case Level::Word: return "word";
    case Level::Utterance: return "utterance";
  }
  return "phoneme";
}

std::optional<Level> parse_level(std::string_view name) {
  const std::string n = lower(name);
  if (n == "phoneme" || n == "phone" || n == "p") return Level::Phoneme;
  if (n == "word" || n == "w") return Level::Word;
  if (n == "utterance" || n == "sentence" || n == "u") return Level::Utterance;
  return std::nullopt;
}

}  // namespace hedtts
