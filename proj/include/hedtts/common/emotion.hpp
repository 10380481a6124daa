// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace hedtts {

enum class Emotion { Neutral, Angry, Happy, Sad, Surprise };

inline constexpr std::array<Emotion, 5> kAllEmotions = {
    Emotion::Neutral, Emotion::Angry, Emotion::Happy, Emotion::Sad, Emotion::Surprise};

/// Intensity vectors are always ordered (Angry, Happy, Sad, Surprise).
/// Neutral has no column of its own.
inline constexpr int kNumIntensityEmotions = 4;
inline constexpr std::array<Emotion, kNumIntensityEmotions> kIntensityOrder = {
    Emotion::Angry, Emotion::Happy, Emotion::Sad, Emotion::Surprise};

std::string_view emotion_name(Emotion e);
std::optional<Emotion> parse_emotion(std::string_view name);

/// Column in an intensity vector, or -1 for Neutral.
int intensity_index(Emotion e);
Emotion emotion_at(int intensity_column);

enum class Level { Phoneme, Word, Utterance };

inline constexpr std::array<Level, 3> kAllLevels = {Level::Phoneme, Level::Word, Level::Utterance};

std::string_view level_name(Level level);
std::optional<Level> parse_level(std::string_view name);

}  // namespace hedtts
