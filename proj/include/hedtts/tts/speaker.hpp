// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "hedtts/common/types.hpp"

namespace hedtts::tts {

inline constexpr int kSpeakerDim = 256;

/// Deterministic unit-norm stand-in for a speaker-verifier embedding, seeded
/// by a hash of the speaker id.
Vector pseudo_speaker_embedding(const std::string& speaker_id, int dim = kSpeakerDim);

/// Speaker embedding plus a small utterance-specific perturbation, so that
/// embeddings from different utterances of one speaker differ slightly.
Vector pseudo_utterance_embedding(const std::string& speaker_id, const std::string& utterance_id,
                                  int dim = kSpeakerDim, double spread = 0.1);

/// Reads a JSON array, a JSON object with an "embedding" array, or
/// whitespace-separated numbers.
Vector load_speaker_embedding(const std::filesystem::path& file);
void save_speaker_embedding(const std::filesystem::path& file, const Vector& embedding);

}  // namespace hedtts::tts
