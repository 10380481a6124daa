// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hedtts/dsp/mel.hpp"
#include "hedtts/hed/hed.hpp"
#include "hedtts/tts/model.hpp"
#include "hedtts/tts/vocoder.hpp"

namespace hedtts::tts {

struct SynthesisRequest {
  PhonemeSequence phonemes;
  hed::HierarchicalED hed;
  Vector speaker_embedding;
  int n_ode_steps = 10;
  std::uint64_t seed = 0;
  double temperature = 0.667;  // noise scale of x0 at sampling
  double length_scale = 1.0;
  /// Frame counts to use instead of the duration predictor.
  std::optional<std::vector<int>> durations;
  bool vocode = true;
};

struct SynthesisResult {
  dsp::MelSpectrogram mel;  // log-mel, bands x frames
  std::vector<int> durations;
  Waveform waveform;        // empty when vocoding was not requested
};

/// All-zero HED over a phoneme sequence (no emotion at any level).
hed::HierarchicalED neutral_hed(const PhonemeSequence& phonemes, const std::string& utterance_id = "");

/// Duration-expanded mean mel for a request, T x mel_dim in normalised units.
Matrix request_mean_mel(const AcousticModel& model, const SynthesisRequest& request, std::vector<int>* durations);

/// Throws ModelNotLoaded for a null model, EmptyInput for no phonemes and
/// LengthMismatch when the HED or speaker embedding does not fit.
SynthesisResult synthesize(const AcousticModel* model, const SynthesisRequest& request,
                           const GriffinLimConfig& vocoder = {});

}  // namespace hedtts::tts
