// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "hedtts/common/wav.hpp"
#include "hedtts/dsp/mel.hpp"

namespace hedtts::tts {

struct GriffinLimConfig {
  int iterations = 64;
  int nnls_iterations = 30;
  std::uint64_t seed = 0;
};

/// Non-negative least-squares inversion of the mel filterbank (multiplicative
/// updates), returning STFT magnitudes, bins x frames.
Matrix mel_to_magnitude(const dsp::MelSpectrogram& mel, int nnls_iterations = 30);

/// Iterative phase reconstruction from magnitudes; output has frames * hop samples.
std::vector<double> griffin_lim(const Matrix& magnitude, const GriffinLimConfig& config = {});

Waveform vocode(const dsp::MelSpectrogram& mel, const GriffinLimConfig& config = {});

}  // namespace hedtts::tts
