// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hedtts {

/// Mono waveform, samples nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  std::uint64_t frames = 0;
};

// RIFF/WAVE with PCM 16/24/32-bit integer or 32-bit float payloads.
// Multi-channel input is averaged down to mono.
WavInfo read_wav_info(const std::filesystem::path& path);
Waveform read_wav(const std::filesystem::path& path);
Waveform decode_wav(const std::string& bytes);

/// 16-bit PCM mono; samples are clipped to [-1, 1].
std::string encode_wav(const Waveform& wave);
void write_wav(const std::filesystem::path& path, const Waveform& wave);

}  // namespace hedtts
