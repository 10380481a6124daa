// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "hedtts/common/rng.hpp"
#include "hedtts/common/wav.hpp"

namespace hedtts::testing {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("hedtts_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline Waveform sine(double hz, double seconds, double amplitude = 0.5, int rate = 16000) {
  Waveform w;
  w.sample_rate = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.samples[i] = amplitude * std::sin(2.0 * M_PI * hz * i / rate);
  return w;
}

inline Waveform white_noise(double seconds, std::uint64_t seed, double amplitude = 0.3) {
  Rng rng(seed);
  Waveform w;
  w.samples.resize(static_cast<std::size_t>(seconds * 16000));
  for (auto& s : w.samples) s = amplitude * rng.uniform(-1.0, 1.0);
  return w;
}

inline std::string fixture(const std::string& rel) { return std::string(HEDTTS_FIXTURES) + "/" + rel; }

}  // namespace hedtts::testing
