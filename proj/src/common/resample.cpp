// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/common/resample.hpp"

#include <algorithm>
#include <cmath>

#include "hedtts/common/error.hpp"

namespace hedtts {

std::vector<double> resample(const std::vector<double>& input, int from_rate, int to_rate) {
  require(from_rate > 0 && to_rate > 0, ErrorCode::InvalidArgument, "sample rates must be positive");
  if (from_rate == to_rate || input.empty()) return input;

  constexpr int kZeroCrossings = 16;
  const double ratio = static_cast<double>(to_rate) / from_rate;
  const double cutoff = std::min(1.0, ratio);  // relative to input Nyquist
  const double half_width = kZeroCrossings / cutoff;
  const auto n_out = static_cast<std::size_t>(std::floor(input.size() * ratio));
  const auto n_in = static_cast<long>(input.size());

  std::vector<double> out(n_out, 0.0);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double centre = i / ratio;
    const long lo = std::max<long>(0, static_cast<long>(std::ceil(centre - half_width)));
    const long hi = std::min<long>(n_in - 1, static_cast<long>(std::floor(centre + half_width)));
    double acc = 0.0;
    for (long j = lo; j <= hi; ++j) {
      const double x = (j - centre) * cutoff;
      const double sinc = x == 0.0 ? 1.0 : std::sin(M_PI * x) / (M_PI * x);
      const double window = 0.5 + 0.5 * std::cos(M_PI * (j - centre) / half_width);
      acc += input[static_cast<std::size_t>(j)] * sinc * window;
    }
    out[i] = acc * cutoff;
  }
  return out;
}

}  // namespace hedtts
