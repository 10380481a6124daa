// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace hedtts {

/// Band-limited resampling with a Hann-windowed sinc kernel (16 zero
/// crossings each side, cutoff at the lower Nyquist).
std::vector<double> resample(const std::vector<double>& input, int from_rate, int to_rate);

}  // namespace hedtts
