// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>

#include "hedtts/eval/controllability.hpp"
#include "hedtts/eval/distortion.hpp"
#include "hedtts/eval/leakage.hpp"
#include "hedtts/eval/trends.hpp"

namespace hedtts::eval {

// CSV tables keyed by system name, one row per system.
std::string metric_table_csv(const std::map<std::string, MetricReport>& systems);
std::string controllability_table_csv(const std::map<std::string, ControllabilityReport>& systems);
std::string leakage_table_csv(const std::map<std::string, DisentanglementReport>& systems);

/// One row per (emotion, feature): the sweep values, Spearman, expected sign.
std::string trend_table_csv(const TrendTable& table);

/// Small-multiple line plots (rows = emotions, columns = features) of each
/// feature against commanded intensity, as a standalone SVG document.
std::string trend_plot_svg(const TrendTable& table);

}  // namespace hedtts::eval
