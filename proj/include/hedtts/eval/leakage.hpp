// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hedtts/common/types.hpp"
#include "hedtts/hed/hed.hpp"

namespace hedtts::eval {

enum class ClassifierKind { RandomForest, Lasso };
std::string_view classifier_name(ClassifierKind k);  // "RF", "Lasso"

struct LeakageScores {
  double disentanglement = 0.0;
  double explicitness = 0.0;  // mean one-vs-rest held-out AUC, 0.5 == chance
};

/// Importance-based disentanglement and probe explicitness of `labels`
/// (e.g. speaker ids) from N x F features. Each class is its own one-vs-rest
/// target: the importance matrix R is F x K; per-feature score is
/// 1 - H_K(R_i / sum_k R_ik), weighted by the feature's share of the total
/// importance. A stratified 30 % split is held out for AUC. Throws
/// SingleClass for one label and InsufficientData below 5 samples per class.
LeakageScores disentanglement_explicitness(const Matrix& features, const std::vector<int>& labels,
                                           ClassifierKind kind, std::uint64_t seed = 0);

/// Disentanglement score from an F x K importance matrix.
double disentanglement_from_importance(const Matrix& importance);

struct DisentanglementReport {
  std::map<int, double> mig;  // keyed by bin count
  std::map<std::string, LeakageScores> classifiers;  // keyed by classifier_name
};

/// Full speaker-leakage evaluation of a set of HEDs: MIG over phoneme rows
/// (all 12 columns) for every bin count, then disentanglement/explicitness
/// on per-utterance HED features with both classifiers.
DisentanglementReport speaker_leakage(const std::vector<hed::HierarchicalED>& heds,
                                      const std::vector<std::string>& speakers, std::uint64_t seed = 0);

nlohmann::json disentanglement_to_json(const DisentanglementReport& report);
DisentanglementReport disentanglement_from_json(const nlohmann::json& doc);

}  // namespace hedtts::eval
