// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/eval/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hedtts/common/error.hpp"
#include "hedtts/common/rng.hpp"
#include "hedtts/eval/classifiers.hpp"
#include "hedtts/eval/mig.hpp"
#include "hedtts/eval/stats.hpp"
#include "hedtts/eval/trajectory.hpp"

namespace hedtts::eval {

std::string_view classifier_name(ClassifierKind k) { return k == ClassifierKind::RandomForest ? "RF" : "Lasso"; }

double disentanglement_from_importance(const Matrix& importance) {
  const Eigen::Index k = importance.cols();
  require(k >= 2, ErrorCode::SingleClass, "disentanglement needs at least two classes");
  const double total = importance.sum();
  if (total <= 0.0) return 0.0;
  double score = 0.0;
  for (Eigen::Index i = 0; i < importance.rows(); ++i) {
    const double row = importance.row(i).sum();
    if (row <= 0.0) continue;
    double h = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double p = importance(i, j) / row;
      if (p > 0.0) h -= p * std::log(p) / std::log(static_cast<double>(k));
    }
    score += row / total * (1.0 - h);
  }
  return score;
}

LeakageScores disentanglement_explicitness(const Matrix& features, const std::vector<int>& labels,
                                           ClassifierKind kind, std::uint64_t seed) {
  require(static_cast<std::size_t>(features.rows()) == labels.size(), ErrorCode::LengthMismatch,
          "features and labels differ in length");
  const std::set<int> classes(labels.begin(), labels.end());
  if (classes.size() < 2) fail(ErrorCode::SingleClass, "labels have a single class");

  Rng rng(seed);
  std::vector<int> train, test;
  for (int c : classes) {
    std::vector<int> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) members.push_back(static_cast<int>(i));
    require(members.size() >= 5, ErrorCode::InsufficientData,
            "class " + std::to_string(c) + " has fewer than 5 samples");
    rng.shuffle(members);
    const std::size_t held = std::max<std::size_t>(1, (members.size() * 3 + 5) / 10);
    test.insert(test.end(), members.begin(), members.begin() + static_cast<long>(held));
    train.insert(train.end(), members.begin() + static_cast<long>(held), members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  Matrix xtr(static_cast<Eigen::Index>(train.size()), features.cols());
  for (std::size_t i = 0; i < train.size(); ++i) xtr.row(static_cast<Eigen::Index>(i)) = features.row(train[i]);

  Matrix importance(features.cols(), static_cast<Eigen::Index>(classes.size()));
  double auc_sum = 0.0;
  Eigen::Index k = 0;
  for (int c : classes) {
    std::vector<bool> ytr, yte;
    for (int i : train) ytr.push_back(labels[static_cast<std::size_t>(i)] == c);
    for (int i : test) yte.push_back(labels[static_cast<std::size_t>(i)] == c);
    std::vector<double> scores;
    if (kind == ClassifierKind::RandomForest) {
      RandomForest rf;
      ForestConfig fc;
      fc.seed = rng.next_u64();
      rf.fit(xtr, ytr, fc);
      importance.col(k) = rf.importances();
      for (int i : test) scores.push_back(rf.predict_proba(features.row(i)));
    } else {
      L1Logistic lr;
      lr.fit(xtr, ytr);
      importance.col(k) = lr.importances();
      for (int i : test) scores.push_back(lr.predict_proba(features.row(i)));
    }
    auc_sum += roc_auc(scores, yte);
    ++k;
  }
  return {disentanglement_from_importance(importance), auc_sum / static_cast<double>(classes.size())};
}

DisentanglementReport speaker_leakage(const std::vector<hed::HierarchicalED>& heds,
                                      const std::vector<std::string>& speakers, std::uint64_t seed) {
  require(heds.size() == speakers.size(), ErrorCode::LengthMismatch, "one speaker label per HED required");
  require(!heds.empty(), ErrorCode::EmptyInput, "no HEDs");
  std::vector<std::string> names(speakers);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  auto label_of = [&](const std::string& s) {
    return static_cast<int>(std::lower_bound(names.begin(), names.end(), s) - names.begin());
  };

  Eigen::Index rows = 0;
  for (const auto& h : heds) rows += h.matrix.rows();
  Matrix codes(rows, 12);
  std::vector<int> row_labels;
  Eigen::Index r = 0;
  for (std::size_t u = 0; u < heds.size(); ++u) {
    codes.middleRows(r, heds[u].matrix.rows()) = heds[u].matrix;
    r += heds[u].matrix.rows();
    row_labels.insert(row_labels.end(), static_cast<std::size_t>(heds[u].matrix.rows()), label_of(speakers[u]));
  }
  DisentanglementReport report;
  for (int bins : kMigBinCounts)
    if (codes.rows() >= bins) report.mig[bins] = mig(codes, row_labels, bins);

  Matrix features(static_cast<Eigen::Index>(heds.size()), kHedSampleFeatures);
  std::vector<int> labels;
  for (std::size_t u = 0; u < heds.size(); ++u) {
    features.row(static_cast<Eigen::Index>(u)) = hed_sample_features(heds[u]).transpose();
    labels.push_back(label_of(speakers[u]));
  }
  for (ClassifierKind kind : {ClassifierKind::RandomForest, ClassifierKind::Lasso})
    report.classifiers[std::string(classifier_name(kind))] = disentanglement_explicitness(features, labels, kind, seed);
  return report;
}

nlohmann::json disentanglement_to_json(const DisentanglementReport& report) {
  nlohmann::json mig = nlohmann::json::object();
  for (const auto& [bins, v] : report.mig) mig[std::to_string(bins)] = v;
  nlohmann::json dis = nlohmann::json::object(), expl = nlohmann::json::object();
  for (const auto& [name, s] : report.classifiers) {
    dis[name] = s.disentanglement;
    expl[name] = s.explicitness;
  }
  return {{"mig", mig}, {"disentanglement", dis}, {"explicitness", expl}};
}

DisentanglementReport disentanglement_from_json(const nlohmann::json& doc) {
  DisentanglementReport r;
  for (const auto& [bins, v] : doc.at("mig").items()) r.mig[std::stoi(bins)] = v.get<double>();
  for (const auto& [name, v] : doc.at("disentanglement").items()) {
    r.classifiers[name].disentanglement = v.get<double>();
    r.classifiers[name].explicitness = doc.at("explicitness").at(name).get<double>();
  }
  return r;
}

}  // namespace hedtts::eval
