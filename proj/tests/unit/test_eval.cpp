// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"

#include "eval_oracles.hpp"
#include "hedtts/common/error.hpp"
#include "hedtts/dsp/mel.hpp"
#include "hedtts/eval/classifiers.hpp"
#include "hedtts/eval/controllability.hpp"
#include "hedtts/eval/distortion.hpp"
#include "hedtts/eval/leakage.hpp"
#include "hedtts/eval/mig.hpp"
#include "hedtts/eval/report.hpp"
#include "hedtts/eval/stats.hpp"
#include "hedtts/eval/trajectory.hpp"
#include "hedtts/eval/trends.hpp"
#include "hedtts/toy/toy_corpus.hpp"
#include "hedtts/tts/vocoder.hpp"
#include "test_util.hpp"

using namespace hedtts;
using namespace hedtts::eval;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NotFound;
}

Waveform silence(double seconds) {
  Waveform w;
  w.samples.assign(static_cast<std::size_t>(seconds * 16000), 0.0);
  return w;
}

dsp::MelSpectrogram shifted(const dsp::MelSpectrogram& m, int by) {
  dsp::MelSpectrogram out = m;
  for (Eigen::Index t = 0; t < m.frames(); ++t) out.data.col(t) = m.data.col(std::max<Eigen::Index>(0, t - by));
  return out;
}

}  // namespace

TEST_CASE("correlation and AUC helpers") {
  CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
  CHECK(pearson({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(code_of([] { pearson({1, 2, 3}, {5, 5, 5}); }) == ErrorCode::ConstantSeries);
  CHECK(code_of([] { pearson({1, 2}, {5, 5, 5}); }) == ErrorCode::LengthMismatch);
  CHECK(spearman({1, 2, 3, 4}, {1, 10, 100, 1000}) == doctest::Approx(1.0));
  CHECK(average_ranks({3, 1, 3, 2}) == std::vector<double>{3.5, 1, 3.5, 2});
  CHECK(roc_auc({0.1, 0.2, 0.8, 0.9}, {false, false, true, true}) == 1.0);
  CHECK(roc_auc({0.5, 0.5}, {false, true}) == 0.5);
  CHECK(code_of([] { roc_auc({0.5, 0.4}, {true, true}); }) == ErrorCode::SingleClass);
  const auto mi = mean_interval({1.0, 2.0, 3.0});
  CHECK(mi.mean == 2.0);
  CHECK(mi.half_width == doctest::Approx(1.96 / std::sqrt(3.0)));
}

TEST_CASE("dtw") {
  Matrix a(3, 1), b(4, 1);
  a << 0, 1, 2;
  b << 0, 1, 1, 2;
  const auto r = dtw(a, b);
  CHECK(r.total_cost == 0.0);
  CHECK(r.path.front() == std::pair{0, 0});
  CHECK(r.path.back() == std::pair{2, 3});
  CHECK(r.path.size() == 4);
  CHECK(dtw(b, b).mean_cost() == 0.0);
  CHECK(code_of([] { dtw(Matrix(0, 1), Matrix(2, 1)); }) == ErrorCode::EmptyInput);

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix x(20, 3), y(20, 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x.data()[i] = rng.normal();
      y.data()[i] = rng.normal();
    }
    CHECK(dtw(x, y).mean_cost() <= naive_frame_distance(x, y) + 1e-12);
  }
}

TEST_CASE("mel cepstral distortion") {
  const auto utts = [] {
    toy::ToyCorpusConfig cc;
    cc.speakers = 2;
    cc.utterances_per_cell = 1;
    cc.emotions = {Emotion::Neutral};
    return toy::generate_toy_corpus(cc);
  }();
  const auto a = dsp::compute_mel(utts[0].audio);
  const auto b = dsp::compute_mel(utts[1].audio);
  CHECK(mel_cepstrum(a).cols() == 13);
  CHECK(mcd(a, a) == 0.0);
  CHECK(mcd(a, b) == doctest::Approx(mcd(b, a)).epsilon(1e-12));
  CHECK(mcd(a, b) > 0.0);

  SUBCASE("warping beats truncation on a shifted mel") {
    const auto s = shifted(a, 3);
    const Matrix ca = mel_cepstrum(a), cs = mel_cepstrum(s);
    CHECK(dtw(ca, cs).mean_cost() < naive_frame_distance(ca, cs));
    CHECK(mcd(a, s) < kMcdConstant * naive_frame_distance(ca, cs));
  }
  SUBCASE("copy synthesis is closer than another utterance") {
    const auto resynth = dsp::compute_mel(tts::vocode(a));
    CHECK(mcd(a, resynth) < mcd(a, b));
  }
}

TEST_CASE("pitch and energy distortion") {
  const auto t200 = testing::sine(200.0, 0.5);
  const auto t210 = testing::sine(210.0, 0.5);
  const auto same = pitch_energy_distortion(t200, t200);
  REQUIRE(same.pitch.has_value());
  CHECK(*same.pitch == 0.0);
  CHECK(same.energy == 0.0);
  CHECK(pitch_distortion(t200, t210) == doctest::Approx(10.0).epsilon(0.1));

  const auto quiet = pitch_energy_distortion(silence(0.3), silence(0.3));
  CHECK_FALSE(quiet.pitch.has_value());
  CHECK(quiet.energy == 0.0);
  CHECK(code_of([&] { pitch_distortion(silence(0.3), silence(0.3)); }) == ErrorCode::AllUnvoiced);
  CHECK(code_of([&] { pitch_distortion(t200, silence(0.3)); }) == ErrorCode::AllUnvoiced);

  // halving the amplitude moves the normalised energy by about half the peak
  const auto louder = pitch_energy_distortion(t200, testing::sine(200.0, 0.5, 0.25));
  CHECK(louder.energy == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("speaker similarity") {
  const Vector v = Vector::LinSpaced(8, -1.0, 2.0);
  CHECK(secs(v, v) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(secs(v, -v) == doctest::Approx(-1.0).epsilon(1e-15));
  Rng rng(1);
  Vector a(64), b(64);
  for (int i = 0; i < 64; ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
  }
  b -= a.dot(b) / a.squaredNorm() * a;
  CHECK(std::abs(secs(a, b)) < 1e-6);
  CHECK(code_of([] { secs(Vector::Zero(3), Vector::Ones(3)); }) == ErrorCode::ZeroVector);
  CHECK(code_of([] { secs(Vector::Ones(2), Vector::Ones(3)); }) == ErrorCode::LengthMismatch);

  MetricAccumulator acc;
  acc.add(testing::sine(200.0, 0.5), testing::sine(200.0, 0.5), 1.0);
  acc.add(silence(0.5), silence(0.5));
  const auto rep = acc.report();
  CHECK(rep.pairs == 2);
  CHECK(rep.unvoiced_pairs == 1);
  CHECK(rep.mcd.mean == 0.0);
  CHECK(rep.secs.count == 1);
  CHECK(metric_report_to_json(rep)["pitch_distortion_hz"]["count"] == 1);
}

TEST_CASE("controllability") {
  const auto sweep = hed::default_sweep_values();
  const std::vector<Emotion> targets(kIntensityOrder.begin(), kIntensityOrder.end());
  // the rendering carries the commanded vector in its first samples
  const SweepSynth synth = [](std::size_t, Emotion target, double v) {
    Waveform w;
    w.samples.assign(4, 0.2);
    w.samples[static_cast<std::size_t>(intensity_index(target))] = v;
    return w;
  };
  const Probe oracle = [](const Waveform& w) {
    intensity::EmotionIntensity out;
    for (int e = 0; e < 4; ++e) out.values[static_cast<std::size_t>(e)] = w.samples[static_cast<std::size_t>(e)];
    return out;
  };

  SUBCASE("oracle probe is perfect") {
    const auto r = controllability_score(oracle, synth, 3, targets, sweep);
    REQUIRE(r.defined());
    CHECK(*r.positive == 1.0);
    CHECK(*r.negative == 0.0);
    CHECK(*r.score == 1.0);
    CHECK(r.pairs == 3 * 4 * 4);
    CHECK(r.skipped_pairs == 3 * 4 * 3);
    CHECK(r.correlation[2][2] == 1.0);
    CHECK(std::isnan(r.correlation[2][1]));
  }
  SUBCASE("constant probe is undefined") {
    const Probe flat = [](const Waveform&) { return intensity::EmotionIntensity{}; };
    const auto r = controllability_score(flat, synth, 2, targets, sweep);
    CHECK_FALSE(r.defined());
    CHECK(r.skipped_pairs == r.pairs);
    CHECK(controllability_to_json(r)["score"].is_null());
  }
  SUBCASE("confusion is floored and subtracted") {
    // Sad rises with Sad and with Angry; Happy falls with Sad.
    const Probe leaky = [](const Waveform& w) {
      intensity::EmotionIntensity out;
      out.values = {w.samples[0], w.samples[1], 0.5 * w.samples[2] + 0.5 * w.samples[0], w.samples[3]};
      out.values[1] -= 0.3 * w.samples[2];
      return out;
    };
    const auto r = controllability_score(leaky, synth, 1, {Emotion::Angry, Emotion::Sad}, sweep);
    REQUIRE(r.defined());
    CHECK(*r.positive == doctest::Approx(1.0));
    // Angry->Sad correlates +1, Sad->Happy -1 (floored); 2 of 2 defined off-diagonals
    CHECK(*r.negative == doctest::Approx(0.5));
    CHECK(*r.score == doctest::Approx(*r.positive - *r.negative));
  }
  SUBCASE("positive rescaling of the probe leaves the score unchanged") {
    Rng rng(5);
    SweepPredictions preds(4);
    for (auto& c : preds)
      for (std::size_t t = 0; t < targets.size(); ++t) {
        std::vector<intensity::EmotionIntensity> row(sweep.size());
        for (auto& p : row)
          for (auto& v : p.values) v = rng.uniform();
        c.push_back(row);
      }
    auto scaled = preds;
    for (auto& c : scaled)
      for (auto& row : c)
        for (auto& p : row)
          for (auto& v : p.values) v *= 3.7;
    const auto a = score_predictions(preds, targets, sweep);
    const auto b = score_predictions(scaled, targets, sweep);
    CHECK(*b.score == doctest::Approx(*a.score).epsilon(1e-12));
    CHECK(*a.negative >= 0.0);
  }
}

TEST_CASE("mutual information gap") {
  Rng rng(21);
  const int n = 10000;
  std::vector<int> speaker(n);
  Matrix codes(n, 12);
  for (int i = 0; i < n; ++i) {
    speaker[static_cast<std::size_t>(i)] = i % 10;
    codes(i, 0) = i % 10;
    for (int j = 1; j < 12; ++j) codes(i, j) = rng.uniform();
  }
  for (int bins : kMigBinCounts) {
    const double m = mig(codes, speaker, bins);
    CHECK(m >= 0.9);
    CHECK(m == doctest::Approx(testing::brute_force_mig(codes, speaker, bins)).epsilon(1e-9));
  }
  CHECK(equal_frequency_bins(Vector::LinSpaced(6, 0, 5), 3) == std::vector<int>{0, 0, 1, 1, 2, 2});
  CHECK(equal_frequency_bins(Vector::Constant(6, 1.0), 3) == std::vector<int>(6, 2));

  SUBCASE("estimator bounds") {
    for (int j = 0; j < 12; ++j) {
      const auto z = equal_frequency_bins(codes.col(j), 30);
      const double mi = mutual_information(speaker, z);
      CHECK(mi >= 0.0);
      CHECK(mi <= std::min(entropy(speaker), entropy(z)) + 1e-9);
    }
  }
  SUBCASE("errors") {
    CHECK(code_of([&] { mig(codes, std::vector<int>(n, 3), 30); }) == ErrorCode::DegenerateFactor);
    CHECK(code_of([&] { mig(codes.topRows(20), std::vector<int>(speaker.begin(), speaker.begin() + 20), 30); }) ==
          ErrorCode::InvalidArgument);
  }
}

TEST_CASE("trajectory summary") {
  SUBCASE("constant") {
    const auto s = series_statistics({0.4, 0.4, 0.4, 0.4});
    CHECK(s[0] == 0.4);
    CHECK(s[1] == 0.4);
    CHECK(s[3] == 0.4);
    CHECK(s[4] == 0.4);
    for (int k : {2, 5, 6, 7, 8, 9}) CHECK(s[static_cast<std::size_t>(k)] == 0.0);
  }
  SUBCASE("single peak") {
    const auto s = series_statistics({0.0, 1.0, 0.0});
    CHECK(s[7] == 1.0);
    CHECK(s[8] == 1.0);
    CHECK(s[6] == 0.0);
  }
  SUBCASE("short series") {
    const auto s = series_statistics({0.7});
    CHECK(s[0] == 0.7);
    CHECK(s[7] == 0.0);
    CHECK(s[9] == 0.0);
    CHECK(series_statistics({0.0, 1.0})[6] == 1.0);
  }
  SUBCASE("prominence uses the higher flanking minimum") {
    // peak 3 at index 3: left base min(1, 2) reaching the higher 5 -> 1; right base 0
    const auto s = series_statistics({5, 1, 2, 3, 0, 4});
    CHECK(s[7] == 1.0);
    CHECK(s[8] == 2.0);
  }
  SUBCASE("random series match the oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> x(1 + rng.index(40));
      for (auto& v : x) v = trial % 2 ? rng.uniform() : static_cast<double>(rng.index(4));
      const auto a = series_statistics(x);
      const auto b = testing::oracle_series_statistics(x);
      for (int k = 0; k < 10; ++k) CHECK(std::abs(a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)]) <= 1e-9);
    }
  }
  CHECK(summarize_trajectory(Matrix::Ones(3, 4)).size() == 40);
  CHECK(code_of([] { summarize_trajectory(Matrix(0, 4)); }) == ErrorCode::EmptyInput);
}

TEST_CASE("HED sample features") {
  hed::HierarchicalED h;
  h.utterance_id = "u";
  h.phones = {"A", "B", "C", "D"};
  h.word_index = {0, 0, 1, 1};
  h.matrix = Matrix::Zero(4, 12);
  h.matrix(0, 0) = 1.0;
  h.matrix.block(0, 4, 2, 1).setConstant(0.5);
  h.matrix.col(10).setConstant(0.25);
  const Vector f = hed_sample_features(h);
  CHECK(f.size() == kHedSampleFeatures);
  CHECK(f[2] == 0.25);
  CHECK(f[4] == 0.25);                  // word Angry mean over two words
  CHECK(f[4 + 40] == 0.25);             // phoneme Angry mean over four phones
  CHECK(f[4 + 40 + 3] == 1.0);          // phoneme Angry max
}

TEST_CASE("classifiers and leakage scores") {
  Rng rng(13);
  const int n = 300;
  Matrix x(n, 6);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = i % 3;
    for (int j = 0; j < 6; ++j) x(i, j) = rng.normal();
    x(i, labels[static_cast<std::size_t>(i)]) += 4.0;
  }
  std::vector<bool> y(n);
  for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(i)] == 2;

  RandomForest rf;
  rf.fit(x, y);
  CHECK(rf.importances().sum() == doctest::Approx(1.0));
  CHECK(rf.importances()[2] > 0.5);
  L1Logistic lr;
  lr.fit(x, y);
  CHECK(lr.importances()[2] > 5.0 * lr.importances().tail(3).maxCoeff());

  for (auto kind : {ClassifierKind::RandomForest, ClassifierKind::Lasso}) {
    const auto informed = disentanglement_explicitness(x, labels, kind, 1);
    CAPTURE(classifier_name(kind));
    CHECK(informed.explicitness > 0.9);
    auto permuted = labels;
    rng.shuffle(permuted);
    const auto null = disentanglement_explicitness(x, permuted, kind, 1);
    CHECK(null.explicitness == doctest::Approx(0.5).epsilon(0.3));
    CHECK(null.explicitness < informed.explicitness);
  }
  CHECK(code_of([&] { disentanglement_explicitness(x, std::vector<int>(n, 1), ClassifierKind::Lasso); }) ==
        ErrorCode::SingleClass);
  std::vector<int> sparse(n, 0);
  sparse[0] = 1;
  CHECK(code_of([&] { disentanglement_explicitness(x, sparse, ClassifierKind::Lasso); }) ==
        ErrorCode::InsufficientData);

  Matrix concentrated = Matrix::Zero(3, 3);
  concentrated.diagonal().setOnes();
  CHECK(disentanglement_from_importance(concentrated) == doctest::Approx(1.0));
  CHECK(disentanglement_from_importance(Matrix::Ones(3, 3)) == doctest::Approx(0.0));
}

TEST_CASE("speaker leakage report") {
  std::vector<hed::HierarchicalED> heds;
  std::vector<std::string> speakers;
  Rng rng(4);
  for (int u = 0; u < 200; ++u) {
    hed::HierarchicalED h;
    h.utterance_id = "u" + std::to_string(u);
    h.phones.assign(8, "AA1");
    h.word_index = {0, 0, 0, 1, 1, 2, 2, 2};
    h.matrix = Matrix::Zero(8, 12);
    for (int p = 0; p < 8; ++p)
      for (int e = 0; e < 4; ++e) h.matrix(p, e) = rng.uniform();
    for (int w = 0, p = 0; w < 3; ++w) {
      const double v = rng.uniform();
      for (; p < 8 && h.word_index[static_cast<std::size_t>(p)] == w; ++p) h.matrix(p, 4) = v;
    }
    h.matrix.col(10).setConstant(0.5);
    heds.push_back(h);
    speakers.push_back(u % 2 ? "b" : "a");
  }
  const auto report = speaker_leakage(heds, speakers);
  CHECK(report.mig.size() == 3);
  for (const auto& [bins, m] : report.mig) CHECK(m < 0.1);
  CHECK(report.classifiers.size() == 2);
  const auto doc = disentanglement_to_json(report);
  CHECK(doc["mig"].contains("30"));
  CHECK(doc["explicitness"].contains("Lasso"));
  const auto csv = leakage_table_csv({{"toy", report}});
  CHECK(csv.rfind("system,mig_30,mig_50,mig_100,", 0) == 0);
}

TEST_CASE("prosody trends") {
  const IntensitySynth louder = [](Emotion e, double v) {
    return testing::sine(e == Emotion::Happy ? 150.0 + 100.0 * v : 180.0, 0.4, 0.1 + 0.3 * v);
  };
  TrendSigns expected;
  expected[Emotion::Happy] = {0, 1, 0, 1, 0};
  expected[Emotion::Sad] = {0, 0, 0, -1, 0};
  const auto table = prosody_trend_analysis(louder, {Emotion::Happy, Emotion::Sad}, hed::default_sweep_values(),
                                            expected);
  CHECK(table.curves.at(Emotion::Happy)[0].size() == 6);
  const auto& happy = table.cells.at(Emotion::Happy);
  CHECK(*happy[1].rho == doctest::Approx(1.0));
  CHECK(happy[1].matches());
  CHECK(*happy[3].rho == doctest::Approx(1.0));
  CHECK_FALSE(happy[0].rho.has_value());  // duration is constant
  CHECK_FALSE(table.cells.at(Emotion::Sad)[3].matches());

  const IntensitySynth constant = [](Emotion, double) { return testing::sine(200.0, 0.3); };
  const auto flat = prosody_trend_analysis(constant, {Emotion::Angry}, hed::default_sweep_values());
  for (const auto& c : flat.cells.at(Emotion::Angry)) CHECK_FALSE(c.rho.has_value());

  const auto doc = trends_to_json(table);
  CHECK(doc["emotions"]["Happy"]["pitch_mean"]["matches"] == true);
  const auto csv = trend_table_csv(table);
  CHECK(csv.rfind("emotion,feature,at_0,at_0.2,", 0) == 0);
  const auto svg = trend_plot_svg(table);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("expected trends from labelled data") {
  std::vector<std::array<double, kNumProsodyFeatures>> feats;
  std::vector<Emotion> emotions;
  std::vector<double> levels;
  for (int i = 0; i < 12; ++i) {
    const double v = (i % 4) * 0.25;
    const Emotion e = i % 4 == 0 ? Emotion::Neutral : Emotion::Sad;
    feats.push_back({1.0, 100.0, 5.0, -v, 0.1});
    emotions.push_back(e);
    levels.push_back(v);
  }
  const auto signs = expected_trends(feats, emotions, levels);
  CHECK(signs.at(Emotion::Sad)[3] == -1);
  CHECK(signs.at(Emotion::Sad)[0] == 0);
  CHECK(signs.at(Emotion::Angry)[3] == 0);  // only neutral rows: intensity constant
}

TEST_CASE("report tables") {
  MetricReport m;
  m.mcd = {5.0, 0.5, 10};
  m.pairs = 10;
  const auto csv = metric_table_csv({{"a,b", m}});
  CHECK(csv.find("\"a,b\",5,0.5,") != std::string::npos);
  ControllabilityReport c;
  c.positive = 0.5;
  c.negative = 0.1;
  c.score = 0.4;
  CHECK(controllability_table_csv({{"sys", c}}).find("sys,0.5,0.1,0.4,") != std::string::npos);
}
