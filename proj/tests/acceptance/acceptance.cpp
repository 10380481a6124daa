// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks A1-A11. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails. Pass criterion ids as arguments
// to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eval_oracles.hpp"
#include "grad_check.hpp"
#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/dsp/mel.hpp"
#include "hedtts/eval/controllability.hpp"
#include "hedtts/eval/distortion.hpp"
#include "hedtts/eval/mig.hpp"
#include "hedtts/eval/trajectory.hpp"
#include "hedtts/hed/hed.hpp"
#include "hedtts/intensity/calibration.hpp"
#include "hedtts/intensity/train.hpp"
#include "hedtts/nn/layers.hpp"
#include "hedtts/service/cli.hpp"
#include "hedtts/service/manifest.hpp"
#include "hedtts/service/pipeline.hpp"
#include "hedtts/toy/toy_corpus.hpp"
#include "hedtts/tts/flow.hpp"
#include "hedtts/tts/speaker.hpp"
#include "hedtts/tts/synthesize.hpp"
#include "hedtts/tts/train.hpp"
#include "hedtts/tts/vocoder.hpp"
#include "synthetic_segments.hpp"
#include "test_util.hpp"

using namespace hedtts;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Accumulates sub-checks; the first failures are kept for the report line.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& s) { info_ += (info_.empty() ? "" : ", ") + s; }
  Outcome outcome() const {
    if (failures_ == 0) return {true, info_};
    return {false, std::to_string(failures_) + " failed: " + notes_ + (info_.empty() ? "" : " | " + info_)};
  }

 private:
  int failures_ = 0;
  std::string notes_, info_;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

Matrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

// A1: tempered softmax properties over 10 000 randomized cases.
Outcome a1() {
  Checks c;
  Rng rng(2026);
  double worst_sum = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int k = 2 + static_cast<int>(rng.index(7));
    Vector z(k);
    for (int i = 0; i < k; ++i) z(i) = rng.normal(0.0, 4.0);
    const double alpha = 1.0 + 1e-3 + rng.uniform(0.0, 4.0);
    const Vector p = intensity::tempered_softmax(z, alpha);
    worst_sum = std::max(worst_sum, std::abs(p.sum() - 1.0));
    c.expect(std::abs(p.sum() - 1.0) <= 1e-9, "sum");
    c.expect((p.array() >= 0.0).all(), "non-negative");
    const Vector uniform = Vector::Constant(k, 1.0 / k);
    c.expect((intensity::tempered_softmax(z, 1.0) - uniform).cwiseAbs().maxCoeff() <= 1e-12, "uniform at alpha 1");
    c.expect((intensity::tempered_softmax(Vector::Constant(k, z(0)), alpha) - uniform).cwiseAbs().maxCoeff() <= 1e-12,
             "uniform at symmetric logits");
    const double shift = rng.normal(0.0, 10.0);
    c.expect((intensity::tempered_softmax((z.array() + shift).matrix(), alpha) - p).cwiseAbs().maxCoeff() <= 1e-9,
             "shift invariance");
    Eigen::Index az = 0, ap = 0;
    z.maxCoeff(&az);
    p.maxCoeff(&ap);
    c.expect(az == ap, "argmax invariance");
  }
  c.note("max |sum-1| " + fmt(worst_sum, 3));
  return c.outcome();
}

// A2: alpha selection recovers 1.5 from logits built by inverting the
// alpha = 1.5 softmax against a uniform intensity histogram.
Outcome a2() {
  Checks c;
  const int n = 1000;
  Matrix epr = Matrix::Zero(n, 8);
  for (int i = 0; i < n; ++i) {
    const double p = (i + 0.5) / n;
    for (int e = 0; e < 4; ++e) epr(i, 2 * e + 1) = std::log(p / (1.0 - p)) / std::log(1.5);
  }
  const auto sel = intensity::select_alpha(epr, intensity::HeadType::EPR);
  c.expect(sel.alpha == 1.5, "EPR alpha " + fmt(sel.alpha));
  c.expect(sel.grid.size() == 20 && sel.grid.front() == 1.1 && sel.grid.back() == 3.0, "grid");
  c.note("selected " + fmt(sel.alpha));
  return c.outcome();
}

// A3: extractor gradients through the reversal layer equal -0.5 x the plain
// adversary gradients, checked against central differences.
Outcome a3() {
  Checks c;
  Rng rng(3);
  intensity::IntensityModelConfig cfg;
  cfg.input_dim = 4;
  cfg.hidden_dim = 5;
  cfg.adversary_classes = 3;
  intensity::IntensityModel m(cfg, rng);
  const Matrix x = gaussian(6, 4, rng);
  const std::vector<int> labels{0, 1, 2, 1, 0, 2};
  auto adv_loss = [&](nn::Tape& t, bool reverse) {
    nn::Var pooled = m.extract(t.constant(x));
    return nn::cross_entropy(m.adversary_logits(reverse ? nn::grl(pooled, 0.5) : pooled), labels);
  };
  const auto params = m.extractor_parameters();
  nn::zero_grad(params);
  {
    nn::Tape t;
    t.backward(adv_loss(t, true));
  }
  std::vector<Matrix> reversed;
  for (auto* p : params) reversed.push_back(p->grad);
  double worst = 0.0;
  const double h = 1e-6;
  for (std::size_t k = 0; k < params.size(); ++k)
    for (Eigen::Index i = 0; i < params[k]->value.size(); ++i) {
      const double saved = params[k]->value(i);
      params[k]->value(i) = saved + h;
      nn::Tape a;
      const double up = adv_loss(a, false).scalar();
      params[k]->value(i) = saved - h;
      nn::Tape b;
      const double down = adv_loss(b, false).scalar();
      params[k]->value(i) = saved;
      const double expected = -0.5 * (up - down) / (2 * h);
      const double err = std::abs(reversed[k](i) - expected) / std::max(std::abs(expected), 1e-6);
      worst = std::max(worst, err);
    }
  c.expect(worst <= 1e-5, "relative error " + fmt(worst, 3));
  c.note("max relative error " + fmt(worst, 3));
  return c.outcome();
}

// A4: 4 emotions, 10 pseudo-speakers, 2000 segments with a speaker
// nuisance dimension; GRL on.
Outcome a4() {
  Checks c;
  const auto data = testing::make_synthetic_segments(2000, 64, 10, true, 7);
  intensity::IntensityModelConfig cfg;
  cfg.input_dim = 64;
  cfg.hidden_dim = 256;
  cfg.head_type = intensity::HeadType::SER;
  cfg.adversary_classes = 10;
  cfg.grl_enabled = true;
  intensity::TrainConfig opt;
  opt.epochs = 60;
  opt.patience = 60;
  opt.seed = 1;
  const auto r = intensity::train_intensity_model(data.train, data.val, cfg, opt);
  c.expect(r.report.val_accuracy >= 0.95, "val accuracy " + fmt(r.report.val_accuracy));
  c.expect(std::abs(r.report.adversary_accuracy - 0.10) <= 0.10, "adversary accuracy " + fmt(r.report.adversary_accuracy));
  c.note("val acc " + fmt(r.report.val_accuracy) + ", adversary acc " + fmt(r.report.adversary_accuracy));
  return c.outcome();
}

hed::HierarchicalED random_hed(Rng& rng, int phones, int words) {
  corpus::AlignmentTrack track;
  track.utterance_id = "fuzz";
  for (int w = 0; w < words; ++w) track.words.push_back({"w" + std::to_string(w), 0.0, 0.0});
  double t = 0.0;
  for (int p = 0; p < phones; ++p) {
    const int w = std::min(words - 1, p * words / phones);
    track.phones.push_back({rng.uniform() < 0.15 ? "SP" : "AA1", t, t + 0.05, w});
    auto& word = track.words[static_cast<std::size_t>(w)];
    if (word.end == 0.0) word.start = t;
    word.end = t + 0.05;
    t += 0.05;
  }
  Matrix pe(phones, 4), we(words, 4);
  for (Eigen::Index i = 0; i < pe.size(); ++i) pe(i) = rng.uniform();
  for (Eigen::Index i = 0; i < we.size(); ++i) we(i) = rng.uniform();
  Vector ue(4);
  for (int i = 0; i < 4; ++i) ue(i) = rng.uniform();
  return hed::assemble_hed(track, pe, we, ue);
}

/// Independent block-consistency check straight from the matrix.
bool blocks_consistent(const hed::HierarchicalED& h) {
  for (Eigen::Index r = 0; r < h.matrix.rows(); ++r)
    for (int e = 0; e < 4; ++e) {
      if (h.matrix(r, 8 + e) != h.matrix(0, 8 + e)) return false;
      for (Eigen::Index q = 0; q < h.matrix.rows(); ++q)
        if (h.word_index[static_cast<std::size_t>(q)] == h.word_index[static_cast<std::size_t>(r)] &&
            h.matrix(q, 4 + e) != h.matrix(r, 4 + e))
          return false;
    }
  return (h.matrix.array() >= 0.0).all() && (h.matrix.array() <= 1.0).all();
}

// A5: HED structure under fuzzed edits.
Outcome a5() {
  Checks c;
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int phones = 1 + static_cast<int>(rng.index(40));
    const int words = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(std::min(phones, 8))));
    const auto h = random_hed(rng, phones, words);
    c.expect(h.matrix.rows() == phones && h.num_phones() == phones, "row count");
    c.expect(blocks_consistent(h), "block consistency (assembled)");

    hed::EDEdit e;
    e.level = kAllLevels[rng.index(3)];
    const int limit = e.level == Level::Phoneme ? phones : words;
    e.begin = static_cast<int>(rng.index(static_cast<std::uint64_t>(limit)));
    e.end = e.begin + 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(limit - e.begin)));
    e.emotion = static_cast<int>(rng.index(4));
    e.mode = hed::EditMode::Set;
    e.value = rng.uniform();
    const auto once = hed::apply_edit(h, e);
    c.expect(blocks_consistent(once), "block consistency (edited)");
    c.expect(once.matrix.rows() == phones, "row count (edited)");
    c.expect(hed::apply_edit(once, e).matrix == once.matrix, "set idempotence");

    // locality: only the addressed column of addressed rows may change
    const int col = hed::hed_column(e.level, e.emotion);
    for (int r = 0; r < phones; ++r) {
      const int wi = h.word_index[static_cast<std::size_t>(r)];
      bool addressed = e.level == Level::Utterance;
      if (e.level == Level::Word) addressed = wi >= e.begin && wi < e.end;
      if (e.level == Level::Phoneme) addressed = r >= e.begin && r < e.end;
      for (int k = 0; k < hed::kHedColumns; ++k)
        if (k != col || !addressed) c.expect(once.matrix(r, k) == h.matrix(r, k), "edit locality");
    }
    c.expect(hed::deserialize_hed(hed::serialize_hed(once)) == once, "serialize round trip");
    c.expect(hed::deserialize_hed(hed::serialize_hed(h)) == h, "serialize round trip (assembled)");
  }
  c.note("1000 cases");
  return c.outcome();
}

std::vector<tts::TtsExample> toy_examples(const toy::ToyCorpusConfig& cc) {
  const auto inventory = tts::PhoneInventory::arpabet();
  std::vector<tts::TtsExample> out;
  for (const auto& u : toy::generate_toy_corpus(cc))
    out.push_back(tts::make_example(inventory, u.alignment, u.audio, toy::toy_hed_matrix(u),
                                    tts::pseudo_utterance_embedding(u.speaker_id, u.id), u.speaker_id));
  return out;
}

// A6: OT path endpoints, decoder gradient, 200-step toy training.
Outcome a6() {
  Checks c;
  Rng rng(6);
  const Matrix x0 = gaussian(9, 5, rng);
  const Matrix x1 = gaussian(9, 5, rng);
  const double sigma = 1e-4;
  c.expect(tts::ot_path(x0, x1, 0.0, sigma) == x0, "x_t at t=0");
  c.expect(tts::ot_path(x0, x1, 1.0, 0.0) == x1, "x_t at t=1, sigma 0");
  // at t = 1 the residual noise weight is 1 - (1 - sigma) in floating point
  c.expect(tts::ot_path(x0, x1, 1.0, sigma) == Matrix((1.0 - (1.0 - sigma)) * x0 + x1), "x_t at t=1");

  tts::DecoderConfig dc;
  dc.mel_dim = 2;
  dc.width = 3;
  dc.time_dim = 4;
  const tts::FlowDecoder decoder(dc, rng);
  nn::ParameterList params;
  decoder.collect(params);
  const Matrix a = gaussian(7, 2, rng), b = gaussian(7, 2, rng), mu = gaussian(7, 2, rng);
  const double grad_err = testing::max_grad_error(
      params, [&](nn::Tape& tape) { return tts::cfm_loss(decoder, b, tape.constant(mu), 0.37, a, sigma); },
      1e-5);  // h = 1e-6 is roundoff-bound on the smallest entries
  c.expect(nn::parameter_count(params) <= 1000, "decoder has " + std::to_string(nn::parameter_count(params)) + " params");
  c.expect(grad_err <= 1e-4, "decoder gradient error " + fmt(grad_err, 3));

  toy::ToyCorpusConfig cc;
  cc.speakers = 1;
  cc.utterances_per_cell = 1;
  const auto examples = toy_examples(cc);
  Rng init(1);
  tts::AcousticModel model(tts::AcousticConfig::toy(), tts::PhoneInventory::arpabet(), init);
  tts::TtsTrainConfig tc;
  tc.steps = 200;
  const auto rep = tts::train_acoustic_model(model, examples, tc);
  const double first = rep.steps.front().cfm_loss;
  const double last = rep.mean_cfm(180, 200);
  c.expect(last <= 0.5 * first, "CFM loss " + fmt(first) + " -> " + fmt(last));
  c.note(std::to_string(nn::parameter_count(params)) + " params, grad err " + fmt(grad_err, 3) + ", CFM " + fmt(first) +
         " -> " + fmt(last) + " (last 20 steps)");
  return c.outcome();
}

// A7: oracle probe, then an end-to-end toy model whose Sad cue is a mean
// log-energy shift, probed by an utterance-level SER model.
Outcome a7() {
  Checks c;
  const auto sweep = hed::default_sweep_values();
  const std::vector<Emotion> targets(kIntensityOrder.begin(), kIntensityOrder.end());
  const eval::SweepSynth carrier = [](std::size_t, Emotion target, double v) {
    Waveform w;
    w.samples.assign(4, 0.3);
    w.samples[static_cast<std::size_t>(intensity_index(target))] = v;
    return w;
  };
  const eval::Probe oracle = [](const Waveform& w) {
    intensity::EmotionIntensity out;
    for (int e = 0; e < 4; ++e) out.values[static_cast<std::size_t>(e)] = w.samples[static_cast<std::size_t>(e)];
    return out;
  };
  const auto exact = eval::controllability_score(oracle, carrier, 4, targets, sweep);
  c.expect(exact.defined() && *exact.positive == 1.0 && *exact.negative == 0.0 && *exact.score == 1.0,
           "oracle probe not exact");

  // acoustic model on Neutral and Sad toy speech
  toy::ToyCorpusConfig tc;
  tc.speakers = 2;
  tc.utterances_per_cell = 4;
  tc.emotions = {Emotion::Neutral, Emotion::Sad};
  Rng init(1);
  tts::AcousticModel model(tts::AcousticConfig::toy(), tts::PhoneInventory::arpabet(), init);
  tts::TtsTrainConfig train;
  train.steps = 1500;
  tts::train_acoustic_model(model, toy_examples(tc), train);

  // probe: utterance-level SER on functionals of copy-synthesised toy speech
  toy::ToyCorpusConfig pc;
  pc.speakers = 4;
  pc.utterances_per_cell = 6;
  pc.seed = 7;
  std::vector<intensity::SegmentSample> tr, va;
  int k = 0;
  for (const auto& u : toy::generate_toy_corpus(pc)) {
    intensity::SegmentSample s;
    s.frames = service::utterance_functionals(tts::vocode(dsp::compute_mel(u.audio)));
    s.emotion = u.emotion;
    s.level = Level::Utterance;
    s.adversary_class = u.speaker_id.back() - '1';
    s.utterance_id = u.id;
    (k++ % 5 == 0 ? va : tr).push_back(std::move(s));
  }
  intensity::IntensityModelConfig mc;
  mc.head_type = intensity::HeadType::SER;
  mc.hidden_dim = 64;
  mc.grl_enabled = false;
  mc.adversary_classes = 4;
  intensity::TrainConfig topt;
  topt.epochs = 200;
  topt.batch_size = 16;
  topt.stabilization_epochs = 20;
  const auto probe_model = intensity::train_intensity_model(tr, va, mc, topt).model;

  toy::ToyCorpusConfig cases_cfg;
  cases_cfg.speakers = 2;
  cases_cfg.utterances_per_cell = 3;
  cases_cfg.emotions = {Emotion::Neutral};
  cases_cfg.seed = 11;
  std::vector<tts::SynthesisRequest> cases;
  for (const auto& u : toy::generate_toy_corpus(cases_cfg)) {
    tts::SynthesisRequest r;
    r.phonemes = tts::phonemes_from_alignment(u.alignment);
    r.hed = tts::neutral_hed(r.phonemes, u.id);
    r.speaker_embedding = tts::pseudo_speaker_embedding(u.speaker_id);
    r.seed = 3;
    cases.push_back(std::move(r));
  }
  const auto rep = service::model_controllability(model, service::functional_probe(probe_model), cases,
                                                  {Emotion::Sad}, sweep);
  c.expect(rep.defined() && *rep.score > 0.2, "end-to-end score " + (rep.score ? fmt(*rep.score) : "undefined"));
  if (rep.defined())
    c.note("oracle S=1; toy P " + fmt(*rep.positive) + " N " + fmt(*rep.negative) + " S " + fmt(*rep.score));
  return c.outcome();
}

// A8: MIG on constructed codes and against the brute-force oracle.
Outcome a8() {
  Checks c;
  Rng rng(8);
  const int n = 10000;
  std::vector<int> speaker(n);
  Matrix deterministic(n, 12), independent(n, 12);
  for (int i = 0; i < n; ++i) {
    speaker[static_cast<std::size_t>(i)] = static_cast<int>(rng.index(10));
    for (int j = 0; j < 12; ++j) {
      deterministic(i, j) = rng.uniform();
      independent(i, j) = rng.uniform();
    }
    deterministic(i, 3) = speaker[static_cast<std::size_t>(i)] + 0.01 * rng.uniform();
  }
  double worst_gap = 0.0, min_det = 1.0, max_ind = 0.0;
  for (int bins : eval::kMigBinCounts) {
    const double d = eval::mig(deterministic, speaker, bins);
    const double u = eval::mig(independent, speaker, bins);
    min_det = std::min(min_det, d);
    max_ind = std::max(max_ind, u);
    c.expect(d >= 0.9, "deterministic MIG " + fmt(d) + " at " + std::to_string(bins) + " bins");
    c.expect(u <= 0.05, "independent MIG " + fmt(u) + " at " + std::to_string(bins) + " bins");
    worst_gap = std::max({worst_gap, std::abs(d - testing::brute_force_mig(deterministic, speaker, bins)),
                          std::abs(u - testing::brute_force_mig(independent, speaker, bins))});
  }
  c.expect(worst_gap <= 1e-3, "oracle gap " + fmt(worst_gap, 3));
  c.note("deterministic >= " + fmt(min_det) + ", independent <= " + fmt(max_ind) + ", oracle gap " + fmt(worst_gap, 3));
  return c.outcome();
}

// A9: trajectory summary against a second implementation plus hand cases.
Outcome a9() {
  Checks c;
  Rng rng(9);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> x(1 + rng.index(60));
    for (auto& v : x) v = trial % 3 == 0 ? static_cast<double>(rng.index(5)) / 4.0 : rng.uniform();
    const auto a = eval::series_statistics(x);
    const auto b = testing::oracle_series_statistics(x);
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  }
  c.expect(worst <= 1e-9, "oracle difference " + fmt(worst, 3));

  const auto flat = eval::series_statistics({0.25, 0.25, 0.25});
  c.expect(flat[0] == 0.25 && flat[1] == 0.25 && flat[2] == 0.0 && flat[3] == 0.25 && flat[4] == 0.25 &&
               flat[5] == 0.0 && flat[6] == 0.0 && flat[7] == 0.0 && flat[8] == 0.0 && flat[9] == 0.0,
           "constant series");
  const auto ramp = eval::series_statistics({0.0, 1.0, 2.0, 3.0});
  c.expect(ramp[0] == 1.5 && ramp[1] == 1.5 && ramp[3] == 3.0 && ramp[4] == 0.0 && ramp[5] == 1.5 && ramp[6] == 1.0 &&
               ramp[7] == 0.0,
           "ramp");
  const auto peak = eval::series_statistics({0.0, 1.0, 0.0});
  c.expect(peak[7] == 1.0 && peak[8] == 1.0 && peak[6] == 0.0, "single peak");
  const auto two = eval::series_statistics({5, 1, 2, 3, 0, 4});
  c.expect(two[7] == 1.0 && two[8] == 2.0, "prominence");
  c.note("max oracle difference " + fmt(worst, 3));
  return c.outcome();
}

// A10: distortion metric identities.
Outcome a10() {
  Checks c;
  const auto voice = testing::sine(200.0, 0.6);
  const auto mel = dsp::compute_mel(voice);
  c.expect(eval::mcd(mel, mel) == 0.0, "mcd(a, a)");
  Rng rng(10);
  Vector v(256);
  for (int i = 0; i < v.size(); ++i) v(i) = rng.normal();
  c.expect(std::abs(eval::secs(v, v) - 1.0) <= 1e-12, "secs(v, v)");
  const double pd = eval::pitch_distortion(voice, testing::sine(210.0, 0.6));
  c.expect(std::abs(pd - 10.0) <= 1.0, "pitch distortion " + fmt(pd));
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index frames = 10 + static_cast<Eigen::Index>(rng.index(20));
    const Matrix a = gaussian(frames, 13, rng);
    const Eigen::Index shift = 1 + static_cast<Eigen::Index>(rng.index(4));
    Matrix b(frames, 13);
    for (Eigen::Index i = 0; i < frames; ++i) b.row(i) = a.row(std::max<Eigen::Index>(0, i - shift));
    b += 0.1 * gaussian(frames, 13, rng);
    c.expect(eval::dtw(a, b).mean_cost() <= eval::naive_frame_distance(a, b) + 1e-12, "dtw above naive");
    const Matrix noise = gaussian(frames, 13, rng);
    c.expect(eval::dtw(a, noise).mean_cost() <= eval::naive_frame_distance(a, noise) + 1e-12, "dtw above naive");
  }
  c.note("pitch 200 vs 210 Hz = " + fmt(pd));
  return c.outcome();
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hedtts");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = service::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

// A11: training and synthesis commands are bit-reproducible.
Outcome a11() {
  Checks c;
  testing::TempDir dir;
  const fs::path root = dir / "toy";
  c.expect(cli({"make-toy", "--out", root.string(), "--speakers", "2", "--per-cell", "3", "--seed", "4"}) == 0, "make-toy");
  auto config = nlohmann::json::parse(read_file(root / "config.json"));
  config["extractor"] = {{"epochs", 8}, {"stabilization_epochs", 5}, {"hidden_dim", 32}};
  config["tts"] = {{"steps", 40}};
  write_file(root / "config.json", config.dump());
  const std::string cfg = (root / "config.json").string();

  std::vector<std::string> hashes;
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("run" + std::to_string(run));
    c.expect(cli({"train-extractor", "--config", cfg, "--levels", "utterance", "--out", (out / "ex.bin").string()}) == 0,
             "train-extractor");
    c.expect(cli({"train-tts", "--config", cfg, "--out", (out / "ac.bin").string()}) == 0, "train-tts");
    c.expect(cli({"synthesize", "--config", cfg, "--model", (out / "ac.bin").string(), "--utterance",
                  "spk01_sad_001", "--out", (out / "s.wav").string()}) == 0,
             "synthesize");
    std::string h;
    for (const char* f : {"ex.bin", "ac.bin", "s.wav", "s.mel.fmat"})
      h += fs::exists(out / f) ? service::file_hash(out / f) + " " : std::string("missing ");
    hashes.push_back(h);
  }
  c.expect(hashes[0] == hashes[1], "hashes differ: " + hashes[0] + "vs " + hashes[1]);
  c.note("train-extractor, train-tts, synthesize hashes equal across runs");
  return c.outcome();
}

struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;  // 0 when the criterion has no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"A1", "tempered softmax suite", 5.0, a1},
      {"A2", "alpha calibration", 30.0, a2},
      {"A3", "gradient reversal", 0.0, a3},
      {"A4", "intensity training with GRL", 300.0, a4},
      {"A5", "HED structural fuzz", 0.0, a5},
      {"A6", "OT-CFM endpoints, gradient, training", 0.0, a6},
      {"A7", "controllability", 600.0, a7},
      {"A8", "MIG", 0.0, a8},
      {"A9", "trajectory summary", 0.0, a9},
      {"A10", "distortion metrics", 0.0, a10},
      {"A11", "bit reproducibility", 0.0, a11},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& cr : criteria) {
    if (!only.empty() && !only.count(cr.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_seconds > 0.0 && secs >= cr.budget_seconds) {
      o.pass = false;
      o.detail += " | over the " + fmt(cr.budget_seconds) + " s budget";
    }
    std::printf("%-4s %s  %s (%.1f s): %s\n", cr.id, o.pass ? "PASS" : "FAIL", cr.title, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
