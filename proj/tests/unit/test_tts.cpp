// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"

#include "grad_check.hpp"
#include "hedtts/common/error.hpp"
#include "hedtts/dsp/mel.hpp"
#include "hedtts/toy/toy_corpus.hpp"
#include "hedtts/tts/flow.hpp"
#include "hedtts/tts/speaker.hpp"
#include "hedtts/tts/synthesize.hpp"
#include "hedtts/tts/train.hpp"
#include "test_util.hpp"

using namespace hedtts;
using namespace hedtts::tts;

namespace {

AcousticConfig tiny_config() {
  AcousticConfig c = AcousticConfig::toy();
  c.encoder.dim = 16;
  c.encoder.ffn_dim = 32;
  c.duration_hidden = 16;
  c.decoder.width = 8;
  c.decoder.time_dim = 8;
  c.speaker_dim = 8;
  return c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NotFound;
}

double pearson(const Vector& a, const Vector& b) {
  const Vector x = a.array() - a.mean();
  const Vector y = b.array() - b.mean();
  return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

std::vector<TtsExample> toy_examples(int speakers, int per_cell, const PhoneInventory& inv, int speaker_dim) {
  toy::ToyCorpusConfig cc;
  cc.speakers = speakers;
  cc.utterances_per_cell = per_cell;
  cc.emotions = {Emotion::Neutral, Emotion::Sad};
  std::vector<TtsExample> out;
  for (const auto& u : toy::generate_toy_corpus(cc))
    out.push_back(make_example(inv, u.alignment, u.audio, toy::toy_hed_matrix(u),
                               pseudo_utterance_embedding(u.speaker_id, u.id, speaker_dim), u.speaker_id));
  return out;
}

}  // namespace

TEST_CASE("phone inventory and lexicon") {
  const auto inv = PhoneInventory::arpabet();
  CHECK(inv.size() == 2 + 15 * 3 + 24 + 1);
  CHECK(inv.id("SIL") == 1);
  CHECK(code_of([&] { inv.id("QQ"); }) == ErrorCode::UnknownSymbol);

  const auto lex = Lexicon::builtin();
  const auto seq = text_to_phonemes("The cat, sat!", lex);
  CHECK(seq.symbols == std::vector<std::string>{"DH", "AH0", "K", "AE1", "T", "S", "AE1", "T"});
  CHECK(seq.word_index == std::vector<int>{0, 0, 1, 1, 1, 2, 2, 2});
  CHECK(seq.words.size() == 3);
  CHECK(lex.pronounce("zot") == std::vector<std::string>{"Z", "AA1", "T"});
  CHECK(code_of([&] { text_to_phonemes("  ,. ", lex); }) == ErrorCode::EmptyInput);

  testing::TempDir dir;
  write_file(dir / "dict.txt", ";;; comment\nFOO  F UW1\nbar b aa1 r\n");
  const auto loaded = Lexicon::load(dir / "dict.txt");
  CHECK(loaded.pronounce("foo") == std::vector<std::string>{"F", "UW1"});
  CHECK(loaded.pronounce("BAR") == std::vector<std::string>{"B", "AA1", "R"});
}

TEST_CASE("text encoder") {
  Rng rng(5);
  const auto inv = PhoneInventory::arpabet();
  const AcousticModel model(tiny_config(), inv, rng);
  const auto ids = inv.encode({"DH", "AH0", "K", "AE1", "T", "S", "AE1", "T", "SP"});
  nn::Tape tape;
  const Matrix a = model.encode_text(tape, ids).value();
  CHECK(a.rows() == 9);
  CHECK(a.cols() == 16);
  CHECK(a.allFinite());
  CHECK(model.encode_text(tape, ids).value() == a);
  auto swapped = ids;
  std::swap(swapped[0], swapped[1]);
  const Matrix b = model.encode_text(tape, swapped).value();
  // same multiset of symbols, different positions
  CHECK((a.row(0) - b.row(1)).norm() > 1e-6);
  CHECK(code_of([&] { model.encode_text(tape, {}); }) == ErrorCode::EmptyInput);
}

TEST_CASE("durations and expansion") {
  CHECK(corpus::seconds_to_frames(0.096) == 6);
  CHECK(expand_index({2, 3}) == std::vector<int>{0, 0, 1, 1, 1});
  Matrix logs(4, 1);
  logs << -50.0, 0.0, std::log(6.2), 2.0;
  CHECK(durations_from_log(logs) == std::vector<int>{1, 1, 6, 7});
  CHECK(durations_from_log(logs, 2.0) == std::vector<int>{1, 2, 12, 15});

  Rng rng(2);
  const auto inv = PhoneInventory::arpabet();
  const AcousticModel model(tiny_config(), inv, rng);
  nn::Tape tape;
  const auto ids = inv.encode({"HH", "AY1"});
  const nn::Var cond = model.conditioning(tape, model.encode_text(tape, ids), Vector::Zero(8), Matrix::Zero(2, 12));
  const Matrix mu = model.mean_mel(cond, {2, 3}).value();
  REQUIRE(mu.rows() == 5);
  CHECK(mu.row(0) == mu.row(1));
  CHECK(mu.row(2) == mu.row(4));
  CHECK(mu.row(1) != mu.row(2));
  for (int d : durations_from_log(model.log_durations(cond).value())) CHECK(d >= 1);
}

TEST_CASE("conditioning") {
  Rng rng(3);
  const auto inv = PhoneInventory::arpabet();
  const AcousticModel model(tiny_config(), inv, rng);
  const auto ids = inv.encode({"HH", "AH0", "L", "OW1"});
  auto mean_mel = [&](const Matrix& hed, const Vector& spk) {
    nn::Tape tape;
    return Matrix(model.mean_mel(model.conditioning(tape, model.encode_text(tape, ids), spk, hed), {2, 2, 2, 2}).value());
  };
  const Vector spk = pseudo_speaker_embedding("a", 8);
  const Matrix zeros = mean_mel(Matrix::Zero(4, 12), spk);
  CHECK((zeros - mean_mel(Matrix::Ones(4, 12), spk)).norm() > 0.0);
  Matrix one_entry = Matrix::Zero(4, 12);
  one_entry(2, 10) = 1.0;
  CHECK((zeros - mean_mel(one_entry, spk)).norm() > 0.0);
  CHECK(mean_mel(Matrix::Zero(4, 12), Vector::Zero(8)).allFinite());
  CHECK(code_of([&] { mean_mel(Matrix::Zero(3, 12), spk); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([&] { mean_mel(Matrix::Zero(4, 12), Vector::Zero(7)); }) == ErrorCode::LengthMismatch);
}

TEST_CASE("speaker embeddings") {
  const Vector a = pseudo_speaker_embedding("spk01");
  CHECK(a.size() == kSpeakerDim);
  CHECK(a.norm() == doctest::Approx(1.0));
  CHECK(pseudo_speaker_embedding("spk01") == a);
  CHECK(std::abs(a.dot(pseudo_speaker_embedding("spk02"))) < 0.3);
  const Vector u1 = pseudo_utterance_embedding("spk01", "u1");
  const Vector u2 = pseudo_utterance_embedding("spk01", "u2");
  CHECK(u1 != u2);
  CHECK(u1.dot(u2) > 0.95);

  testing::TempDir dir;
  save_speaker_embedding(dir / "e.json", u1);
  CHECK((load_speaker_embedding(dir / "e.json") - u1).norm() < 1e-12);
  write_file(dir / "e.txt", "1 2.5\n-3\n");
  CHECK(load_speaker_embedding(dir / "e.txt") == Vector{{1.0, 2.5, -3.0}});
  write_file(dir / "bad.txt", "1 2 x");
  CHECK(code_of([&] { load_speaker_embedding(dir / "bad.txt"); }) == ErrorCode::CorruptPayload);
}

TEST_CASE("optimal transport path") {
  Rng rng(9);
  const Matrix x0 = gaussian_matrix(5, 3, rng);
  const Matrix x1 = gaussian_matrix(5, 3, rng);
  CHECK(ot_path(x0, x1, 0.0, 1e-4) == x0);
  CHECK(ot_path(x0, x1, 1.0, 0.0) == x1);
  CHECK((ot_path(x0, x1, 1.0, 1e-4) - (x1 + 1e-4 * x0)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(ot_target(x0, x1, 1e-4) == x1 - (1.0 - 1e-4) * x0);
  // the target is the time derivative of the path
  const Matrix fd = (ot_path(x0, x1, 0.6 + 1e-6, 1e-4) - ot_path(x0, x1, 0.6 - 1e-6, 1e-4)) / 2e-6;
  CHECK((fd - ot_target(x0, x1, 1e-4)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("cfm loss against a zero decoder") {
  DecoderConfig dc;
  dc.mel_dim = 3;
  dc.width = 4;
  dc.time_dim = 4;
  Rng rng(4);
  const FlowDecoder decoder(dc, rng);
  nn::ParameterList params;
  decoder.collect(params);
  for (auto* p : params) p->value.setZero();
  const Matrix x0 = gaussian_matrix(6, 3, rng);
  const Matrix x1 = gaussian_matrix(6, 3, rng);
  nn::Tape tape;
  const double loss = cfm_loss(decoder, x1, tape.constant(Matrix::Zero(6, 3)), 0.3, x0, 1e-4).scalar();
  CHECK(loss == doctest::Approx(ot_target(x0, x1, 1e-4).squaredNorm() / 18.0).epsilon(1e-12));
}

TEST_CASE("decoder gradient matches central differences") {
  DecoderConfig dc;
  dc.mel_dim = 2;
  dc.width = 3;
  dc.time_dim = 4;
  Rng rng(11);
  const FlowDecoder decoder(dc, rng);
  nn::ParameterList params;
  decoder.collect(params);
  CHECK(nn::parameter_count(params) <= 1000);
  const Matrix x0 = gaussian_matrix(7, 2, rng);  // odd length exercises padding
  const Matrix x1 = gaussian_matrix(7, 2, rng);
  const Matrix mu = gaussian_matrix(7, 2, rng);
  const double err = testing::max_grad_error(params, [&](nn::Tape& tape) {
    return cfm_loss(decoder, x1, tape.constant(mu), 0.37, x0, 1e-4);
  });
  CHECK(err <= 1e-4);
}

TEST_CASE("decoder output shape for lengths that are not multiples of four") {
  Rng rng(1);
  DecoderConfig dc;
  dc.mel_dim = 5;
  dc.width = 4;
  const FlowDecoder decoder(dc, rng);
  for (int T : {1, 2, 5, 8, 13}) {
    nn::Tape tape;
    const Matrix out = decoder(tape.constant(Matrix::Ones(T, 5)), tape.constant(Matrix::Zero(T, 5)), 0.5).value();
    CHECK(out.rows() == T);
    CHECK(out.cols() == 5);
  }
}

TEST_CASE("vocoder reconstruction") {
  toy::ToyCorpusConfig cc;
  cc.speakers = 1;
  cc.utterances_per_cell = 1;
  cc.emotions = {Emotion::Neutral};
  const auto utt = toy::generate_toy_corpus(cc).front();
  const auto mel = dsp::compute_mel(utt.audio);
  const Waveform w = vocode(mel);
  CHECK(w.samples.size() == static_cast<std::size_t>(mel.frames() * dsp::kHopLength));
  const auto back = dsp::compute_mel(w);
  REQUIRE(back.frames() == mel.frames());
  int strong = 0, correlated = 0;
  for (int b = 0; b < dsp::kNumMels; ++b) {
    if (mel.data.row(b).mean() < -8.0) continue;  // near-silent bands carry only leakage
    ++strong;
    if (pearson(mel.data.row(b).transpose(), back.data.row(b).transpose()) >= 0.8) ++correlated;
  }
  CHECK(correlated == strong);
  CHECK(std::abs(back.data.mean() - mel.data.mean()) < 0.5);
  CHECK(vocode(mel).samples == w.samples);
}

TEST_CASE("synthesis contract") {
  Rng rng(8);
  const auto inv = PhoneInventory::arpabet();
  const AcousticModel model(tiny_config(), inv, rng);
  SynthesisRequest req;
  req.phonemes = text_to_phonemes("hello world", Lexicon::builtin());
  req.hed = neutral_hed(req.phonemes);
  req.speaker_embedding = pseudo_speaker_embedding("x", 8);
  req.durations = std::vector<int>(req.phonemes.size(), 3);
  const auto a = synthesize(&model, req);
  CHECK(a.mel.bands() == 100);
  CHECK(a.mel.frames() == 3 * static_cast<Eigen::Index>(req.phonemes.size()));
  CHECK(a.waveform.samples.size() == static_cast<std::size_t>(a.mel.frames() * 256));
  const auto b = synthesize(&model, req);
  CHECK(a.mel.data == b.mel.data);
  CHECK(a.waveform.samples == b.waveform.samples);
  req.seed = 1;
  CHECK(synthesize(&model, req).mel.data != a.mel.data);

  SUBCASE("any HED change moves the sample") {
    req.seed = 0;
    req.hed.matrix(0, 10) = 0.5;
    CHECK(synthesize(&model, req).mel.data != a.mel.data);
  }
  SUBCASE("one ODE step still gives a full-size mel") {
    req.n_ode_steps = 1;
    req.vocode = false;
    const auto r = synthesize(&model, req);
    CHECK(r.mel.frames() == a.mel.frames());
    CHECK(r.waveform.samples.empty());
  }
  SUBCASE("errors") {
    CHECK(code_of([&] { synthesize(nullptr, req); }) == ErrorCode::ModelNotLoaded);
    auto bad = req;
    bad.hed.matrix = Matrix::Zero(3, 12);
    CHECK(code_of([&] { synthesize(&model, bad); }) == ErrorCode::LengthMismatch);
    bad = req;
    bad.phonemes = PhonemeSequence{};
    CHECK(code_of([&] { synthesize(&model, bad); }) == ErrorCode::EmptyInput);
    bad = req;
    bad.n_ode_steps = 0;
    CHECK(code_of([&] { synthesize(&model, bad); }) == ErrorCode::InvalidValue);
  }
}

TEST_CASE("training example extraction") {
  const auto inv = PhoneInventory::arpabet();
  toy::ToyCorpusConfig cc;
  cc.speakers = 1;
  cc.utterances_per_cell = 1;
  cc.emotions = {Emotion::Sad};
  const auto u = toy::generate_toy_corpus(cc).front();
  const auto ex = make_example(inv, u.alignment, u.audio, toy::toy_hed_matrix(u), Vector::Zero(4), u.speaker_id);
  int total = 0;
  for (int d : ex.durations) total += d;
  CHECK(ex.mel.rows() == total);
  CHECK(ex.mel.cols() == 100);
  CHECK(ex.phone_ids.size() == u.alignment.phones.size());
  CHECK(code_of([&] { make_example(inv, u.alignment, u.audio, Matrix::Zero(1, 12), Vector::Zero(4), "s"); }) ==
        ErrorCode::LengthMismatch);
  Waveform cut = u.audio;
  cut.samples.resize(cut.samples.size() / 2);
  CHECK(code_of([&] { make_example(inv, u.alignment, cut, toy::toy_hed_matrix(u), Vector::Zero(4), "s"); }) ==
        ErrorCode::AlignmentMismatch);
}

TEST_CASE("duration predictor overfits ten utterances") {
  const auto inv = PhoneInventory::arpabet();
  const auto examples = toy_examples(1, 5, inv, 8);
  REQUIRE(examples.size() == 10);
  Rng rng(7);
  AcousticModel model(tiny_config(), inv, rng);
  TtsTrainConfig tc;
  tc.steps = 300;
  tc.batch_size = 2;
  tc.learning_rate = 3e-3;
  const auto report = train_acoustic_model(model, examples, tc);
  CHECK(report.steps.size() == 300);
  CHECK(duration_frame_error(model, examples) <= 2.0);
  CHECK(report.steps.back().duration_loss < report.steps.front().duration_loss);
}

TEST_CASE("training and checkpoints are deterministic") {
  const auto inv = PhoneInventory::arpabet();
  const auto examples = toy_examples(2, 1, inv, 8);
  auto run = [&] {
    Rng rng(3);
    AcousticModel model(tiny_config(), inv, rng);
    TtsTrainConfig tc;
    tc.steps = 5;
    tc.batch_size = 2;
    train_acoustic_model(model, examples, tc);
    return model;
  };
  const auto a = run();
  const auto b = run();
  const std::string bytes = encode_archive(acoustic_to_archive(a));
  CHECK(bytes == encode_archive(acoustic_to_archive(b)));

  testing::TempDir dir;
  save_acoustic_model(dir / "m.bin", a);
  const auto loaded = load_acoustic_model(dir / "m.bin");
  CHECK(encode_archive(acoustic_to_archive(loaded)) == bytes);
  CHECK(loaded.mel_norm.mean == a.mel_norm.mean);
  CHECK(code_of([&] { load_archive(dir / "m.bin", "intensity-model"); }) == ErrorCode::CorruptPayload);
}
