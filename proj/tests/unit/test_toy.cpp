// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"

#include "hedtts/corpus/alignment.hpp"
#include "hedtts/dsp/features.hpp"
#include "hedtts/toy/toy_corpus.hpp"
#include "test_util.hpp"

using namespace hedtts;

namespace {

double mean_log_energy(const Waveform& w) {
  const auto ff = dsp::compute_frame_features(w);
  return ff.values.col(0).mean();
}

}  // namespace

TEST_CASE("toy corpus is deterministic and well formed") {
  toy::ToyCorpusConfig cc;
  cc.speakers = 2;
  cc.utterances_per_cell = 2;
  const auto a = toy::generate_toy_corpus(cc);
  const auto b = toy::generate_toy_corpus(cc);
  REQUIRE(a.size() == 2 * 5 * 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].audio.samples == b[i].audio.samples);
    CHECK_NOTHROW(corpus::validate_alignment(a[i].alignment));
    CHECK(a[i].alignment.phones.front().symbol == "SIL");
    CHECK(a[i].alignment.phones.back().end == doctest::Approx(a[i].audio.duration()).epsilon(1e-9));
    if (a[i].emotion == Emotion::Neutral) {
      CHECK(a[i].intensity == 0.0);
      CHECK(toy::toy_hed_matrix(a[i]).isZero());
    } else {
      CHECK(a[i].intensity > 0.0);
      const Matrix hed = toy::toy_hed_matrix(a[i]);
      CHECK(hed.rows() == static_cast<Eigen::Index>(a[i].alignment.phones.size()));
      CHECK(hed.sum() == doctest::Approx(3.0 * a[i].intensity * hed.rows()));
    }
  }
  cc.seed = 1;
  CHECK(toy::generate_toy_corpus(cc)[0].audio.samples != a[0].audio.samples);
}

TEST_CASE("sad rendering is quieter and the drop grows with intensity") {
  const auto spk = toy::toy_speakers(1).front();
  const std::vector<std::string> words = {"HELLO", "WORLD"};
  toy::EmotionCues cues;
  const double neutral = mean_log_energy(toy::render_utterance("n", spk, words, Emotion::Neutral, 0.0, cues, 3).audio);
  double previous = neutral;
  for (double level : {0.25, 0.5, 1.0}) {
    const double sad = mean_log_energy(toy::render_utterance("s", spk, words, Emotion::Sad, level, cues, 3).audio);
    CHECK(sad < previous);
    previous = sad;
  }
}

TEST_CASE("toy corpus round trips through the corpus loader") {
  toy::ToyCorpusConfig cc;
  cc.speakers = 2;
  cc.utterances_per_cell = 1;
  const auto utts = toy::generate_toy_corpus(cc);
  testing::TempDir dir;
  toy::write_toy_corpus(dir.path(), utts);
  const auto index = corpus::load_corpus(dir.path(), dir / "manifest.csv");
  CHECK(index.size() == utts.size());
  CHECK(index.speakers() == std::vector<std::string>{"spk01", "spk02"});
  const auto labels = toy::read_toy_labels(dir / "intensities.csv");
  CHECK(labels.size() == utts.size());
  for (const auto& u : utts) {
    const auto& rec = index.at(u.id);
    CHECK(rec.emotion_label == u.emotion);
    CHECK(rec.gender == u.gender);
    REQUIRE(rec.alignment_path.has_value());
    CHECK(corpus::parse_alignment(*rec.alignment_path).phones.size() == u.alignment.phones.size());
    CHECK(labels.at(u.id).intensity == doctest::Approx(u.intensity));
    const Waveform w = corpus::load_audio(rec);
    REQUIRE(w.samples.size() == u.audio.samples.size());
    CHECK(std::abs(w.samples[1000] - u.audio.samples[1000]) < 1e-4);
  }
}
