// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "hedtts/common/archive.hpp"
#include "hedtts/common/emotion.hpp"
#include "hedtts/common/error.hpp"
#include "hedtts/common/hash.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/resample.hpp"
#include "hedtts/common/rng.hpp"
#include "hedtts/common/wav.hpp"
#include "test_util.hpp"

using namespace hedtts;

TEST_CASE("rng streams are reproducible and roughly standard normal") {
  Rng a(42), b(42);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
  for (int i = 0; i < 1000; ++i) CHECK(a.index(7) < 7u);
}

TEST_CASE("emotion and level names parse back") {
  for (Emotion e : kAllEmotions) CHECK(parse_emotion(emotion_name(e)) == e);
  for (Level l : kAllLevels) CHECK(parse_level(level_name(l)) == l);
  CHECK(intensity_index(Emotion::Sad) == 2);
  CHECK(intensity_index(Emotion::Neutral) == -1);
  CHECK_FALSE(parse_emotion("bored").has_value());
}

TEST_CASE("wav encode/decode keeps 16-bit precision") {
  Waveform w = testing::sine(440.0, 0.1);
  const Waveform back = decode_wav(encode_wav(w));
  REQUIRE(back.samples.size() == w.samples.size());
  CHECK(back.sample_rate == 16000);
  for (std::size_t i = 0; i < w.samples.size(); ++i) CHECK(std::abs(back.samples[i] - w.samples[i]) < 1.0 / 16000.0);
  CHECK_THROWS_AS(decode_wav("RIFF"), Error);
}

TEST_CASE("frame matrix container round trips float32 payloads and rejects truncation") {
  FrameMatrix m{"utt_1", 50.0, Matrix::Random(7, 5).cast<float>().cast<double>()};
  const std::string bytes = encode_frame_matrix(m);
  const FrameMatrix back = decode_frame_matrix(bytes);
  CHECK(back.utterance_id == "utt_1");
  CHECK(back.frame_rate == 50.0);
  CHECK(back.matrix == m.matrix);
  try {
    decode_frame_matrix(bytes.substr(0, bytes.size() - 3));
    FAIL("expected CorruptPayload");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CorruptPayload);
  }
}

TEST_CASE("tensor archive round trips exactly") {
  TensorArchive a;
  a.kind = "unit";
  a.meta = {{"alpha", 1.5}};
  a.tensors["w"] = Matrix::Random(3, 4);
  const auto back = decode_archive(encode_archive(a), "unit");
  CHECK(back.tensor("w") == a.tensors["w"]);
  CHECK(back.meta.at("alpha").get<double>() == 1.5);
  CHECK_THROWS_AS(decode_archive(encode_archive(a), "other"), Error);
  const std::string bytes = encode_archive(a);
  CHECK_THROWS_AS(decode_archive(bytes.substr(0, bytes.size() - 1), "unit"), Error);
}

TEST_CASE("resampling preserves a low-frequency tone") {
  const Waveform w = testing::sine(300.0, 0.2, 0.5, 22050);
  const auto out = resample(w.samples, 22050, 16000);
  CHECK(out.size() == static_cast<std::size_t>(0.2 * 22050 * 16000 / 22050));
  // compare the interior against the analytic tone
  double err = 0.0;
  for (std::size_t i = 200; i + 200 < out.size(); ++i)
    err = std::max(err, std::abs(out[i] - 0.5 * std::sin(2.0 * M_PI * 300.0 * i / 16000.0)));
  CHECK(err < 0.01);
}

TEST_CASE("hash is stable") {
  CHECK(to_hex(fnv1a("")) == "cbf29ce484222325");
  CHECK(hash_matrix(Matrix::Ones(2, 2)) == hash_matrix(Matrix::Ones(2, 2)));
  CHECK(hash_matrix(Matrix::Ones(2, 2)) != hash_matrix(Matrix::Ones(1, 4)));
}
