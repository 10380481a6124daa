// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include "doctest.h"

#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/corpus/alignment.hpp"
#include "hedtts/corpus/corpus.hpp"
#include "hedtts/corpus/segments.hpp"
#include "hedtts/corpus/split.hpp"
#include "test_util.hpp"

using namespace hedtts;
using namespace hedtts::corpus;
using testing::fixture;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an hedtts::Error");
  return ErrorCode::InvalidArgument;
}

UtteranceRecord fake_record(const std::string& id, const std::string& speaker, Emotion e) {
  UtteranceRecord r;
  r.id = id;
  r.speaker_id = speaker;
  r.emotion_label = e;
  r.duration = 1.0;
  return r;
}

}  // namespace

TEST_CASE("parse_alignment reads a 3-word, 9-phone track") {
  const auto track = parse_alignment(fixture("alignments/three_words.json"));
  CHECK(track.utterance_id == "0011_000001");
  REQUIRE(track.phones.size() == 9);
  REQUIRE(track.words.size() == 3);
  std::set<int> word_ids;
  for (const auto& p : track.phones) word_ids.insert(p.word_index);
  CHECK(word_ids == std::set<int>{0, 1, 2});
  CHECK(track.phones[1].symbol == "AH0");
  CHECK(track.phones[8].symbol == "SP");
}

TEST_CASE("parse_alignment rejects invariant violations") {
  CHECK(code_of([] { parse_alignment(fixture("alignments/bad_nonmonotonic.json")); }) == ErrorCode::NonMonotonic);
  CHECK(code_of([] { parse_alignment(fixture("alignments/bad_overlap.json")); }) ==
        ErrorCode::OverlappingIntervals);
  CHECK(code_of([] { parse_alignment(fixture("alignments/bad_orphan.json")); }) == ErrorCode::OrphanPhone);
}

TEST_CASE("alignment round trip equals the canonical form of every fixture") {
  for (const char* name : {"three_words.json", "single_phone.json", "silence_padded.json"}) {
    const auto path = fixture(std::string("alignments/") + name);
    const auto track = parse_alignment(path);
    // canonical: the source document with symbols normalised, re-serialised
    auto doc = nlohmann::json::parse(read_file(path));
    for (auto& p : doc["phones"]) p["symbol"] = normalize_phone_symbol(p["symbol"].get<std::string>());
    CHECK(alignment_to_json(track) == doc);
    CHECK(alignment_from_json(nlohmann::json::parse(serialize_alignment(track))) == track);
  }
}

TEST_CASE("slice_segments counts and partitions") {
  const auto track = parse_alignment(fixture("alignments/three_words.json"));
  const auto seg = slice_segments(track);
  CHECK(seg.size() == 13);
  CHECK(seg.utterance.span == TimeSpan{0.10, 0.95});
  // every level covers each phone exactly once
  std::vector<int> covered(track.phones.size(), 0);
  for (const auto& w : seg.words)
    for (int i = w.first_phone; i < w.last_phone; ++i) covered[static_cast<std::size_t>(i)]++;
  for (int c : covered) CHECK(c == 1);
  for (std::size_t i = 0; i < seg.phones.size(); ++i) {
    CHECK(seg.phones[i].first_phone == static_cast<int>(i));
    CHECK(seg.phones[i].last_phone == static_cast<int>(i) + 1);
  }
  CHECK(seg.utterance.first_phone == 0);
  CHECK(seg.utterance.last_phone == 9);
  // word span is the union of its phones
  CHECK(seg.words[1].span == TimeSpan{0.25, 0.60});
}

TEST_CASE("single phone utterance yields three identical spans") {
  const auto track = parse_alignment(fixture("alignments/single_phone.json"));
  const auto seg = slice_segments(track);
  REQUIRE(seg.words.size() == 1);
  REQUIRE(seg.phones.size() == 1);
  CHECK(seg.utterance.span == seg.words[0].span);
  CHECK(seg.words[0].span == seg.phones[0].span);
}

TEST_CASE("word spans exclude pause phones only when trimming is requested") {
  const auto track = parse_alignment(fixture("alignments/silence_padded.json"));
  const auto plain = slice_segments(track);
  CHECK(plain.words[0].span == TimeSpan{0.00, 0.60});
  CHECK(plain.words[1].span == TimeSpan{0.60, 1.20});
  const auto trimmed = slice_segments(track, {.trim_word_silence = true});
  // hand-built expectation: "hello" = hh..ow1, "world" = w..d
  CHECK(trimmed.words[0].span == TimeSpan{0.12, 0.55});
  CHECK(trimmed.words[1].span == TimeSpan{0.60, 1.05});
  // phone membership is unchanged
  CHECK(trimmed.words[0].first_phone == 0);
  CHECK(trimmed.words[0].last_phone == 6);
}

TEST_CASE("slice_segments rejects an empty track") {
  AlignmentTrack empty;
  CHECK(code_of([&] { slice_segments(empty); }) == ErrorCode::EmptyTrack);
}

TEST_CASE("phone durations convert seconds at the mel hop") {
  CHECK(seconds_to_frames(0.096) == 6);
  AlignmentTrack t{"x", {{"AA1", 0.0, 0.096, 0}}, {{"a", 0.0, 0.096}}};
  CHECK(phone_frame_durations(t) == std::vector<int>{6});
}

TEST_CASE("load_corpus indexes an ESD-style layout") {
  testing::TempDir dir;
  const Waveform tone = testing::sine(200.0, 0.1);
  const char* emotions[] = {"Neutral", "Angry", "Happy", "Sad", "Surprise"};
  for (int s = 0; s < 10; ++s) {
    const std::string spk = "00" + std::to_string(11 + s);
    std::string transcript;
    for (int e = 0; e < 5; ++e) {
      for (int k = 0; k < 2; ++k) {
        const std::string id = spk + "_" + std::to_string(100 * e + k);
        std::filesystem::create_directories(dir / (spk + "/" + emotions[e] + "/train"));
        write_wav(dir / (spk + "/" + emotions[e] + "/train/" + id + ".wav"), tone);
        transcript += id + "\tsome text\t" + emotions[e] + "\n";
      }
    }
    write_file(dir / (spk + "/" + spk + ".txt"), transcript);
  }
  const auto index = load_corpus(dir.path());
  CHECK(index.size() == 100);
  CHECK(index.groups().size() == 50);
  CHECK(index.speakers().size() == 10);
  CHECK(index.at("0011_200").emotion_label == Emotion::Happy);
  CHECK(index.at("0011_200").duration == doctest::Approx(0.1));
}

TEST_CASE("load_corpus: empty directory, duplicates, sample rate") {
  testing::TempDir dir;
  const auto empty = load_corpus(dir.path());
  CHECK(empty.empty());
  CHECK_FALSE(empty.warnings.empty());

  write_wav(dir / "a.wav", testing::sine(200.0, 0.1));
  write_wav(dir / "b.wav", testing::sine(200.0, 0.1, 0.5, 22050));
  write_file(dir / "dup.csv", "id,speaker,emotion,text,audio_relpath\nu1,s1,Sad,hi,a.wav\nu1,s1,Sad,hi,a.wav\n");
  CHECK(code_of([&] { load_corpus(dir.path(), dir / "dup.csv"); }) == ErrorCode::DuplicateId);

  write_file(dir / "rate.csv", "id,speaker,emotion,text,audio_relpath\nu2,s1,Angry,\"hi, there\",b.wav\n");
  CHECK(code_of([&] { load_corpus(dir.path(), dir / "rate.csv"); }) == ErrorCode::BadSampleRate);
  const auto ok = load_corpus(dir.path(), dir / "rate.csv", {.allow_resample = true});
  CHECK(ok.at("u2").text == "hi, there");
  const Waveform audio = load_audio(ok.at("u2"));
  CHECK(audio.sample_rate == 16000);
  CHECK(audio.samples.size() == 1600);

  write_file(dir / "missing.csv", "id,speaker,emotion,text,audio_relpath\nu3,s1,Sad,hi,nope.wav\n");
  CHECK(code_of([&] { load_corpus(dir.path(), dir / "missing.csv"); }) == ErrorCode::MissingAudio);
}

TEST_CASE("external embeddings must cover the utterance") {
  testing::TempDir dir;
  UtteranceRecord rec = fake_record("u1", "s", Emotion::Sad);
  rec.duration = 1.0;
  write_frame_matrix(dir / "ok.bin", {"u1", 50.0, Matrix::Zero(51, 8)});
  CHECK(load_external_embedding(dir / "ok.bin", rec).frames() == 51);
  write_frame_matrix(dir / "short.bin", {"u1", 50.0, Matrix::Zero(45, 8)});
  CHECK(code_of([&] { load_external_embedding(dir / "short.bin", rec); }) == ErrorCode::AlignmentMismatch);
  write_frame_matrix(dir / "other.bin", {"u9", 50.0, Matrix::Zero(50, 8)});
  CHECK(code_of([&] { load_external_embedding(dir / "other.bin", rec); }) == ErrorCode::AlignmentMismatch);
}

TEST_CASE("split quotas") {
  auto q = quota_for(350);
  CHECK(q.train == 300);
  CHECK(q.val == 20);
  CHECK(q.test == 30);
  q = quota_for(35);
  CHECK(q.train == 30);
  CHECK(q.val == 2);
  CHECK(q.test == 3);
  CHECK(code_of([] { quota_for(2); }) == ErrorCode::InsufficientData);
}

TEST_CASE("split_dataset is deterministic and disjoint") {
  CorpusIndex index;
  for (int s = 0; s < 3; ++s)
    for (Emotion e : kAllEmotions)
      for (int k = 0; k < 35; ++k)
        index.add(fake_record("s" + std::to_string(s) + "_" + std::string(emotion_name(e)) + "_" + std::to_string(k),
                              "s" + std::to_string(s), e));
  const auto a = split_dataset(index, 7);
  const auto b = split_dataset(index, 7);
  CHECK(split_to_json(a).dump() == split_to_json(b).dump());
  CHECK(split_to_json(a).dump() != split_to_json(split_dataset(index, 8)).dump());
  CHECK(a.cells.size() == 15);
  std::set<std::string> seen;
  for (const auto& ids : {a.train_ids(), a.val_ids(), a.test_ids()})
    for (const auto& id : ids) CHECK(seen.insert(id).second);
  CHECK(seen.size() == index.size());
  CHECK(a.train_ids().size() == 15 * 30);
  CHECK(split_to_json(split_from_json(split_to_json(a))) == split_to_json(a));

  CorpusIndex tiny;
  tiny.add(fake_record("x1", "s", Emotion::Sad));
  tiny.add(fake_record("x2", "s", Emotion::Sad));
  CHECK(code_of([&] { split_dataset(tiny, 1); }) == ErrorCode::InsufficientData);
}
