// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>
#include <thread>

#include <doctest.h>

#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/service/api.hpp"
#include "hedtts/service/cli.hpp"
#include "hedtts/service/config.hpp"
#include "hedtts/service/manifest.hpp"
#include "hedtts/service/session.hpp"
#include "hedtts/toy/toy_corpus.hpp"
#include "hedtts/tts/phonemes.hpp"
#include "test_util.hpp"

// after Eigen: resolv.h defines a _res macro
#include <httplib.h>

using namespace hedtts;
using namespace hedtts::service;
namespace fs = std::filesystem;
using hedtts::testing::TempDir;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

tts::AcousticConfig tiny_config() {
  tts::AcousticConfig c = tts::AcousticConfig::toy();
  c.encoder.dim = 16;
  c.encoder.ffn_dim = 32;
  c.duration_hidden = 16;
  c.decoder.width = 8;
  c.decoder.time_dim = 8;
  c.speaker_dim = 8;
  return c;
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hedtts");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

/// Toy corpus on disk via the CLI: 2 speakers x 5 emotions x 2 utterances,
/// with ground-truth HEDs in cache/hed.
fs::path make_toy(const TempDir& dir) {
  const fs::path root = dir / "toy";
  const auto r = cli({"make-toy", "--out", root.string(), "--speakers", "2", "--per-cell", "2"});
  REQUIRE(r.code == 0);
  return root;
}

nlohmann::json body(const ApiResponse& r) { return nlohmann::json::parse(r.body); }

}  // namespace

TEST_CASE("config resolves paths and validates them") {
  TempDir dir;
  const fs::path root = make_toy(dir);
  const JobConfig c = load_config(root / "config.json");
  CHECK(c.corpus_root == fs::weakly_canonical(root) / ".");
  CHECK(c.cache_dir.filename() == "cache");
  CHECK(config_hash(c) == config_hash(load_config(root / "config.json")));

  nlohmann::json doc = {{"corpus", {{"root", "missing"}}}};
  CHECK(code_of([&] { config_from_json(doc, dir.path()); }) == ErrorCode::NotFound);
  doc = {{"corpus", {{"root", root.string()}}}, {"tts", {{"preset", "huge"}}}};
  CHECK(code_of([&] { config_from_json(doc, dir.path()); }) == ErrorCode::InvalidValue);
  doc = {{"corpus", {{"root", root.string()}}}, {"features", {{"word", {{"provider", "external"}, {"dir", "nope"}}}}}};
  CHECK(code_of([&] { config_from_json(doc, dir.path()); }) == ErrorCode::NotFound);
}

TEST_CASE("manifest records hashes, seed and versions") {
  TempDir dir;
  write_file(dir / "a.txt", "abc");
  RunManifest m;
  m.command = "synthesize";
  m.config_hash = "feed";
  m.seed = 7;
  m.artifacts = {dir / "a.txt"};
  write_manifest(dir / "m.json", m);
  const auto doc = nlohmann::json::parse(read_file(dir / "m.json"));
  CHECK(doc["seed"] == 7);
  CHECK(doc["config_hash"] == "feed");
  CHECK(doc["versions"]["hedtts"] == std::string(kVersion));
  CHECK(doc["artifacts"][0]["path"] == "a.txt");
  CHECK(doc["artifacts"][0]["hash"] == file_hash(dir / "a.txt"));
}

TEST_CASE("session store: edit then undo restores the HED byte for byte, replay restores state") {
  TempDir dir;
  hed::HierarchicalED h;
  h.utterance_id = "u";
  h.phones = {"SIL", "K", "AE1", "T", "SIL"};
  h.word_index = {0, 1, 1, 1, 2};
  h.matrix = Matrix::Zero(5, hed::kHedColumns);
  const std::string before = hed::serialize_hed(h);

  std::string sid;
  {
    SessionStore store(dir / "sessions");
    sid = store.create("u", h).session_id;
    hed::EDEdit e;
    e.level = Level::Word;
    e.begin = 1;
    e.end = 2;
    e.emotion = 2;
    e.value = 0.8;
    const auto edited = store.edit(sid, e);
    CHECK(edited.current().matrix(2, hed::hed_column(Level::Word, 2)) == 0.8);
    CHECK(hed::serialize_hed(store.undo(sid).current()) == before);
    CHECK(code_of([&] { store.undo(sid); }) == ErrorCode::InvalidArgument);
    e.value = 1.5;
    CHECK(code_of([&] { store.edit(sid, e); }) == ErrorCode::InvalidValue);
    e.value = 0.4;
    store.edit(sid, e);
    store.record_audio(sid, "abc");
  }
  SessionStore reopened(dir / "sessions");
  const auto s = reopened.get(sid);
  CHECK(s.edits.size() == 1);
  CHECK(s.last_audio_id == std::optional<std::string>("abc"));
  CHECK(s.current().matrix(1, hed::hed_column(Level::Word, 2)) == 0.4);
  CHECK(hed::serialize_hed(s.history.front()) == before);
  CHECK(reopened.create("u", h).session_id != sid);
  CHECK(code_of([&] { reopened.get("nope"); }) == ErrorCode::NotFound);
}

TEST_CASE("api: utterances, HED lookup and status codes") {
  TempDir dir;
  const fs::path root = make_toy(dir);
  const Workspace ws(load_config(root / "config.json"));
  ApiService api(ws, nullptr, nullptr, dir / "state");

  const auto health = body(api.handle("GET", "/health", ""));
  CHECK(health["status"] == "ok");
  CHECK(health["acoustic_loaded"] == false);

  const auto list = body(api.handle("GET", "/utterances", ""));
  REQUIRE(list.size() == 20);
  const std::string id = list[0]["id"];
  const auto align = api.handle("GET", "/utterances/" + id + "/alignment", "");
  CHECK(align.status == 200);
  CHECK(corpus::alignment_from_json(body(align)) == ws.alignment(id));
  const auto hed_resp = api.handle("GET", "/utterances/" + id + "/hed", "");
  CHECK(hed_resp.status == 200);
  CHECK(hed::hed_from_json(body(hed_resp)).num_phones() == static_cast<int>(ws.alignment(id).phones.size()));

  CHECK(api.handle("GET", "/utterances/nope/hed", "").status == 404);
  CHECK(api.handle("GET", "/sessions/nope", "").status == 404);
  CHECK(api.handle("GET", "/audio/0123abcd", "").status == 404);
  CHECK(api.handle("DELETE", "/utterances", "").status == 404);

  // no cached HED and no extractor: the HED cannot be produced
  const std::string other = list[1]["id"];
  fs::remove(root / "cache" / "hed" / (other + ".json"));
  CHECK(api.handle("GET", "/utterances/" + other + "/hed", "").status == 409);
  CHECK(api.handle("POST", "/sessions", "{not json").status == 400);
}

TEST_CASE("api: session editing, validation and synthesis") {
  TempDir dir;
  const fs::path root = make_toy(dir);
  const Workspace ws(load_config(root / "config.json"));
  Rng rng(3);
  const tts::AcousticModel model(tiny_config(), tts::PhoneInventory::arpabet(), rng);
  const std::string id = ws.index().records().front().id;

  std::string sid;
  std::string original;
  std::string audio_id;
  {
    ApiService api(ws, nullptr, &model, dir / "state");
    const auto created = api.handle("POST", "/sessions", nlohmann::json{{"utterance_id", id}}.dump());
    REQUIRE(created.status == 201);
    sid = body(created)["session_id"];
    original = body(created)["hed"].dump();

    const nlohmann::json edit = {{"level", "word"}, {"target", 0}, {"emotion", "Sad"}, {"mode", "set"},
                                 {"value", 0.9}};
    const auto edited = api.handle("POST", "/sessions/" + sid + "/edit", edit.dump());
    REQUIRE(edited.status == 200);
    CHECK(body(edited)["hed"].dump() != original);
    const auto undone = api.handle("POST", "/sessions/" + sid + "/undo", "");
    CHECK(body(undone)["hed"].dump() == original);
    CHECK(api.handle("POST", "/sessions/" + sid + "/undo", "").status == 409);

    nlohmann::json bad = edit;
    bad["value"] = 1.5;
    const auto rejected = api.handle("POST", "/sessions/" + sid + "/edit", bad.dump());
    CHECK(rejected.status == 422);
    CHECK(body(rejected)["field"] == "value");
    bad = edit;
    bad["target"] = 50;
    CHECK(body(api.handle("POST", "/sessions/" + sid + "/edit", bad.dump()))["field"] == "target");
    bad = edit;
    bad["emotion"] = "Neutral";
    CHECK(body(api.handle("POST", "/sessions/" + sid + "/edit", bad.dump()))["field"] == "emotion");
    CHECK(body(api.handle("GET", "/sessions/" + sid, ""))["hed"].dump() == original);

    CHECK(api.handle("POST", "/sessions/" + sid + "/edit", edit.dump()).status == 200);
    const auto s1 = api.handle("POST", "/sessions/" + sid + "/synthesize", R"({"seed": 5})");
    REQUIRE(s1.status == 200);
    audio_id = body(s1)["audio_id"];
    const auto wav1 = api.handle("GET", "/audio/" + audio_id, "");
    CHECK(wav1.content_type == "audio/wav");
    fs::remove_all(dir / "state" / "audio");
    fs::create_directories(dir / "state" / "audio");
    const auto s2 = api.handle("POST", "/sessions/" + sid + "/synthesize", R"({"seed": 5})");
    CHECK(body(s2)["audio_id"] == audio_id);
    CHECK(api.handle("GET", "/audio/" + audio_id, "").body == wav1.body);
    CHECK(decode_wav(wav1.body).sample_rate == 16000);
    CHECK(body(api.handle("POST", "/sessions/" + sid + "/synthesize", R"({"seed": 6})"))["audio_id"] != audio_id);
  }
  // restart with persisted sessions
  ApiService restarted(ws, nullptr, nullptr, dir / "state");
  const auto s = body(restarted.handle("GET", "/sessions/" + sid, ""));
  CHECK(s["edits"].size() == 1);
  CHECK(s["hed"]["matrix"] != nlohmann::json::parse(original)["matrix"]);
  CHECK(restarted.handle("POST", "/sessions/" + sid + "/undo", "").body.find(original) != std::string::npos);
  CHECK(restarted.handle("POST", "/sessions/" + sid + "/synthesize", "").status == 409);
  CHECK(restarted.handle("GET", "/audio/" + audio_id, "").status == 200);
}

TEST_CASE("http transport serves concurrent clients") {
  TempDir dir;
  const fs::path root = make_toy(dir);
  const Workspace ws(load_config(root / "config.json"));
  ApiService api(ws, nullptr, nullptr, dir / "state");
  HttpServer server(api);
  const int port = server.bind("127.0.0.1", 0);
  std::thread loop([&] { server.run(); });

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(client.Get("/utterances/nope/alignment")->status == 404);

  const std::string id = ws.index().records().front().id;
  std::vector<std::thread> workers;
  std::vector<int> ok(4, 0);
  for (int w = 0; w < 4; ++w)
    workers.emplace_back([&, w] {
      httplib::Client c("127.0.0.1", port);
      auto created = c.Post("/sessions", nlohmann::json{{"utterance_id", id}}.dump(), "application/json");
      if (!created || created->status != 201) return;
      const std::string sid = nlohmann::json::parse(created->body)["session_id"];
      for (int k = 0; k < 5; ++k) {
        const nlohmann::json e = {{"level", "utterance"}, {"emotion", "Happy"}, {"mode", "set"}, {"value", 0.1 * k}};
        auto r = c.Post("/sessions/" + sid + "/edit", e.dump(), "application/json");
        if (r && r->status == 200) ++ok[static_cast<std::size_t>(w)];
      }
    });
  for (auto& t : workers) t.join();
  server.stop();
  loop.join();
  CHECK(ok == std::vector<int>(4, 5));
}

TEST_CASE("cli: usage errors, runtime errors and reproducible synthesis") {
  TempDir dir;
  auto r = cli({"synthesize", "--out", "x.wav", "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--bogus") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(cli({}).code == 2);

  r = cli({"train-tts", "--config", (dir / "missing.json").string()});
  CHECK(r.code == 1);
  CHECK(nlohmann::json::parse(r.err)["error"] == "IoError");

  Rng rng(1);
  const tts::AcousticModel model(tiny_config(), tts::PhoneInventory::arpabet(), rng);
  tts::save_acoustic_model(dir / "m.bin", model);
  const auto a = dir / "a.wav";
  const auto b = dir / "b.wav";
  REQUIRE(cli({"synthesize", "--model", (dir / "m.bin").string(), "--text", "the cat", "--seed", "4", "--out", a.string()})
              .code == 0);
  REQUIRE(cli({"synthesize", "--model", (dir / "m.bin").string(), "--text", "the cat", "--seed", "4", "--out", b.string()})
              .code == 0);
  CHECK(read_file(a) == read_file(b));
  CHECK(fs::exists(dir / "a.mel.fmat"));
  const auto manifest = nlohmann::json::parse(read_file(dir / "a.wav.manifest.json"));
  CHECK(manifest["seed"] == 4);
  CHECK(manifest["artifacts"][0]["hash"] == file_hash(a));
  CHECK(read_frame_matrix(dir / "a.mel.fmat").dim() == model.config().decoder.mel_dim);
}

TEST_CASE("cli: sweep writes six wavs and a trend table") {
  TempDir dir;
  const fs::path root = make_toy(dir);
  Rng rng(2);
  const tts::AcousticModel model(tiny_config(), tts::PhoneInventory::arpabet(), rng);
  tts::save_acoustic_model(dir / "m.bin", model);
  const Workspace ws(load_config(root / "config.json"));
  const std::string id = ws.index().records().front().id;
  const auto r = cli({"sweep", "--config", (root / "config.json").string(), "--model", (dir / "m.bin").string(),
                      "--utterance", id, "--level", "utterance", "--emotion", "Sad", "--out", (dir / "sweep").string()});
  REQUIRE(r.code == 0);
  int wavs = 0;
  for (const auto& e : fs::directory_iterator(dir / "sweep")) wavs += e.path().extension() == ".wav";
  CHECK(wavs == 6);
  const std::string csv = read_file(dir / "sweep" / "trends.csv");
  CHECK(csv.find("Sad,energy_mean") != std::string::npos);
  CHECK(fs::exists(dir / "sweep" / "manifest.json"));
}
