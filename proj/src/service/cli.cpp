// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/service/cli.hpp"

#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/corpus/split.hpp"
#include "hedtts/eval/distortion.hpp"
#include "hedtts/eval/leakage.hpp"
#include "hedtts/eval/report.hpp"
#include "hedtts/eval/trends.hpp"
#include "hedtts/intensity/model.hpp"
#include "hedtts/service/api.hpp"
#include "hedtts/service/config.hpp"
#include "hedtts/service/manifest.hpp"
#include "hedtts/service/pipeline.hpp"
#include "hedtts/toy/toy_corpus.hpp"
#include "hedtts/tts/phonemes.hpp"
#include "hedtts/tts/speaker.hpp"
#include "hedtts/tts/synthesize.hpp"

namespace hedtts::service {
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string model;
  std::string extractor;
  std::string utterance;
  std::string text;
  std::string speaker = "spk";
  std::string lexicon;
  std::string hed_file;
  std::string hed_source = "auto";
  std::string levels = "phoneme,word,utterance";
  std::string level = "utterance";
  std::string emotion = "Sad";
  std::string system = "hedtts";
  std::string host = "127.0.0.1";
  std::vector<std::string> inputs;
  std::vector<std::string> ids;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  int begin = 0;
  int end = 1;
  int port = 8080;
  int speakers = 4;
  int per_cell = 6;
  int max_cases = 6;
};

nlohmann::json args_json(int argc, const char* const* argv) {
  nlohmann::json a = nlohmann::json::array();
  for (int i = 1; i < argc; ++i) a.push_back(argv[i]);
  return a;
}

std::vector<Level> parse_levels(const std::string& text) {
  std::vector<Level> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto l = parse_level(item);
    if (!l) fail(ErrorCode::InvalidValue, "unknown level '" + item + "'");
    out.push_back(*l);
  }
  require(!out.empty(), ErrorCode::InvalidArgument, "no levels given");
  return out;
}

Emotion parse_target(const std::string& name) {
  const auto e = parse_emotion(name);
  if (!e || intensity_index(*e) < 0) fail(ErrorCode::InvalidValue, "emotion must be one of Angry, Happy, Sad, Surprise");
  return *e;
}

fs::path or_default(const std::string& value, const fs::path& fallback) { return value.empty() ? fallback : fs::path(value); }

std::string format_value(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << v;
  return s.str();
}

class Runner {
 public:
  Runner(const Options& o, std::string command, nlohmann::json arguments, std::ostream& out)
      : o_(o), command_(std::move(command)), arguments_(std::move(arguments)), out_(out) {}

  void run() {
    if (command_ == "make-toy") return make_toy();
    if (command_ == "train-extractor") return train_extractor_cmd();
    if (command_ == "calibrate-alpha") return calibrate_alpha();
    if (command_ == "extract-hed") return extract_hed_cmd();
    if (command_ == "train-tts") return train_tts();
    if (command_ == "synthesize") return synthesize_cmd();
    if (command_ == "sweep") return sweep();
    if (command_ == "evaluate") return evaluate();
    if (command_ == "report") return report();
    if (command_ == "serve") return serve();
    fail(ErrorCode::InvalidArgument, "unknown command " + command_);
  }

 private:
  Workspace& workspace() {
    if (!ws_) {
      require(!o_.config.empty(), ErrorCode::InvalidArgument, command_ + " needs --config");
      ws_.emplace(load_config(o_.config));
    }
    return *ws_;
  }

  std::uint64_t seed() { return o_.seed ? *o_.seed : (o_.config.empty() ? 0 : workspace().config().seed); }

  void finish(const fs::path& manifest_file, std::vector<fs::path> artifacts) {
    RunManifest m;
    m.command = command_;
    m.config_hash = o_.config.empty() ? "" : config_hash(workspace().config());
    m.seed = seed();
    m.arguments = arguments_;
    m.artifacts = std::move(artifacts);
    write_manifest(manifest_file, m);
    nlohmann::json paths = nlohmann::json::array();
    for (const auto& a : m.artifacts) paths.push_back(a.string());
    out_ << nlohmann::json{{"command", command_}, {"manifest", manifest_file.string()}, {"artifacts", paths}}.dump()
         << "\n";
  }

  tts::AcousticModel load_acoustic() {
    fs::path p = o_.model;
    if (p.empty() && !o_.config.empty() && workspace().config().acoustic_checkpoint)
      p = *workspace().config().acoustic_checkpoint;
    if (p.empty()) fail(ErrorCode::MissingModel, command_ + " needs an acoustic model (--model)");
    if (!fs::exists(p)) fail(ErrorCode::NotFound, "acoustic model " + p.string() + " missing");
    return tts::load_acoustic_model(p);
  }

  std::optional<intensity::IntensityModel> load_extractor(const std::string& flag) {
    fs::path p = flag;
    if (p.empty() && !o_.config.empty() && workspace().config().extractor_checkpoint)
      p = *workspace().config().extractor_checkpoint;
    if (p.empty()) return std::nullopt;
    if (!fs::exists(p)) fail(ErrorCode::NotFound, "extractor " + p.string() + " missing");
    return intensity::load_model(p);
  }

  /// HED of a corpus utterance by --hed-source: cache, extractor, neutral or
  /// auto (cache, then extractor, then neutral).
  HedSource hed_source(const intensity::IntensityModel* extractor) {
    const std::string mode = o_.hed_source;
    require(mode == "auto" || mode == "cache" || mode == "extractor" || mode == "neutral", ErrorCode::InvalidValue,
            "--hed-source must be auto, cache, extractor or neutral");
    Workspace& ws = workspace();
    return [&ws, extractor, mode](const std::string& id) {
      if (mode == "auto" || mode == "cache") {
        if (auto h = cached_hed(ws, id)) return *h;
        if (mode == "cache") fail(ErrorCode::NotFound, "no cached HED for " + id);
      }
      if (mode == "auto" || mode == "extractor") {
        if (extractor != nullptr) return extract_utterance_hed(ws, *extractor, id);
        if (mode == "extractor") fail(ErrorCode::MissingModel, "--hed-source extractor needs --extractor");
      }
      return tts::neutral_hed(tts::phonemes_from_alignment(ws.alignment(id)), id);
    };
  }

  std::vector<std::string> aligned_ids(const std::vector<std::string>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids)
      if (workspace().index().at(id).alignment_path) out.push_back(id);
    return out;
  }

  void make_toy() {
    require(!o_.out.empty(), ErrorCode::InvalidArgument, "make-toy needs --out");
    const fs::path root = o_.out;
    toy::ToyCorpusConfig tc;
    tc.speakers = o_.speakers;
    tc.utterances_per_cell = o_.per_cell;
    tc.seed = seed();
    const auto utts = toy::generate_toy_corpus(tc);
    toy::write_toy_corpus(root, utts);
    std::vector<fs::path> artifacts = {root / "manifest.csv", root / "intensities.csv"};
    for (const auto& u : utts) {
      hed::HierarchicalED h;
      h.utterance_id = u.id;
      for (const auto& p : u.alignment.phones) {
        h.phones.push_back(p.symbol);
        h.word_index.push_back(p.word_index);
      }
      h.matrix = toy::toy_hed_matrix(u);
      h.provenance = hed::Provenance::Manual;
      const fs::path file = root / "cache" / "hed" / (u.id + ".json");
      write_file(file, hed::serialize_hed(h));
      artifacts.push_back(file);
    }
    const nlohmann::json config = {{"corpus", {{"root", "."}, {"manifest", "manifest.csv"}}},
                                   {"cache_dir", "cache"},
                                   {"output_dir", "out"},
                                   {"seed", seed()}};
    write_file(root / "config.json", config.dump(2) + "\n");
    artifacts.push_back(root / "config.json");
    finish(root / "make_toy.manifest.json", artifacts);
  }

  void train_extractor_cmd() {
    Workspace& ws = workspace();
    const fs::path out = or_default(o_.out, ws.config().output_dir / "extractor.bin");
    const auto result = train_extractor(ws, parse_levels(o_.levels));
    intensity::save_model(out, result.model);
    const fs::path report = fs::path(out.string() + ".report.json");
    nlohmann::json doc = intensity::report_to_json(result.report);
    doc["alpha"] = result.model.config().alpha;
    write_file(report, doc.dump(2) + "\n");
    finish(fs::path(out.string() + ".manifest.json"), {out, report});
  }

  void calibrate_alpha() {
    Workspace& ws = workspace();
    require(!o_.model.empty(), ErrorCode::InvalidArgument, "calibrate-alpha needs --model");
    auto model = intensity::load_model(o_.model);
    const auto sel = calibrate_extractor(ws, model, parse_levels(o_.levels));
    const fs::path out = or_default(o_.out, o_.model);
    intensity::save_model(out, model);
    const fs::path report = fs::path(out.string() + ".alpha.json");
    write_file(report, nlohmann::json{{"alpha", sel.alpha}, {"grid", sel.grid}, {"kl", sel.kl}}.dump(2) + "\n");
    finish(fs::path(out.string() + ".alpha.manifest.json"), {out, report});
  }

  void extract_hed_cmd() {
    Workspace& ws = workspace();
    const auto model = load_extractor(o_.model);
    if (!model) fail(ErrorCode::MissingModel, "extract-hed needs --model");
    std::vector<std::string> ids = o_.ids;
    if (ids.empty())
      for (const auto& r : ws.index().records()) ids.push_back(r.id);
    const fs::path dir = or_default(o_.out, ws.config().cache_dir / "hed");
    std::vector<fs::path> artifacts;
    for (const auto& id : aligned_ids(ids)) {
      const fs::path file = dir / (id + ".json");
      write_file(file, hed::serialize_hed(extract_utterance_hed(ws, *model, id)));
      artifacts.push_back(file);
    }
    finish(dir / "manifest.json", artifacts);
  }

  void train_tts() {
    Workspace& ws = workspace();
    const auto extractor = load_extractor(o_.extractor);
    const auto split = corpus::split_dataset(ws.index(), ws.config().seed);
    const auto ids = aligned_ids(split.train_ids());
    require(!ids.empty(), ErrorCode::InsufficientData, "no aligned training utterances");
    const auto inventory = tts::PhoneInventory::arpabet();
    const auto examples = tts_examples(ws, inventory, ids, hed_source(extractor ? &*extractor : nullptr));
    Rng rng(ws.config().seed);
    tts::AcousticModel model(acoustic_preset(ws.config().tts_preset), inventory, rng);
    auto tc = ws.config().tts_training;
    if (o_.steps) tc.steps = *o_.steps;
    const auto rep = tts::train_acoustic_model(model, examples, tc);
    const fs::path out = or_default(o_.out, ws.config().output_dir / "acoustic.bin");
    tts::save_acoustic_model(out, model);
    const fs::path report = fs::path(out.string() + ".report.json");
    write_file(report, tts::report_to_json(rep).dump() + "\n");
    finish(fs::path(out.string() + ".manifest.json"), {out, report});
  }

  void write_synthesis(const fs::path& wav, const tts::SynthesisResult& r, const std::string& id,
                       std::vector<fs::path>& artifacts) {
    write_wav(wav, r.waveform);
    FrameMatrix mel;
    mel.utterance_id = id;
    mel.frame_rate = 16000.0 / 256.0;
    mel.matrix = r.mel.data.transpose();
    const fs::path mel_file = fs::path(wav).replace_extension(".mel.fmat");
    write_frame_matrix(mel_file, mel);
    artifacts.push_back(wav);
    artifacts.push_back(mel_file);
  }

  void synthesize_cmd() {
    require(!o_.out.empty(), ErrorCode::InvalidArgument, "synthesize needs --out");
    require(o_.text.empty() != o_.utterance.empty(), ErrorCode::InvalidArgument,
            "synthesize needs exactly one of --text and --utterance");
    const auto model = load_acoustic();
    tts::SynthesisRequest req;
    std::string id = o_.utterance;
    if (!o_.utterance.empty()) {
      const auto extractor = load_extractor(o_.extractor);
      const auto base = hed_source(extractor ? &*extractor : nullptr)(id);
      req = utterance_request(workspace(), model, id, base, seed());
    } else {
      id = "text";
      const auto lexicon = o_.lexicon.empty() ? tts::Lexicon::builtin() : tts::Lexicon::load(o_.lexicon);
      req.phonemes = tts::text_to_phonemes(o_.text, lexicon);
      req.hed = tts::neutral_hed(req.phonemes, id);
      req.speaker_embedding = tts::pseudo_speaker_embedding(o_.speaker, model.config().speaker_dim);
      req.seed = seed();
      if (!o_.config.empty()) {
        req.n_ode_steps = workspace().config().n_ode_steps;
        req.temperature = workspace().config().temperature;
      }
    }
    if (!o_.hed_file.empty()) {
      req.hed = hed::deserialize_hed(read_file(o_.hed_file));
      require(req.hed.num_phones() == static_cast<int>(req.phonemes.size()), ErrorCode::LengthMismatch,
              "HED has " + std::to_string(req.hed.num_phones()) + " rows for " +
                  std::to_string(req.phonemes.size()) + " phonemes");
    }
    if (o_.steps) req.n_ode_steps = *o_.steps;
    const auto result = tts::synthesize(&model, req);
    std::vector<fs::path> artifacts;
    write_synthesis(o_.out, result, id, artifacts);
    finish(fs::path(o_.out + ".manifest.json"), artifacts);
  }

  void sweep() {
    Workspace& ws = workspace();
    require(!o_.utterance.empty(), ErrorCode::InvalidArgument, "sweep needs --utterance");
    const auto level = parse_level(o_.level);
    if (!level) fail(ErrorCode::InvalidValue, "unknown level '" + o_.level + "'");
    const Emotion target = parse_target(o_.emotion);
    const auto model = load_acoustic();
    const auto extractor = load_extractor(o_.extractor);
    const auto base = hed_source(extractor ? &*extractor : nullptr)(o_.utterance);
    const auto values = hed::default_sweep_values();
    const auto heds = hed::intensity_sweep(base, *level, o_.begin, o_.end, intensity_index(target), values);
    const fs::path dir = or_default(o_.out, ws.config().output_dir / "sweep");
    std::vector<fs::path> artifacts;
    std::map<double, Waveform> waves;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto result = tts::synthesize(&model, utterance_request(ws, model, o_.utterance, heds[i], seed()));
      write_synthesis(dir / (o_.utterance + "_" + std::string(emotion_name(target)) + "_" + format_value(values[i]) +
                             ".wav"),
                      result, o_.utterance, artifacts);
      waves[values[i]] = result.waveform;
    }
    const auto table = eval::prosody_trend_analysis([&](Emotion, double v) { return waves.at(v); }, {target}, values);
    write_file(dir / "trends.csv", eval::trend_table_csv(table));
    write_file(dir / "trends.json", eval::trends_to_json(table).dump(2) + "\n");
    artifacts.push_back(dir / "trends.csv");
    artifacts.push_back(dir / "trends.json");
    finish(dir / "manifest.json", artifacts);
  }

  void evaluate() {
    Workspace& ws = workspace();
    const auto model = load_acoustic();
    const auto extractor = load_extractor(o_.extractor);
    const auto heds = hed_source(extractor ? &*extractor : nullptr);
    const auto split = corpus::split_dataset(ws.index(), ws.config().seed);
    auto test = aligned_ids(split.test_ids());
    if (test.empty()) fail(ErrorCode::EmptyTestSet, "no aligned test utterances");

    nlohmann::json doc = {{"system", o_.system}};
    eval::MetricAccumulator acc;
    std::vector<tts::SynthesisRequest> cases;
    for (const auto& id : test) {
      auto req = utterance_request(ws, model, id, heds(id), seed());
      acc.add(ws.audio(id), tts::synthesize(&model, req).waveform);
      if (static_cast<int>(cases.size()) < o_.max_cases) {
        req.hed = tts::neutral_hed(req.phonemes, id);
        cases.push_back(std::move(req));
      }
    }
    doc["metrics"] = eval::metric_report_to_json(acc.report());

    const std::vector<Emotion> targets(kIntensityOrder.begin(), kIntensityOrder.end());
    if (extractor && extractor->config().input_dim == dsp::kNumFunctionals) {
      const auto rep = model_controllability(model, functional_probe(*extractor), cases, targets,
                                             hed::default_sweep_values());
      doc["controllability"] = eval::controllability_to_json(rep);
    } else {
      doc["controllability"] = nullptr;
      doc["controllability_skipped"] = "needs an utterance-functional extractor (--extractor)";
    }

    std::vector<hed::HierarchicalED> all;
    std::vector<std::string> speakers;
    for (const auto& id : aligned_ids(split.train_ids())) {
      all.push_back(heds(id));
      speakers.push_back(ws.index().at(id).speaker_id);
    }
    try {
      doc["leakage"] = eval::disentanglement_to_json(eval::speaker_leakage(all, speakers, seed()));
    } catch (const Error& e) {
      doc["leakage"] = nullptr;
      doc["leakage_skipped"] = e.what();
    }

    const auto& first = cases.front();
    std::map<std::pair<Emotion, double>, Waveform> memo;
    const auto table = eval::prosody_trend_analysis(
        [&](Emotion e, double v) {
          auto it = memo.find({e, v});
          if (it != memo.end()) return it->second;
          tts::SynthesisRequest r = first;
          r.hed = hed::intensity_sweep(first.hed, Level::Utterance, 0, 1, intensity_index(e), {v}).front();
          return memo[{e, v}] = tts::synthesize(&model, r).waveform;
        },
        targets, hed::default_sweep_values());
    doc["trends"] = eval::trends_to_json(table);

    const fs::path dir = or_default(o_.out, ws.config().output_dir / "evaluation");
    write_file(dir / "evaluation.json", doc.dump(2) + "\n");
    finish(dir / "manifest.json", {dir / "evaluation.json"});
  }

  void report() {
    require(!o_.inputs.empty(), ErrorCode::InvalidArgument, "report needs --input");
    require(!o_.out.empty(), ErrorCode::InvalidArgument, "report needs --out");
    std::map<std::string, eval::MetricReport> metrics;
    std::map<std::string, eval::ControllabilityReport> control;
    std::map<std::string, eval::DisentanglementReport> leakage;
    std::optional<eval::TrendTable> trends;
    for (const auto& in : o_.inputs) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(read_file(in));
        const std::string name = doc.at("system").get<std::string>();
        metrics[name] = eval::metric_report_from_json(doc.at("metrics"));
        if (!doc.at("controllability").is_null()) control[name] = eval::controllability_from_json(doc.at("controllability"));
        if (!doc.at("leakage").is_null()) leakage[name] = eval::disentanglement_from_json(doc.at("leakage"));
        if (!trends) trends = eval::trends_from_json(doc.at("trends"));
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::CorruptPayload, in + ": " + e.what());
      }
    }
    const fs::path dir = o_.out;
    std::vector<fs::path> artifacts = {dir / "metrics.csv", dir / "controllability.csv", dir / "leakage.csv"};
    write_file(artifacts[0], eval::metric_table_csv(metrics));
    write_file(artifacts[1], eval::controllability_table_csv(control));
    write_file(artifacts[2], eval::leakage_table_csv(leakage));
    if (trends) {
      write_file(dir / "trends.csv", eval::trend_table_csv(*trends));
      write_file(dir / "trends.svg", eval::trend_plot_svg(*trends));
      artifacts.push_back(dir / "trends.csv");
      artifacts.push_back(dir / "trends.svg");
    }
    finish(dir / "manifest.json", artifacts);
  }

  void serve() {
    Workspace& ws = workspace();
    const auto extractor = load_extractor(o_.extractor);
    std::optional<tts::AcousticModel> acoustic;
    if (!o_.model.empty() || ws.config().acoustic_checkpoint) acoustic = load_acoustic();
    const fs::path state = or_default(o_.out, ws.config().cache_dir / "service");
    ApiService api(ws, extractor ? &*extractor : nullptr, acoustic ? &*acoustic : nullptr, state);
    RunManifest m;
    m.command = command_;
    m.config_hash = config_hash(ws.config());
    m.seed = seed();
    m.arguments = arguments_;
    write_manifest(state / "manifest.json", m);
    HttpServer server(api);
    const int port = server.bind(o_.host, o_.port);
    out_ << nlohmann::json{{"listening", o_.host + ":" + std::to_string(port)}}.dump() << std::endl;
    server.run();
  }

  const Options& o_;
  std::string command_;
  nlohmann::json arguments_;
  std::ostream& out_;
  std::optional<Workspace> ws_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical emotion distribution extraction, editing and synthesis", "hedtts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;

  auto config = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--config", o.config, "job configuration file");
    if (required) opt->required();
  };
  auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "override the configured seed"); };

  auto* make_toy = app.add_subcommand("make-toy", "write a synthetic corpus with ground-truth HEDs and a config");
  make_toy->add_option("--out", o.out, "corpus directory")->required();
  make_toy->add_option("--speakers", o.speakers, "number of speakers");
  make_toy->add_option("--per-cell", o.per_cell, "utterances per speaker and emotion");
  seed(make_toy);

  auto* train_ex = app.add_subcommand("train-extractor", "train the emotion intensity extractor");
  config(train_ex, true);
  train_ex->add_option("--levels", o.levels, "comma-separated training levels");
  train_ex->add_option("--out", o.out, "checkpoint path");

  auto* calib = app.add_subcommand("calibrate-alpha", "re-select the softmax temperature of an extractor");
  config(calib, true);
  calib->add_option("--model", o.model, "extractor checkpoint")->required();
  calib->add_option("--levels", o.levels, "comma-separated calibration levels");
  calib->add_option("--out", o.out, "output checkpoint (default: overwrite)");

  auto* extract = app.add_subcommand("extract-hed", "extract HEDs for corpus utterances");
  config(extract, true);
  extract->add_option("--model", o.model, "extractor checkpoint");
  extract->add_option("--ids", o.ids, "utterance ids (default: all)")->delimiter(',');
  extract->add_option("--out", o.out, "output directory (default: <cache_dir>/hed)");

  auto* train_tts = app.add_subcommand("train-tts", "train the HED-conditioned acoustic model");
  config(train_tts, true);
  train_tts->add_option("--extractor", o.extractor, "extractor checkpoint for utterances without cached HEDs");
  train_tts->add_option("--hed-source", o.hed_source, "auto, cache, extractor or neutral");
  train_tts->add_option("--steps", o.steps, "override tts.steps");
  train_tts->add_option("--out", o.out, "checkpoint path");

  auto* synth = app.add_subcommand("synthesize", "synthesize one utterance to wav + mel");
  config(synth, false);
  synth->add_option("--model", o.model, "acoustic checkpoint");
  synth->add_option("--utterance", o.utterance, "corpus utterance id");
  synth->add_option("--text", o.text, "text to synthesize");
  synth->add_option("--speaker", o.speaker, "speaker id for --text");
  synth->add_option("--lexicon", o.lexicon, "pronunciation lexicon for --text");
  synth->add_option("--hed", o.hed_file, "HED file overriding the base HED");
  synth->add_option("--hed-source", o.hed_source, "auto, cache, extractor or neutral");
  synth->add_option("--extractor", o.extractor, "extractor checkpoint");
  synth->add_option("--steps", o.steps, "ODE steps");
  synth->add_option("--out", o.out, "output wav")->required();
  seed(synth);

  auto* sweep = app.add_subcommand("sweep", "synthesize an intensity sweep and tabulate prosody trends");
  config(sweep, true);
  sweep->add_option("--model", o.model, "acoustic checkpoint");
  sweep->add_option("--utterance", o.utterance, "corpus utterance id")->required();
  sweep->add_option("--level", o.level, "phoneme, word or utterance");
  sweep->add_option("--emotion", o.emotion, "Angry, Happy, Sad or Surprise");
  sweep->add_option("--begin", o.begin, "first target index");
  sweep->add_option("--end", o.end, "one past the last target index");
  sweep->add_option("--hed-source", o.hed_source, "auto, cache, extractor or neutral");
  sweep->add_option("--extractor", o.extractor, "extractor checkpoint");
  sweep->add_option("--out", o.out, "output directory");
  seed(sweep);

  auto* evaluate = app.add_subcommand("evaluate", "objective metrics, controllability, leakage and trends");
  config(evaluate, true);
  evaluate->add_option("--model", o.model, "acoustic checkpoint");
  evaluate->add_option("--extractor", o.extractor, "extractor checkpoint (probe and HED source)");
  evaluate->add_option("--hed-source", o.hed_source, "auto, cache, extractor or neutral");
  evaluate->add_option("--system", o.system, "system name in the report");
  evaluate->add_option("--max-cases", o.max_cases, "utterances in the controllability sweep");
  evaluate->add_option("--out", o.out, "output directory");
  seed(evaluate);

  auto* report = app.add_subcommand("report", "render evaluation JSON as CSV tables and an SVG plot");
  report->add_option("--input", o.inputs, "evaluation.json files")->required();
  report->add_option("--out", o.out, "output directory")->required();

  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  config(serve, true);
  serve->add_option("--model", o.model, "acoustic checkpoint");
  serve->add_option("--extractor", o.extractor, "extractor checkpoint");
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--port", o.port, "port");
  serve->add_option("--out", o.out, "session/audio state directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const auto parsed = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (parsed.empty() ? app.help() : parsed.front()->help());
    return 2;
  }

  try {
    Runner runner(o, app.get_subcommands().front()->get_name(), args_json(argc, argv), out);
    runner.run();
  } catch (const Error& e) {
    err << nlohmann::json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hedtts::service
