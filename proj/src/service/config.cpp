// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/service/config.hpp"

#include "hedtts/common/error.hpp"
#include "hedtts/common/hash.hpp"
#include "hedtts/common/matrix_file.hpp"

namespace hedtts::service {
namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
void read(const nlohmann::json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

intensity::SampleMode parse_mode(const std::string& s) {
  if (s == "functionals") return intensity::SampleMode::Functionals;
  if (s == "frames") return intensity::SampleMode::Frames;
  fail(ErrorCode::InvalidValue, "unknown feature mode '" + s + "'");
}

}  // namespace

JobConfig config_from_json(const nlohmann::json& doc, const fs::path& base_dir) {
  JobConfig c;
  c.source = doc;
  try {
    const auto& corpus = doc.at("corpus");
    c.corpus_root = resolve(base_dir, corpus.at("root").get<std::string>());
    if (corpus.contains("manifest")) c.manifest = resolve(c.corpus_root, corpus["manifest"].get<std::string>());
    if (corpus.contains("alignment_dir"))
      c.alignment_dir = resolve(c.corpus_root, corpus["alignment_dir"].get<std::string>());
    read(corpus, "allow_resample", c.allow_resample);

    for (Level level : kAllLevels) c.features[level] = FeatureSource{};
    if (doc.contains("features"))
      for (const auto& [name, spec] : doc["features"].items()) {
        const auto level = parse_level(name);
        require(level.has_value(), ErrorCode::InvalidValue, "unknown level '" + name + "' in features");
        FeatureSource p;
        read(spec, "provider", p.kind);
        require(p.kind == "builtin" || p.kind == "external", ErrorCode::InvalidValue,
                "feature provider must be 'builtin' or 'external'");
        if (spec.contains("dir")) p.dir = resolve(base_dir, spec["dir"].get<std::string>());
        if (spec.contains("mode")) p.mode = parse_mode(spec["mode"].get<std::string>());
        if (p.kind == "external") {
          require(!p.dir.empty(), ErrorCode::InvalidValue, "external features need a dir");
          if (!spec.contains("mode")) p.mode = intensity::SampleMode::Frames;
        }
        c.features[*level] = p;
      }

    if (doc.contains("extractor")) {
      const auto& e = doc["extractor"];
      if (e.contains("head")) c.extractor.head_type = intensity::parse_head(e["head"].get<std::string>());
      read(e, "hidden_dim", c.extractor.hidden_dim);
      read(e, "grl", c.extractor.grl_enabled);
      read(e, "grl_scale", c.extractor.grl_scale);
      if (e.contains("adversary")) c.extractor.adversary_target = intensity::parse_adversary(e["adversary"].get<std::string>());
      read(e, "epochs", c.extractor_training.epochs);
      read(e, "batch_size", c.extractor_training.batch_size);
      read(e, "learning_rate", c.extractor_training.learning_rate);
      read(e, "patience", c.extractor_training.patience);
      read(e, "stabilization_epochs", c.extractor_training.stabilization_epochs);
    }
    if (doc.contains("tts")) {
      const auto& t = doc["tts"];
      read(t, "preset", c.tts_preset);
      require(c.tts_preset == "toy" || c.tts_preset == "full", ErrorCode::InvalidValue,
              "tts.preset must be 'toy' or 'full'");
      read(t, "steps", c.tts_training.steps);
      read(t, "batch_size", c.tts_training.batch_size);
      read(t, "learning_rate", c.tts_training.learning_rate);
    }
    if (doc.contains("synthesis")) {
      read(doc["synthesis"], "n_ode_steps", c.n_ode_steps);
      read(doc["synthesis"], "temperature", c.temperature);
    }
    if (doc.contains("checkpoints")) {
      const auto& k = doc["checkpoints"];
      if (k.contains("extractor")) c.extractor_checkpoint = resolve(base_dir, k["extractor"].get<std::string>());
      if (k.contains("acoustic")) c.acoustic_checkpoint = resolve(base_dir, k["acoustic"].get<std::string>());
    }
    c.cache_dir = resolve(base_dir, doc.value("cache_dir", std::string("cache")));
    c.output_dir = resolve(base_dir, doc.value("output_dir", std::string("out")));
    read(doc, "seed", c.seed);
    read(doc, "device", c.device);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidValue, std::string("config: ") + e.what());
  }
  c.extractor_training.seed = c.seed;
  c.tts_training.seed = c.seed;

  if (!fs::is_directory(c.corpus_root)) fail(ErrorCode::NotFound, "corpus root " + c.corpus_root.string() + " missing");
  if (c.manifest && !fs::exists(*c.manifest)) fail(ErrorCode::NotFound, "manifest " + c.manifest->string() + " missing");
  for (const auto& [level, p] : c.features)
    if (p.kind == "external" && !fs::is_directory(p.dir))
      fail(ErrorCode::NotFound, "feature dir " + p.dir.string() + " missing");
  return c;
}

JobConfig load_config(const fs::path& file) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidValue, "config " + file.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc, fs::absolute(file).parent_path());
}

std::string config_hash(const JobConfig& config) { return to_hex(fnv1a(config.source.dump())); }

}  // namespace hedtts::service
