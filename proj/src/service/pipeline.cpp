// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/service/pipeline.hpp"

#include <algorithm>
#include <set>

#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/corpus/alignment.hpp"
#include "hedtts/intensity/calibration.hpp"
#include "hedtts/tts/speaker.hpp"

namespace hedtts::service {
namespace fs = std::filesystem;

Workspace::Workspace(JobConfig config) : config_(std::move(config)) {
  corpus::LoadOptions opts;
  opts.allow_resample = config_.allow_resample;
  opts.alignment_dir = config_.alignment_dir;
  index_ = corpus::load_corpus(config_.corpus_root, config_.manifest, opts);
}

corpus::AlignmentTrack Workspace::alignment(const std::string& id) const {
  const auto& rec = index_.at(id);
  if (!rec.alignment_path) fail(ErrorCode::NotFound, "no alignment for " + id);
  return corpus::parse_alignment(*rec.alignment_path);
}

Waveform Workspace::audio(const std::string& id) const { return corpus::load_audio(index_.at(id)); }

dsp::FrameFeatures Workspace::features(Level level, const std::string& id) const {
  const auto& src = config_.features.at(level);
  const auto& rec = index_.at(id);
  if (src.kind == "external") return dsp::from_external(corpus::load_external_embedding(src.dir / (id + ".fmat"), rec));
  return dsp::compute_frame_features(corpus::load_audio(rec));
}

Vector Workspace::speaker_embedding(const std::string& speaker_id, const std::string& utterance_id, int dim) const {
  const fs::path file = config_.cache_dir / "speakers" / (utterance_id + ".json");
  if (fs::exists(file)) {
    Vector v = tts::load_speaker_embedding(file);
    require(v.size() == dim, ErrorCode::LengthMismatch, "speaker embedding for " + utterance_id + " has wrong size");
    return v;
  }
  return tts::pseudo_utterance_embedding(speaker_id, utterance_id, dim);
}

std::map<std::string, int> adversary_labels(const corpus::CorpusIndex& index, intensity::AdversaryTarget target) {
  std::map<std::string, int> out;
  if (target == intensity::AdversaryTarget::Gender) {
    for (const auto& r : index.records()) {
      require(r.gender != corpus::Gender::Unknown, ErrorCode::InvalidValue,
              "gender adversary needs a gender for " + r.id);
      out[r.id] = r.gender == corpus::Gender::Male ? 1 : 0;
    }
    return out;
  }
  const auto speakers = index.speakers();
  for (const auto& r : index.records())
    out[r.id] = static_cast<int>(std::lower_bound(speakers.begin(), speakers.end(), r.speaker_id) - speakers.begin());
  return out;
}

std::vector<intensity::SegmentSample> extractor_samples(const Workspace& ws, const std::vector<std::string>& ids,
                                                        const std::vector<Level>& levels,
                                                        intensity::AdversaryTarget target) {
  const auto labels = adversary_labels(ws.index(), target);
  std::vector<intensity::SegmentSample> out;
  for (const auto& id : ids) {
    const auto track = ws.alignment(id);
    const auto segments = corpus::slice_segments(track);
    const auto& rec = ws.index().at(id);
    for (Level level : levels) {
      const auto ff = ws.features(level, id);
      for (auto& s : intensity::segment_samples(ff, segments, rec.emotion_label, labels.at(id), id,
                                                ws.config().features.at(level).mode))
        if (s.level == level) out.push_back(std::move(s));
    }
  }
  return out;
}

intensity::TrainResult train_extractor(const Workspace& ws, const std::vector<Level>& levels) {
  const auto split = corpus::split_dataset(ws.index(), ws.config().seed);
  auto config = ws.config().extractor;
  const auto train = extractor_samples(ws, split.train_ids(), levels, config.adversary_target);
  const auto val = extractor_samples(ws, split.val_ids(), levels, config.adversary_target);
  require(!train.empty(), ErrorCode::InsufficientData, "no training segments");
  config.input_dim = static_cast<int>(train.front().frames.cols());
  std::set<int> classes;
  for (const auto& [id, c] : adversary_labels(ws.index(), config.adversary_target)) classes.insert(c);
  config.adversary_classes = std::max<int>(2, static_cast<int>(classes.size()));
  return intensity::train_intensity_model(train, val, config, ws.config().extractor_training);
}

intensity::AlphaSelection calibrate_extractor(const Workspace& ws, intensity::IntensityModel& model,
                                              const std::vector<Level>& levels) {
  const auto split = corpus::split_dataset(ws.index(), ws.config().seed);
  const auto train = extractor_samples(ws, split.train_ids(), levels, model.config().adversary_target);
  if (train.empty()) fail(ErrorCode::EmptyCalibrationSet, "no calibration segments");
  auto selection = intensity::select_alpha(intensity::batch_logits(model, train), model.config().head_type);
  model.mutable_config().alpha = selection.alpha;
  return selection;
}

hed::HierarchicalED extract_utterance_hed(const Workspace& ws, const intensity::IntensityModel& model,
                                          const std::string& id) {
  const auto track = ws.alignment(id);
  std::map<Level, dsp::FrameFeatures> features;
  std::map<Level, hed::LevelSource> sources;
  for (Level level : kAllLevels) features[level] = ws.features(level, id);
  for (Level level : kAllLevels) sources[level] = {&model, &features[level], ws.config().features.at(level).mode};
  return hed::extract_hed(track, sources);
}

std::optional<hed::HierarchicalED> cached_hed(const Workspace& ws, const std::string& id) {
  const fs::path file = ws.config().cache_dir / "hed" / (id + ".json");
  if (!fs::exists(file)) return std::nullopt;
  return hed::deserialize_hed(read_file(file));
}

tts::AcousticConfig acoustic_preset(const std::string& name) {
  if (name == "toy") return tts::AcousticConfig::toy();
  if (name == "full") return tts::AcousticConfig{};
  fail(ErrorCode::InvalidValue, "unknown acoustic preset '" + name + "'");
}

std::vector<tts::TtsExample> tts_examples(const Workspace& ws, const tts::PhoneInventory& inventory,
                                          const std::vector<std::string>& ids, const HedSource& heds) {
  std::vector<tts::TtsExample> out;
  for (const auto& id : ids) {
    const auto& rec = ws.index().at(id);
    const auto hed = heds(id);
    const int dim = acoustic_preset(ws.config().tts_preset).speaker_dim;
    out.push_back(tts::make_example(inventory, ws.alignment(id), ws.audio(id), hed.matrix,
                                    ws.speaker_embedding(rec.speaker_id, id, dim), rec.speaker_id));
  }
  return out;
}

tts::SynthesisRequest utterance_request(const Workspace& ws, const tts::AcousticModel& model, const std::string& id,
                                        const hed::HierarchicalED& hed, std::uint64_t seed) {
  const auto& rec = ws.index().at(id);
  tts::SynthesisRequest req;
  req.phonemes = tts::phonemes_from_alignment(ws.alignment(id));
  req.hed = hed;
  req.speaker_embedding = ws.speaker_embedding(rec.speaker_id, id, model.config().speaker_dim);
  req.n_ode_steps = ws.config().n_ode_steps;
  req.temperature = ws.config().temperature;
  req.seed = seed;
  return req;
}

Matrix utterance_functionals(const Waveform& wave) {
  const auto ff = dsp::compute_frame_features(wave);
  return dsp::functionals_of(ff.values).transpose();
}

eval::Probe functional_probe(const intensity::IntensityModel& model) {
  return [&model](const Waveform& wave) { return intensity::forward_intensity(model, utterance_functionals(wave)); };
}

eval::ControllabilityReport model_controllability(const tts::AcousticModel& model, const eval::Probe& probe,
                                                  const std::vector<tts::SynthesisRequest>& cases,
                                                  const std::vector<Emotion>& targets,
                                                  const std::vector<double>& sweep) {
  const eval::SweepSynth synth = [&](std::size_t c, Emotion target, double v) {
    tts::SynthesisRequest req = cases[c];
    const auto variants =
        hed::intensity_sweep(req.hed, Level::Utterance, 0, 1, intensity_index(target), std::vector<double>{v});
    req.hed = variants.front();
    return tts::synthesize(&model, req).waveform;
  };
  return eval::controllability_score(probe, synth, cases.size(), targets, sweep);
}

}  // namespace hedtts::service
