// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hedtts/corpus/corpus.hpp"
#include "hedtts/corpus/split.hpp"
#include "hedtts/dsp/features.hpp"
#include "hedtts/eval/controllability.hpp"
#include "hedtts/hed/hed.hpp"
#include "hedtts/intensity/train.hpp"
#include "hedtts/service/config.hpp"
#include "hedtts/tts/synthesize.hpp"
#include "hedtts/tts/train.hpp"

namespace hedtts::service {

/// A loaded corpus plus the per-level feature sources of a job.
class Workspace {
 public:
  explicit Workspace(JobConfig config);

  const JobConfig& config() const { return config_; }
  const corpus::CorpusIndex& index() const { return index_; }

  /// Throws NotFound for unknown ids or utterances without an alignment.
  corpus::AlignmentTrack alignment(const std::string& id) const;
  Waveform audio(const std::string& id) const;
  dsp::FrameFeatures features(Level level, const std::string& id) const;

  /// Speaker embedding for conditioning: `<cache_dir>/speakers/<id>.json`
  /// when present, otherwise the deterministic pseudo embedding.
  Vector speaker_embedding(const std::string& speaker_id, const std::string& utterance_id, int dim) const;

 private:
  JobConfig config_;
  corpus::CorpusIndex index_;
};

/// Adversary labels: speakers in sorted order, or gender (F = 0, M = 1).
std::map<std::string, int> adversary_labels(const corpus::CorpusIndex& index, intensity::AdversaryTarget target);

/// Training segments of the given levels for each utterance.
std::vector<intensity::SegmentSample> extractor_samples(const Workspace& ws, const std::vector<std::string>& ids,
                                                        const std::vector<Level>& levels,
                                                        intensity::AdversaryTarget target);

/// Split, build segments, train, calibrate.
intensity::TrainResult train_extractor(const Workspace& ws, const std::vector<Level>& levels);

/// Re-runs alpha selection for a trained model on its training segments.
intensity::AlphaSelection calibrate_extractor(const Workspace& ws, intensity::IntensityModel& model,
                                              const std::vector<Level>& levels);

/// HED of one corpus utterance from a single extractor applied at all levels.
hed::HierarchicalED extract_utterance_hed(const Workspace& ws, const intensity::IntensityModel& model,
                                          const std::string& id);

/// `<cache_dir>/hed/<id>.json` if present.
std::optional<hed::HierarchicalED> cached_hed(const Workspace& ws, const std::string& id);

tts::AcousticConfig acoustic_preset(const std::string& name);

using HedSource = std::function<hed::HierarchicalED(const std::string& id)>;

std::vector<tts::TtsExample> tts_examples(const Workspace& ws, const tts::PhoneInventory& inventory,
                                          const std::vector<std::string>& ids, const HedSource& heds);

/// Synthesis request for a corpus utterance's phonemes and speaker.
tts::SynthesisRequest utterance_request(const Workspace& ws, const tts::AcousticModel& model, const std::string& id,
                                        const hed::HierarchicalED& hed, std::uint64_t seed);

/// Utterance-level functionals of a whole recording (one row).
Matrix utterance_functionals(const Waveform& wave);

/// Probe from an intensity model reading whole-utterance functionals.
eval::Probe functional_probe(const intensity::IntensityModel& model);

/// Controllability of an acoustic model: for each request, sweep the
/// utterance-level column of every target emotion over `sweep` (other
/// entries unchanged) and score the probe.
eval::ControllabilityReport model_controllability(const tts::AcousticModel& model, const eval::Probe& probe,
                                                  const std::vector<tts::SynthesisRequest>& cases,
                                                  const std::vector<Emotion>& targets,
                                                  const std::vector<double>& sweep);

}  // namespace hedtts::service
