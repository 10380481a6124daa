// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/tts/synthesize.hpp"

#include "hedtts/common/error.hpp"
#include "hedtts/tts/flow.hpp"

namespace hedtts::tts {

hed::HierarchicalED neutral_hed(const PhonemeSequence& phonemes, const std::string& utterance_id) {
  hed::HierarchicalED h;
  h.utterance_id = utterance_id;
  h.phones = phonemes.symbols;
  h.word_index = phonemes.word_index;
  h.matrix = Matrix::Zero(static_cast<Eigen::Index>(phonemes.size()), hed::kHedColumns);
  h.provenance = hed::Provenance::Manual;
  return h;
}

Matrix request_mean_mel(const AcousticModel& model, const SynthesisRequest& req, std::vector<int>* durations) {
  if (req.phonemes.symbols.empty()) fail(ErrorCode::EmptyInput, "nothing to synthesise: empty phoneme sequence");
  const auto n = static_cast<Eigen::Index>(req.phonemes.size());
  if (req.hed.matrix.rows() != n)
    fail(ErrorCode::LengthMismatch, "HED has " + std::to_string(req.hed.matrix.rows()) + " rows but the text has " +
                                        std::to_string(n) + " phonemes");
  const std::vector<int> ids = model.inventory().encode(req.phonemes.symbols);
  nn::Tape tape;
  const nn::Var cond = model.conditioning(tape, model.encode_text(tape, ids), req.speaker_embedding, req.hed.matrix);
  std::vector<int> d;
  if (req.durations) {
    if (static_cast<Eigen::Index>(req.durations->size()) != n)
      fail(ErrorCode::LengthMismatch, "forced durations do not match the phoneme count");
    d = *req.durations;
  } else {
    d = durations_from_log(model.log_durations(cond).value(), req.length_scale);
  }
  Matrix mu = model.mean_mel(cond, d).value();
  if (durations) *durations = std::move(d);
  return mu;
}

SynthesisResult synthesize(const AcousticModel* model, const SynthesisRequest& req, const GriffinLimConfig& vocoder) {
  if (model == nullptr) fail(ErrorCode::ModelNotLoaded, "no acoustic model loaded");
  require(req.n_ode_steps >= 1, ErrorCode::InvalidValue, "n_ode_steps must be at least 1");
  SynthesisResult out;
  const Matrix mu = request_mean_mel(*model, req, &out.durations);
  Rng rng(req.seed);
  const Matrix x = sample_flow(model->decoder(), mu, req.n_ode_steps, rng, req.temperature);
  out.mel.data = model->mel_norm.denormalize(x).transpose();
  if (req.vocode) {
    GriffinLimConfig gl = vocoder;
    gl.seed = req.seed;
    out.waveform = vocode(out.mel, gl);
  }
  return out;
}

}  // namespace hedtts::tts
