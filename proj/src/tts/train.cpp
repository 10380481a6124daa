// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/tts/train.hpp"

#include <cmath>
#include <map>

#include "hedtts/common/error.hpp"
#include "hedtts/dsp/mel.hpp"
#include "hedtts/nn/optim.hpp"
#include "hedtts/tts/flow.hpp"

namespace hedtts::tts {

TtsExample make_example(const PhoneInventory& inventory, const corpus::AlignmentTrack& track, const Waveform& audio,
                        const Matrix& hed, const Vector& speaker_embedding, const std::string& speaker_id) {
  require(!track.phones.empty(), ErrorCode::EmptyTrack, "alignment of " + track.utterance_id + " has no phones");
  TtsExample ex;
  ex.utterance_id = track.utterance_id;
  ex.speaker_id = speaker_id;
  ex.phone_ids = inventory.encode(phonemes_from_alignment(track).symbols);
  ex.durations = corpus::phone_frame_durations(track);
  if (hed.rows() != static_cast<Eigen::Index>(track.phones.size()))
    fail(ErrorCode::LengthMismatch, "HED rows differ from the phone count of " + track.utterance_id);
  ex.hed = hed;
  ex.speaker_embedding = speaker_embedding;

  const Matrix mel = dsp::compute_mel(audio).data.transpose();
  const int start = corpus::seconds_to_frames(track.phones.front().start);
  int total = 0;
  for (int d : ex.durations) total += d;
  const Eigen::Index available = mel.rows() - start;
  if (available < total - 2)
    fail(ErrorCode::AlignmentMismatch, "alignment of " + track.utterance_id + " needs " + std::to_string(total) +
                                           " frames, audio has " + std::to_string(available));
  ex.mel.resize(total, mel.cols());
  for (int r = 0; r < total; ++r) ex.mel.row(r) = mel.row(std::min<Eigen::Index>(start + r, mel.rows() - 1));
  return ex;
}

nlohmann::json train_config_to_json(const TtsTrainConfig& c) {
  return {{"steps", c.steps},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"grad_clip", c.grad_clip},
          {"seed", c.seed},
          {"cross_utterance_speaker", c.cross_utterance_speaker},
          {"fit_mel_norm", c.fit_mel_norm}};
}

TtsTrainConfig train_config_from_json(const nlohmann::json& doc) {
  TtsTrainConfig c;
  c.steps = doc.value("steps", c.steps);
  c.batch_size = doc.value("batch_size", c.batch_size);
  c.learning_rate = doc.value("learning_rate", c.learning_rate);
  c.grad_clip = doc.value("grad_clip", c.grad_clip);
  c.seed = doc.value("seed", c.seed);
  c.cross_utterance_speaker = doc.value("cross_utterance_speaker", c.cross_utterance_speaker);
  c.fit_mel_norm = doc.value("fit_mel_norm", c.fit_mel_norm);
  return c;
}

double TtsTrainReport::mean_cfm(std::size_t begin, std::size_t end) const {
  end = std::min(end, steps.size());
  require(begin < end, ErrorCode::InvalidArgument, "empty step range");
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += steps[i].cfm_loss;
  return s / static_cast<double>(end - begin);
}

nlohmann::json report_to_json(const TtsTrainReport& report) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : report.steps) steps.push_back({s.duration_loss, s.prior_loss, s.cfm_loss});
  return {{"columns", {"duration", "prior", "cfm"}}, {"steps", steps}};
}

TtsLosses example_losses(nn::Tape& tape, const AcousticModel& model, const TtsExample& ex, const Vector& speaker,
                         Rng& rng) {
  const nn::Var cond = model.conditioning(tape, model.encode_text(tape, ex.phone_ids), speaker, ex.hed);
  Matrix log_target(static_cast<Eigen::Index>(ex.durations.size()), 1);
  for (std::size_t i = 0; i < ex.durations.size(); ++i)
    log_target(static_cast<Eigen::Index>(i), 0) = std::log(static_cast<double>(ex.durations[i]));
  const Matrix x1 = model.mel_norm.normalize(ex.mel);
  const nn::Var mu = model.mean_mel(cond, ex.durations);
  TtsLosses out;
  out.duration = nn::mse(model.log_durations(cond), tape.constant(log_target));
  out.prior = nn::mse(mu, tape.constant(x1));
  out.cfm = cfm_loss(model.decoder(), x1, mu, rng, model.config().sigma_min);
  return out;
}

TtsTrainReport train_acoustic_model(AcousticModel& model, const std::vector<TtsExample>& examples,
                                    const TtsTrainConfig& config) {
  require(!examples.empty(), ErrorCode::InsufficientData, "no training examples");
  require(config.batch_size >= 1 && config.steps >= 0, ErrorCode::InvalidArgument, "bad training schedule");
  if (config.fit_mel_norm) {
    std::vector<Matrix> mels;
    for (const auto& ex : examples) mels.push_back(ex.mel);
    model.mel_norm = fit_mel_norm(mels);
  }
  std::map<std::string, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < examples.size(); ++i) by_speaker[examples[i].speaker_id].push_back(i);

  Rng rng(config.seed);
  Rng order = rng.fork(1);
  Rng noise = rng.fork(2);
  nn::AdamConfig adam_cfg;
  adam_cfg.lr = config.learning_rate;
  nn::Adam adam(model.parameters(), adam_cfg);
  TtsTrainReport report;
  const double inv_batch = 1.0 / config.batch_size;
  for (int step = 0; step < config.steps; ++step) {
    adam.zero_grad();
    nn::Tape tape;
    std::vector<nn::Var> terms;
    TtsStepRecord rec;
    for (int b = 0; b < config.batch_size; ++b) {
      const TtsExample& ex = examples[order.index(examples.size())];
      const Vector* speaker = &ex.speaker_embedding;
      if (config.cross_utterance_speaker) {
        const auto& pool = by_speaker.at(ex.speaker_id);
        speaker = &examples[pool[order.index(pool.size())]].speaker_embedding;
      }
      const TtsLosses l = example_losses(tape, model, ex, *speaker, noise);
      terms.push_back(nn::add(nn::add(l.duration, l.prior), l.cfm));
      rec.duration_loss += l.duration.scalar() * inv_batch;
      rec.prior_loss += l.prior.scalar() * inv_batch;
      rec.cfm_loss += l.cfm.scalar() * inv_batch;
    }
    nn::Var total = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) total = nn::add(total, terms[i]);
    tape.backward(nn::scale(total, inv_batch));
    if (config.grad_clip > 0) nn::clip_grad_norm(adam.params(), config.grad_clip);
    adam.step();
    report.steps.push_back(rec);
  }
  return report;
}

double duration_frame_error(const AcousticModel& model, const std::vector<TtsExample>& examples) {
  require(!examples.empty(), ErrorCode::InsufficientData, "no examples");
  double err = 0.0;
  std::size_t n = 0;
  for (const auto& ex : examples) {
    nn::Tape tape;
    const nn::Var cond =
        model.conditioning(tape, model.encode_text(tape, ex.phone_ids), ex.speaker_embedding, ex.hed);
    const auto pred = durations_from_log(model.log_durations(cond).value());
    for (std::size_t i = 0; i < pred.size(); ++i) err += std::abs(pred[i] - ex.durations[i]);
    n += pred.size();
  }
  return err / static_cast<double>(n);
}

}  // namespace hedtts::tts
