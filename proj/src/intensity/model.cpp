// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/intensity/model.hpp"

#include "hedtts/common/emotion.hpp"
#include "hedtts/common/error.hpp"

namespace hedtts::intensity {

std::string_view head_name(HeadType h) { return h == HeadType::SER ? "SER" : "EPR"; }

HeadType parse_head(std::string_view s) {
  if (s == "SER" || s == "ser") return HeadType::SER;
  if (s == "EPR" || s == "epr") return HeadType::EPR;
  fail(ErrorCode::InvalidValue, "unknown head type '" + std::string(s) + "'");
}

std::string_view adversary_name(AdversaryTarget t) { return t == AdversaryTarget::Speaker ? "speaker" : "gender"; }

AdversaryTarget parse_adversary(std::string_view s) {
  if (s == "speaker") return AdversaryTarget::Speaker;
  if (s == "gender") return AdversaryTarget::Gender;
  fail(ErrorCode::InvalidValue, "unknown adversary target '" + std::string(s) + "'");
}

nlohmann::json config_to_json(const IntensityModelConfig& c) {
  return {{"input_dim", c.input_dim},
          {"hidden_dim", c.hidden_dim},
          {"head_type", head_name(c.head_type)},
          {"alpha", c.alpha},
          {"grl_enabled", c.grl_enabled},
          {"grl_scale", c.grl_scale},
          {"adversary_target", adversary_name(c.adversary_target)},
          {"adversary_classes", c.adversary_classes}};
}

IntensityModelConfig config_from_json(const nlohmann::json& doc) {
  IntensityModelConfig c;
  c.input_dim = doc.at("input_dim").get<int>();
  c.hidden_dim = doc.at("hidden_dim").get<int>();
  c.head_type = parse_head(doc.at("head_type").get<std::string>());
  c.alpha = doc.at("alpha").get<double>();
  c.grl_enabled = doc.at("grl_enabled").get<bool>();
  c.grl_scale = doc.at("grl_scale").get<double>();
  c.adversary_target = parse_adversary(doc.at("adversary_target").get<std::string>());
  c.adversary_classes = doc.at("adversary_classes").get<int>();
  return c;
}

IntensityModel::IntensityModel(const IntensityModelConfig& config, Rng& rng) : config_(config) {
  require(config.input_dim > 0 && config.hidden_dim > 0, ErrorCode::InvalidArgument, "model dims must be positive");
  require(config.grl_scale > 0.0, ErrorCode::InvalidValue, "grl_scale must be positive");
  require(config.adversary_classes >= 2, ErrorCode::InvalidValue, "adversary needs at least two classes");
  norm = dsp::NormStats::identity(config.input_dim);
  fc1 = nn::Linear("extractor.fc1", config.input_dim, config.hidden_dim, rng);
  fc2 = nn::Linear("extractor.fc2", config.hidden_dim, config.hidden_dim, rng);
  if (config.head_type == HeadType::SER) {
    ser_head = nn::Linear("ser.fc", config.hidden_dim, kNumIntensityEmotions, rng);
  } else {
    for (int e = 0; e < kNumIntensityEmotions; ++e)
      epr_heads[static_cast<std::size_t>(e)] =
          nn::Linear("epr." + std::string(emotion_name(emotion_at(e))) + ".fc", config.hidden_dim, 2, rng);
  }
  adversary = nn::Linear("adversary.fc", config.hidden_dim, config.adversary_classes, rng);
}

nn::Var IntensityModel::extract(nn::Var frames) const {
  require(frames.cols() == config_.input_dim, ErrorCode::DimensionMismatch,
          "features have " + std::to_string(frames.cols()) + " columns, model expects " +
              std::to_string(config_.input_dim));
  return fc2(nn::relu(fc1(frames)));
}

nn::Var IntensityModel::head_logits(nn::Var pooled) const {
  if (config_.head_type == HeadType::SER) return ser_head(pooled);
  std::vector<nn::Var> parts;
  for (const auto& h : epr_heads) parts.push_back(h(pooled));
  return nn::concat_cols(parts);
}

nn::Var IntensityModel::adversary_logits(nn::Var pooled) const { return adversary(pooled); }

Vector IntensityModel::segment_logits(const Matrix& raw_frames) const {
  if (raw_frames.rows() == 0) fail(ErrorCode::EmptySegment, "segment has no frames");
  require(raw_frames.cols() == config_.input_dim, ErrorCode::DimensionMismatch,
          "features have " + std::to_string(raw_frames.cols()) + " columns, model expects " +
              std::to_string(config_.input_dim));
  nn::Tape tape;
  nn::Var h = extract(tape.constant(norm.apply_rows(raw_frames)));
  return head_logits(nn::mean_rows(h)).value().row(0).transpose();
}

nn::ParameterList IntensityModel::extractor_parameters() const {
  nn::ParameterList out;
  fc1.collect(out);
  fc2.collect(out);
  return out;
}

nn::ParameterList IntensityModel::head_parameters() const {
  nn::ParameterList out;
  if (config_.head_type == HeadType::SER) {
    ser_head.collect(out);
  } else {
    for (const auto& h : epr_heads) h.collect(out);
  }
  return out;
}

nn::ParameterList IntensityModel::adversary_parameters() const {
  nn::ParameterList out;
  adversary.collect(out);
  return out;
}

nn::ParameterList IntensityModel::all_parameters() const {
  nn::ParameterList out = extractor_parameters();
  for (auto* p : head_parameters()) out.push_back(p);
  for (auto* p : adversary_parameters()) out.push_back(p);
  return out;
}

EmotionIntensity intensity_from_logits(const Vector& logits, HeadType head, double alpha) {
  const Matrix row = logits.transpose();
  const Matrix values = intensities_from_logits(row, head, alpha);
  EmotionIntensity out;
  for (int e = 0; e < kNumIntensityEmotions; ++e) out.values[static_cast<std::size_t>(e)] = values(0, e);
  return out;
}

EmotionIntensity forward_intensity(const IntensityModel& model, const Matrix& raw_frames) {
  return intensity_from_logits(model.segment_logits(raw_frames), model.config().head_type, model.config().alpha);
}

EmotionIntensity forward_intensity(const IntensityModel& model, const dsp::FrameFeatures& ff,
                                   const corpus::TimeSpan& span) {
  const auto [first, last] = dsp::segment_frame_range(ff, span);
  return forward_intensity(model, ff.values.middleRows(first, last - first));
}

TensorArchive model_to_archive(const IntensityModel& model) {
  TensorArchive ar;
  ar.kind = std::string(kIntensityArchiveKind);
  ar.meta["config"] = config_to_json(model.config());
  ar.meta["norm"] = dsp::norm_to_json(model.norm);
  nlohmann::json order = nlohmann::json::array();
  for (Emotion e : kIntensityOrder) order.push_back(emotion_name(e));
  ar.meta["label_order"] = order;
  nn::store_parameters(ar, model.all_parameters());
  return ar;
}

IntensityModel model_from_archive(const TensorArchive& archive) {
  require(archive.kind == kIntensityArchiveKind, ErrorCode::CorruptPayload, "archive is not an intensity model");
  const auto& order = archive.meta.at("label_order");
  for (int e = 0; e < kNumIntensityEmotions; ++e)
    require(order.at(static_cast<std::size_t>(e)).get<std::string>() == emotion_name(emotion_at(e)),
            ErrorCode::CorruptPayload, "unexpected label order in checkpoint");
  Rng rng(0);
  IntensityModel model(config_from_json(archive.meta.at("config")), rng);
  model.norm = dsp::norm_from_json(archive.meta.at("norm"));
  nn::restore_parameters(archive, model.all_parameters());
  return model;
}

void save_model(const std::filesystem::path& path, const IntensityModel& model) {
  save_archive(path, model_to_archive(model));
}

IntensityModel load_model(const std::filesystem::path& path) {
  return model_from_archive(load_archive(path, std::string(kIntensityArchiveKind)));
}

}  // namespace hedtts::intensity
