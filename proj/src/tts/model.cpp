// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/tts/model.hpp"

#include <cmath>

#include "hedtts/common/error.hpp"

namespace hedtts::tts {

using nn::Tape;
using nn::Var;

namespace {

constexpr const char* kArchiveKind = "acoustic-model";
constexpr int kModelVersion = 1;

Var upsample2(Var x) {
  std::vector<int> index(static_cast<std::size_t>(2 * x.rows()));
  for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<int>(i / 2);
  return nn::gather_rows(x, index);
}

nlohmann::json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector json_vector(const nlohmann::json& doc) {
  const auto values = doc.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

AcousticConfig AcousticConfig::toy() {
  AcousticConfig c;
  c.encoder.dim = 64;
  c.encoder.ffn_dim = 128;
  c.duration_hidden = 64;
  return c;
}

nlohmann::json config_to_json(const AcousticConfig& c) {
  return {{"encoder", {{"dim", c.encoder.dim}, {"heads", c.encoder.heads}, {"blocks", c.encoder.blocks},
                       {"ffn_dim", c.encoder.ffn_dim}}},
          {"decoder", {{"mel_dim", c.decoder.mel_dim}, {"width", c.decoder.width}, {"time_dim", c.decoder.time_dim}}},
          {"speaker_dim", c.speaker_dim},
          {"hed_dim", c.hed_dim},
          {"duration_hidden", c.duration_hidden},
          {"sigma_min", c.sigma_min}};
}

AcousticConfig acoustic_config_from_json(const nlohmann::json& doc) {
  AcousticConfig c;
  const auto& e = doc.at("encoder");
  c.encoder.dim = e.at("dim");
  c.encoder.heads = e.at("heads");
  c.encoder.blocks = e.at("blocks");
  c.encoder.ffn_dim = e.at("ffn_dim");
  const auto& d = doc.at("decoder");
  c.decoder.mel_dim = d.at("mel_dim");
  c.decoder.width = d.at("width");
  c.decoder.time_dim = d.at("time_dim");
  c.speaker_dim = doc.at("speaker_dim");
  c.hed_dim = doc.at("hed_dim");
  c.duration_hidden = doc.at("duration_hidden");
  c.sigma_min = doc.at("sigma_min");
  return c;
}

Matrix sinusoidal_positions(Eigen::Index n, int dim) {
  Matrix pe(n, dim);
  for (Eigen::Index p = 0; p < n; ++p)
    for (int i = 0; i < dim; ++i) {
      const double freq = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / dim);
      pe(p, i) = i % 2 == 0 ? std::sin(static_cast<double>(p) * freq) : std::cos(static_cast<double>(p) * freq);
    }
  return pe;
}

Matrix time_features(double t, int dim) {
  Matrix out(1, dim);
  const int half = dim / 2;
  for (int i = 0; i < half; ++i) {
    const double freq = std::exp(-std::log(10000.0) * i / std::max(1, half - 1));
    out(0, i) = std::sin(1000.0 * t * freq);
    out(0, half + i) = std::cos(1000.0 * t * freq);
  }
  if (dim % 2) out(0, dim - 1) = t;
  return out;
}

TextEncoder::TextEncoder(const EncoderConfig& config, int vocab, Rng& rng) : config_(config) {
  require(config.dim % config.heads == 0, ErrorCode::InvalidArgument, "encoder dim must divide into heads");
  embed_ = nn::Embedding("encoder.embed", vocab, config.dim, rng);
  for (int b = 0; b < config.blocks; ++b) {
    const std::string p = "encoder.block" + std::to_string(b) + ".";
    Block blk;
    blk.ln1 = nn::LayerNorm(p + "ln1", config.dim);
    blk.ln2 = nn::LayerNorm(p + "ln2", config.dim);
    blk.q = nn::Linear(p + "q", config.dim, config.dim, rng);
    blk.k = nn::Linear(p + "k", config.dim, config.dim, rng);
    blk.v = nn::Linear(p + "v", config.dim, config.dim, rng);
    blk.o = nn::Linear(p + "o", config.dim, config.dim, rng);
    blk.ff1 = nn::Linear(p + "ff1", config.dim, config.ffn_dim, rng);
    blk.ff2 = nn::Linear(p + "ff2", config.ffn_dim, config.dim, rng);
    blocks_.push_back(std::move(blk));
  }
  final_ = nn::LayerNorm("encoder.final", config.dim);
}

Var TextEncoder::operator()(Tape& tape, const std::vector<int>& ids) const {
  require(!ids.empty(), ErrorCode::EmptyInput, "text encoder needs at least one phoneme");
  const auto n = static_cast<Eigen::Index>(ids.size());
  Var x = nn::add(nn::scale(embed_(tape, ids), std::sqrt(static_cast<double>(config_.dim))),
                  tape.constant(sinusoidal_positions(n, config_.dim)));
  const int dh = config_.dim / config_.heads;
  const double inv = 1.0 / std::sqrt(static_cast<double>(dh));
  for (const Block& b : blocks_) {
    const Var h = b.ln1(x);
    const Var q = b.q(h), k = b.k(h), v = b.v(h);
    std::vector<Var> heads;
    for (int i = 0; i < config_.heads; ++i) {
      const Var qi = nn::slice_cols(q, i * dh, dh);
      const Var ki = nn::slice_cols(k, i * dh, dh);
      const Var vi = nn::slice_cols(v, i * dh, dh);
      const Var att = nn::softmax_rows(nn::scale(nn::matmul(qi, nn::transpose(ki)), inv));
      heads.push_back(nn::matmul(att, vi));
    }
    x = nn::add(x, b.o(nn::concat_cols(heads)));
    x = nn::add(x, b.ff2(nn::relu(b.ff1(b.ln2(x)))));
  }
  return final_(x);
}

void TextEncoder::collect(nn::ParameterList& out) const {
  embed_.collect(out);
  for (const Block& b : blocks_) {
    for (const auto* ln : {&b.ln1, &b.ln2}) ln->collect(out);
    for (const auto* l : {&b.q, &b.k, &b.v, &b.o, &b.ff1, &b.ff2}) l->collect(out);
  }
  final_.collect(out);
}

DurationPredictor::DurationPredictor(int in, int hidden, Rng& rng)
    : conv1_("duration.conv1", in, hidden, 3, rng),
      conv2_("duration.conv2", hidden, hidden, 3, rng),
      ln1_("duration.ln1", hidden),
      ln2_("duration.ln2", hidden),
      proj_("duration.proj", hidden, 1, rng) {}

Var DurationPredictor::operator()(Var cond) const {
  Var h = ln1_(nn::relu(conv1_(cond)));
  h = ln2_(nn::relu(conv2_(h)));
  return proj_(h);
}

void DurationPredictor::collect(nn::ParameterList& out) const {
  conv1_.collect(out);
  ln1_.collect(out);
  conv2_.collect(out);
  ln2_.collect(out);
  proj_.collect(out);
}

FlowDecoder::ResBlock FlowDecoder::make_block(const std::string& name, int width, Rng& rng) {
  ResBlock b;
  b.conv1 = nn::Conv1d(name + ".conv1", width, width, 3, rng);
  b.conv2 = nn::Conv1d(name + ".conv2", width, width, 3, rng);
  b.time = nn::Linear(name + ".time", width, width, rng);
  return b;
}

Var FlowDecoder::ResBlock::operator()(Var x, Var temb) const {
  Var h = conv1(nn::silu(x));
  h = nn::add_row(h, time(nn::silu(temb)));
  h = conv2(nn::silu(h));
  return nn::add(x, h);
}

void FlowDecoder::ResBlock::collect(nn::ParameterList& out) const {
  conv1.collect(out);
  time.collect(out);
  conv2.collect(out);
}

FlowDecoder::FlowDecoder(const DecoderConfig& c, Rng& rng) : config_(c) {
  const int w = c.width;
  time1_ = nn::Linear("decoder.time1", c.time_dim, w, rng);
  time2_ = nn::Linear("decoder.time2", w, w, rng);
  in_ = nn::Conv1d("decoder.in", 2 * c.mel_dim, w, 3, rng);
  down1_ = make_block("decoder.down1", w, rng);
  pool1_ = nn::Conv1d("decoder.pool1", w, w, 3, rng, 2, 1);
  down2_ = make_block("decoder.down2", w, rng);
  pool2_ = nn::Conv1d("decoder.pool2", w, w, 3, rng, 2, 1);
  mid_ = make_block("decoder.mid", w, rng);
  up2_ = nn::Conv1d("decoder.up2", 2 * w, w, 3, rng);
  up2_block_ = make_block("decoder.up2b", w, rng);
  up1_ = nn::Conv1d("decoder.up1", 2 * w, w, 3, rng);
  up1_block_ = make_block("decoder.up1b", w, rng);
  out_ = nn::Conv1d("decoder.out", w, c.mel_dim, 1, rng);
}

Var FlowDecoder::operator()(Var x, Var mu, double t) const {
  require(x.cols() == config_.mel_dim && mu.cols() == config_.mel_dim && x.rows() == mu.rows(),
          ErrorCode::DimensionMismatch, "decoder input and mean mel must both be T x mel_dim");
  Tape& tape = *x.tape;
  const Eigen::Index T = x.rows();
  const Eigen::Index padded = (T + 3) / 4 * 4;
  Var h = nn::concat_cols({x, mu});
  if (padded > T) h = nn::concat_rows({h, tape.constant(Matrix::Zero(padded - T, 2 * config_.mel_dim))});

  const Var temb = time2_(nn::silu(time1_(tape.constant(time_features(t, config_.time_dim)))));
  h = in_(h);
  const Var skip1 = down1_(h, temb);
  const Var skip2 = down2_(pool1_(skip1), temb);
  h = mid_(pool2_(skip2), temb);
  h = up2_block_(up2_(nn::concat_cols({upsample2(h), skip2})), temb);
  h = up1_block_(up1_(nn::concat_cols({upsample2(h), skip1})), temb);
  h = out_(nn::silu(h));
  return padded > T ? nn::slice_rows(h, 0, T) : h;
}

void FlowDecoder::collect(nn::ParameterList& out) const {
  time1_.collect(out);
  time2_.collect(out);
  in_.collect(out);
  down1_.collect(out);
  pool1_.collect(out);
  down2_.collect(out);
  pool2_.collect(out);
  mid_.collect(out);
  up2_.collect(out);
  up2_block_.collect(out);
  up1_.collect(out);
  up1_block_.collect(out);
  out_.collect(out);
}

Matrix MelNorm::normalize(const Matrix& frames) const {
  require(frames.cols() == mean.size(), ErrorCode::DimensionMismatch, "mel band count differs from normaliser");
  return ((frames.rowwise() - mean.transpose()).array().rowwise() / stddev.transpose().array()).matrix();
}

Matrix MelNorm::denormalize(const Matrix& frames) const {
  require(frames.cols() == mean.size(), ErrorCode::DimensionMismatch, "mel band count differs from normaliser");
  return ((frames.array().rowwise() * stddev.transpose().array()).matrix().rowwise() + mean.transpose());
}

MelNorm fit_mel_norm(const std::vector<Matrix>& frame_mels) {
  require(!frame_mels.empty(), ErrorCode::InsufficientData, "no mels to fit normalisation on");
  const Eigen::Index bands = frame_mels.front().cols();
  Vector sum = Vector::Zero(bands), sq = Vector::Zero(bands);
  double n = 0.0;
  for (const Matrix& m : frame_mels) {
    require(m.cols() == bands, ErrorCode::DimensionMismatch, "mel band count varies");
    sum += m.colwise().sum().transpose();
    sq += m.array().square().colwise().sum().matrix().transpose();
    n += static_cast<double>(m.rows());
  }
  require(n > 0, ErrorCode::InsufficientData, "no mel frames to fit normalisation on");
  MelNorm norm;
  norm.mean = sum / n;
  norm.stddev = (sq / n - norm.mean.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt().cwiseMax(1e-2);
  return norm;
}

AcousticModel::AcousticModel(const AcousticConfig& config, PhoneInventory inventory, Rng& rng)
    : config_(config), inventory_(std::move(inventory)) {
  const int d = config.encoder.dim;
  encoder_ = TextEncoder(config.encoder, inventory_.size(), rng);
  cond_proj_ = nn::Linear("conditioning.proj", d + config.speaker_dim + config.hed_dim, d, rng);
  duration_ = DurationPredictor(d, config.duration_hidden, rng);
  mel_proj_ = nn::Linear("mean_mel.proj", d, config.decoder.mel_dim, rng);
  decoder_ = FlowDecoder(config.decoder, rng);
  mel_norm.mean = Vector::Zero(config.decoder.mel_dim);
  mel_norm.stddev = Vector::Ones(config.decoder.mel_dim);
}

Var AcousticModel::encode_text(Tape& tape, const std::vector<int>& ids) const { return encoder_(tape, ids); }

Var AcousticModel::conditioning(Tape& tape, Var ling, const Vector& speaker, const Matrix& hed) const {
  const Eigen::Index n = ling.rows();
  if (speaker.size() != config_.speaker_dim)
    fail(ErrorCode::LengthMismatch, "speaker embedding has " + std::to_string(speaker.size()) + " values, expected " +
                                        std::to_string(config_.speaker_dim));
  if (hed.rows() != n || hed.cols() != config_.hed_dim)
    fail(ErrorCode::LengthMismatch, "HED has " + std::to_string(hed.rows()) + " rows for " + std::to_string(n) +
                                        " phonemes");
  const Matrix spk = speaker.transpose().replicate(n, 1);
  return cond_proj_(nn::concat_cols({ling, tape.constant(spk), tape.constant(hed)}));
}

Var AcousticModel::log_durations(Var cond) const { return duration_(nn::detach(cond)); }

Var AcousticModel::mean_mel(Var cond, const std::vector<int>& durations) const {
  require(static_cast<Eigen::Index>(durations.size()) == cond.rows(), ErrorCode::LengthMismatch,
          "one duration per phoneme required");
  return mel_proj_(nn::gather_rows(cond, expand_index(durations)));
}

nn::ParameterList AcousticModel::parameters() const {
  nn::ParameterList out;
  encoder_.collect(out);
  cond_proj_.collect(out);
  duration_.collect(out);
  mel_proj_.collect(out);
  decoder_.collect(out);
  return out;
}

std::vector<int> expand_index(const std::vector<int>& durations) {
  std::vector<int> index;
  for (std::size_t i = 0; i < durations.size(); ++i) {
    require(durations[i] >= 1, ErrorCode::InvalidValue, "durations must be at least one frame");
    index.insert(index.end(), static_cast<std::size_t>(durations[i]), static_cast<int>(i));
  }
  return index;
}

std::vector<int> durations_from_log(const Matrix& log_durations, double length_scale) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < log_durations.size(); ++i) {
    const double frames = std::round(std::exp(log_durations(i)) * length_scale);
    out.push_back(std::isfinite(frames) ? std::max(1, static_cast<int>(std::min(frames, 1e4))) : 1);
  }
  return out;
}

TensorArchive acoustic_to_archive(const AcousticModel& model) {
  TensorArchive ar;
  ar.kind = kArchiveKind;
  ar.meta["version"] = kModelVersion;
  ar.meta["config"] = config_to_json(model.config());
  ar.meta["inventory"] = model.inventory().symbols();
  ar.meta["mel_mean"] = vector_json(model.mel_norm.mean);
  ar.meta["mel_std"] = vector_json(model.mel_norm.stddev);
  nn::store_parameters(ar, model.parameters());
  return ar;
}

AcousticModel acoustic_from_archive(const TensorArchive& archive) {
  require(archive.kind == kArchiveKind, ErrorCode::CorruptPayload, "archive is not an acoustic model");
  try {
    const int version = archive.meta.at("version").get<int>();
    if (version != kModelVersion)
      fail(ErrorCode::SchemaVersionMismatch, "acoustic model version " + std::to_string(version) + " is not supported");
    Rng rng(0);
    AcousticModel model(acoustic_config_from_json(archive.meta.at("config")),
                        PhoneInventory(archive.meta.at("inventory").get<std::vector<std::string>>()), rng);
    model.mel_norm.mean = json_vector(archive.meta.at("mel_mean"));
    model.mel_norm.stddev = json_vector(archive.meta.at("mel_std"));
    nn::restore_parameters(archive, model.parameters());
    return model;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptPayload, std::string("acoustic model metadata malformed: ") + e.what());
  }
}

void save_acoustic_model(const std::filesystem::path& path, const AcousticModel& model) {
  save_archive(path, acoustic_to_archive(model));
}

AcousticModel load_acoustic_model(const std::filesystem::path& path) {
  return acoustic_from_archive(load_archive(path, kArchiveKind));
}

}  // namespace hedtts::tts
