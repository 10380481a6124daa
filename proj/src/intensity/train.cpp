// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/intensity/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hedtts/common/error.hpp"
#include "hedtts/nn/optim.hpp"

namespace hedtts::intensity {

namespace {

/// Stacked rows of a batch plus the constant (B x R) mean-pooling matrix.
struct Batch {
  Matrix rows;
  Matrix pool;
};

Batch make_batch(const IntensityModel& model, const std::vector<const SegmentSample*>& items) {
  Eigen::Index total = 0;
  for (const auto* s : items) total += s->frames.rows();
  Batch b;
  b.rows.resize(total, model.config().input_dim);
  b.pool = Matrix::Zero(static_cast<Eigen::Index>(items.size()), total);
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Matrix& f = items[i]->frames;
    b.rows.middleRows(at, f.rows()) = model.norm.apply_rows(f);
    b.pool.block(static_cast<Eigen::Index>(i), at, 1, f.rows()).setConstant(1.0 / static_cast<double>(f.rows()));
    at += f.rows();
  }
  return b;
}

/// Mean-pooled extractor output for every sample, no gradient.
Matrix pooled_features(const IntensityModel& model, const std::vector<SegmentSample>& samples) {
  Matrix out(static_cast<Eigen::Index>(samples.size()), model.config().hidden_dim);
  constexpr std::size_t kChunk = 64;
  for (std::size_t start = 0; start < samples.size(); start += kChunk) {
    std::vector<const SegmentSample*> items;
    for (std::size_t i = start; i < std::min(samples.size(), start + kChunk); ++i) items.push_back(&samples[i]);
    const Batch b = make_batch(model, items);
    nn::Tape tape;
    nn::Var pooled = nn::matmul(tape.constant(b.pool), model.extract(tape.constant(b.rows)));
    out.middleRows(static_cast<Eigen::Index>(start), pooled.rows()) = pooled.value();
  }
  return out;
}

int argmax_emotion(const Vector& logits, HeadType head) {
  Eigen::Index best = 0;
  if (head == HeadType::SER) {
    logits.maxCoeff(&best);
  } else {
    // present-vs-absent margin per head; monotone in the present probability for any alpha > 1
    Vector margin(kNumIntensityEmotions);
    for (int e = 0; e < kNumIntensityEmotions; ++e) margin(e) = logits(2 * e + 1) - logits(2 * e);
    margin.maxCoeff(&best);
  }
  return static_cast<int>(best);
}

int argmax_row(const Matrix& m, Eigen::Index row) {
  Eigen::Index best = 0;
  m.row(row).maxCoeff(&best);
  return static_cast<int>(best);
}

std::vector<double> level_weights(const std::vector<SegmentSample>& samples) {
  std::array<double, 3> counts{};
  for (const auto& s : samples) counts[static_cast<std::size_t>(s.level)] += 1.0;
  double levels_present = 0.0;
  for (double c : counts) levels_present += c > 0 ? 1.0 : 0.0;
  std::vector<double> w;
  w.reserve(samples.size());
  // weight proportional to 1 / count of the sample's level, normalised to mean 1
  for (const auto& s : samples)
    w.push_back(static_cast<double>(samples.size()) / (levels_present * counts[static_cast<std::size_t>(s.level)]));
  return w;
}

nn::Var emotion_loss(const IntensityModel& model, nn::Var logits, const std::vector<const SegmentSample*>& items,
                     const std::vector<double>& weights) {
  if (model.config().head_type == HeadType::SER) {
    std::vector<int> labels;
    for (const auto* s : items) labels.push_back(intensity_index(s->emotion));
    return nn::cross_entropy(logits, labels, weights);
  }
  std::vector<nn::Var> per_head;
  for (int e = 0; e < kNumIntensityEmotions; ++e) {
    std::vector<int> present;
    for (const auto* s : items) present.push_back(intensity_index(s->emotion) == e ? 1 : 0);
    per_head.push_back(nn::cross_entropy(nn::slice_cols(logits, 2 * e, 2), present, weights));
  }
  nn::Var total = per_head[0];
  for (std::size_t i = 1; i < per_head.size(); ++i) total = nn::add(total, per_head[i]);
  return nn::scale(total, 1.0 / kNumIntensityEmotions);
}

/// Trains only the adversary on frozen pooled features; returns validation accuracy.
double stabilise_adversary(IntensityModel& model, const Matrix& train_pooled, const std::vector<int>& train_labels,
                           const Matrix& val_pooled, const std::vector<int>& val_labels, const TrainConfig& options,
                           Rng& rng) {
  nn::Adam adam(model.adversary_parameters(), {.lr = options.learning_rate});
  std::vector<std::size_t> order(train_labels.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < options.stabilization_epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(options.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(options.batch_size));
      Matrix x(static_cast<Eigen::Index>(end - start), train_pooled.cols());
      std::vector<int> y;
      for (std::size_t i = start; i < end; ++i) {
        x.row(static_cast<Eigen::Index>(i - start)) = train_pooled.row(static_cast<Eigen::Index>(order[i]));
        y.push_back(train_labels[order[i]]);
      }
      adam.zero_grad();
      nn::Tape tape;
      tape.backward(nn::cross_entropy(model.adversary_logits(tape.constant(x)), y));
      adam.step();
    }
  }
  nn::Tape tape;
  const Matrix logits = model.adversary_logits(tape.constant(val_pooled)).value();
  int hits = 0;
  for (std::size_t i = 0; i < val_labels.size(); ++i)
    hits += argmax_row(logits, static_cast<Eigen::Index>(i)) == val_labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(val_labels.size());
}

struct Snapshot {
  double val_accuracy;
  int epoch;
  IntensityModel model;
};

}  // namespace

std::vector<SegmentSample> segment_samples(const dsp::FrameFeatures& ff, const corpus::SegmentSet& segments,
                                           Emotion emotion, int adversary_class, const std::string& utterance_id,
                                           SampleMode mode) {
  std::vector<SegmentSample> out;
  for (const auto& seg : segments.all()) {
    SegmentSample s;
    const auto [first, last] = dsp::segment_frame_range(ff, seg.span);
    const Matrix rows = ff.values.middleRows(first, last - first);
    s.frames = mode == SampleMode::Frames ? rows : Matrix(dsp::functionals_of(rows).transpose());
    s.emotion = emotion;
    s.level = seg.level;
    s.adversary_class = adversary_class;
    s.utterance_id = utterance_id;
    out.push_back(std::move(s));
  }
  return out;
}

Matrix batch_logits(const IntensityModel& model, const std::vector<SegmentSample>& samples) {
  const Matrix pooled = pooled_features(model, samples);
  nn::Tape tape;
  return model.head_logits(tape.constant(pooled)).value();
}

double emotion_accuracy(const IntensityModel& model, const std::vector<SegmentSample>& samples) {
  const Matrix logits = batch_logits(model, samples);
  int hits = 0, total = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const int truth = intensity_index(samples[i].emotion);
    if (truth < 0) continue;
    ++total;
    hits += argmax_emotion(logits.row(static_cast<Eigen::Index>(i)).transpose(), model.config().head_type) == truth;
  }
  if (total == 0) fail(ErrorCode::NoValidationData, "no emotional segments to score");
  return static_cast<double>(hits) / total;
}

double adversary_accuracy(const IntensityModel& model, const std::vector<SegmentSample>& samples) {
  require(!samples.empty(), ErrorCode::EmptyTestSet, "no samples for adversary accuracy");
  const Matrix pooled = pooled_features(model, samples);
  nn::Tape tape;
  const Matrix logits = model.adversary_logits(tape.constant(pooled)).value();
  int hits = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    hits += argmax_row(logits, static_cast<Eigen::Index>(i)) == samples[i].adversary_class;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

TrainResult train_intensity_model(const std::vector<SegmentSample>& train_all, const std::vector<SegmentSample>& val,
                                  IntensityModelConfig config, const TrainConfig& options) {
  if (val.empty()) fail(ErrorCode::NoValidationData, "validation set is empty");
  require(!train_all.empty(), ErrorCode::InsufficientData, "training set is empty");
  require(options.batch_size >= 1 && options.epochs >= 1, ErrorCode::InvalidArgument, "bad training options");

  // SER has no Neutral output, so Neutral segments only train EPR heads (as negatives).
  std::vector<SegmentSample> train;
  for (const auto& s : train_all)
    if (config.head_type == HeadType::EPR || s.emotion != Emotion::Neutral) train.push_back(s);
  require(!train.empty(), ErrorCode::InsufficientData, "no emotional training segments");
  for (const auto* set : std::initializer_list<const std::vector<SegmentSample>*>{&train, &val})
    for (const auto& s : *set) {
      require(s.frames.rows() > 0, ErrorCode::EmptySegment, "segment without frames in " + s.utterance_id);
      require(s.adversary_class >= 0 && s.adversary_class < config.adversary_classes, ErrorCode::IndexOutOfRange,
              "adversary class out of range for " + s.utterance_id);
    }

  Rng rng(options.seed);
  Rng init_rng = rng.fork(1);
  Rng order_rng = rng.fork(2);
  Rng stab_rng = rng.fork(3);

  config.alpha = 1.0;
  IntensityModel model(config, init_rng);
  {
    Eigen::Index rows = 0;
    for (const auto& s : train) rows += s.frames.rows();
    Matrix all(rows, config.input_dim);
    Eigen::Index at = 0;
    for (const auto& s : train) {
      require(s.frames.cols() == config.input_dim, ErrorCode::DimensionMismatch, "feature width differs from config");
      all.middleRows(at, s.frames.rows()) = s.frames;
      at += s.frames.rows();
    }
    model.norm = rows >= 2 ? dsp::fit_norm_stats(all) : dsp::NormStats::identity(config.input_dim);
  }

  const std::vector<double> weights = level_weights(train);
  nn::ParameterList emotion_params = model.extractor_parameters();
  for (auto* p : model.head_parameters()) emotion_params.push_back(p);
  nn::Adam adam(emotion_params, {.lr = options.learning_rate, .weight_decay = options.weight_decay});
  nn::Adam adv_adam(model.adversary_parameters(), {.lr = options.adversary_learning_rate});
  nn::StepLR sched(adam, options.lr_step_epochs, options.lr_gamma);
  nn::StepLR adv_sched(adv_adam, options.lr_step_epochs, options.lr_gamma);

  TrainReport report;
  report.adversary_chance = 1.0 / config.adversary_classes;
  std::vector<Snapshot> top;
  double best_val = -1.0;
  int since_best = 0;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    order_rng.shuffle(order);
    EpochRecord rec;
    rec.epoch = epoch;
    int batches = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(options.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(options.batch_size));
      std::vector<const SegmentSample*> items;
      std::vector<double> w;
      std::vector<int> adv_labels;
      for (std::size_t i = start; i < end; ++i) {
        items.push_back(&train[order[i]]);
        w.push_back(weights[order[i]]);
        adv_labels.push_back(train[order[i]].adversary_class);
      }
      const Batch b = make_batch(model, items);
      adam.zero_grad();
      adv_adam.zero_grad();
      nn::Tape tape;
      nn::Var pooled = nn::matmul(tape.constant(b.pool), model.extract(tape.constant(b.rows)));
      nn::Var emo = emotion_loss(model, model.head_logits(pooled), items, w);
      nn::Var adv_in = config.grl_enabled ? nn::grl(pooled, config.grl_scale) : nn::detach(pooled);
      nn::Var adv = nn::cross_entropy(model.adversary_logits(adv_in), adv_labels);
      nn::Var loss = nn::add(emo, adv);
      tape.backward(loss);
      adam.step();
      adv_adam.step();
      rec.loss += loss.scalar();
      rec.emotion_loss += emo.scalar();
      rec.adversary_loss += adv.scalar();
      ++batches;
    }
    rec.loss /= batches;
    rec.emotion_loss /= batches;
    rec.adversary_loss /= batches;
    rec.val_accuracy = emotion_accuracy(model, val);
    report.epochs.push_back(rec);
    sched.step();
    adv_sched.step();

    // keep the top-k checkpoints by validation accuracy; on ties the later
    // epoch ranks first since it has seen more adversarial updates
    if (static_cast<int>(top.size()) < options.top_k || rec.val_accuracy >= top.back().val_accuracy) {
      top.insert(top.begin(), {rec.val_accuracy, epoch, model});
      std::stable_sort(top.begin(), top.end(),
                       [](const Snapshot& a, const Snapshot& b) { return a.val_accuracy > b.val_accuracy; });
      if (static_cast<int>(top.size()) > options.top_k) top.pop_back();
    }
    if (rec.val_accuracy > best_val) {
      best_val = rec.val_accuracy;
      since_best = 0;
    } else if (++since_best >= options.patience) {
      break;
    }
  }

  // Stabilise the adversary on each candidate's frozen extractor, then pick the
  // best validation accuracy among candidates whose adversary is near chance.
  std::vector<int> train_adv, val_adv;
  for (const auto& s : train) train_adv.push_back(s.adversary_class);
  for (const auto& s : val) val_adv.push_back(s.adversary_class);
  int chosen = -1;
  for (std::size_t i = 0; i < top.size(); ++i) {
    IntensityModel& cand = top[i].model;
    const Matrix tp = pooled_features(cand, train);
    const Matrix vp = pooled_features(cand, val);
    CheckpointRecord cr;
    cr.epoch = top[i].epoch;
    cr.val_accuracy = top[i].val_accuracy;
    cr.adversary_accuracy = stabilise_adversary(cand, tp, train_adv, vp, val_adv, options, stab_rng);
    cr.near_chance = std::abs(cr.adversary_accuracy - report.adversary_chance) <= options.chance_tolerance;
    report.candidates.push_back(cr);
    if (!cr.near_chance) continue;
    const auto& best = report.candidates[static_cast<std::size_t>(std::max(chosen, 0))];
    const bool better =
        chosen < 0 || cr.val_accuracy > best.val_accuracy ||
        (cr.val_accuracy == best.val_accuracy &&
         std::abs(cr.adversary_accuracy - report.adversary_chance) < std::abs(best.adversary_accuracy - report.adversary_chance));
    if (better) chosen = static_cast<int>(i);
  }
  if (chosen < 0) {
    report.fallback_used = true;
    chosen = 0;
    for (std::size_t i = 1; i < report.candidates.size(); ++i)
      if (report.candidates[i].adversary_accuracy < report.candidates[static_cast<std::size_t>(chosen)].adversary_accuracy)
        chosen = static_cast<int>(i);
  }
  TrainResult result{top[static_cast<std::size_t>(chosen)].model, {}};
  report.selected_epoch = report.candidates[static_cast<std::size_t>(chosen)].epoch;
  report.val_accuracy = report.candidates[static_cast<std::size_t>(chosen)].val_accuracy;
  report.adversary_accuracy = report.candidates[static_cast<std::size_t>(chosen)].adversary_accuracy;

  if (options.calibrate) {
    report.alpha = select_alpha(batch_logits(result.model, train), config.head_type);
    result.model.mutable_config().alpha = report.alpha.alpha;
  }
  result.report = std::move(report);
  return result;
}

nlohmann::json report_to_json(const TrainReport& report) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : report.epochs)
    epochs.push_back({{"epoch", e.epoch},
                      {"loss", e.loss},
                      {"emotion_loss", e.emotion_loss},
                      {"adversary_loss", e.adversary_loss},
                      {"val_accuracy", e.val_accuracy}});
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : report.candidates)
    cands.push_back({{"epoch", c.epoch},
                     {"val_accuracy", c.val_accuracy},
                     {"adversary_accuracy", c.adversary_accuracy},
                     {"near_chance", c.near_chance}});
  return {{"epochs", epochs},
          {"candidates", cands},
          {"selected_epoch", report.selected_epoch},
          {"val_accuracy", report.val_accuracy},
          {"adversary_accuracy", report.adversary_accuracy},
          {"adversary_chance", report.adversary_chance},
          {"fallback_used", report.fallback_used},
          {"alpha", report.alpha.alpha},
          {"alpha_grid", report.alpha.grid},
          {"alpha_kl", report.alpha.kl}};
}

}  // namespace hedtts::intensity
