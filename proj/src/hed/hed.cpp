// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/hed/hed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hedtts/common/error.hpp"

namespace hedtts::hed {

namespace {

constexpr std::array<std::string_view, 3> kLevelOrder = {"phoneme", "word", "utterance"};

void check_row(const Vector& v, const std::string& what) {
  require(v.size() == 4, ErrorCode::DimensionMismatch, what + " must have 4 intensities");
  for (Eigen::Index i = 0; i < 4; ++i)
    require(std::isfinite(v(i)) && v(i) >= 0.0 && v(i) <= 1.0, ErrorCode::InvalidValue,
            what + " intensity outside [0, 1]");
}

}  // namespace

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Extracted: return "extracted";
    case Provenance::Edited: return "edited";
    case Provenance::Manual: return "manual";
  }
  return "extracted";
}

Provenance parse_provenance(std::string_view s) {
  if (s == "extracted") return Provenance::Extracted;
  if (s == "edited") return Provenance::Edited;
  if (s == "manual") return Provenance::Manual;
  fail(ErrorCode::CorruptPayload, "unknown provenance '" + std::string(s) + "'");
}

int HierarchicalED::num_words() const {
  return word_index.empty() ? 0 : *std::max_element(word_index.begin(), word_index.end()) + 1;
}

Vector HierarchicalED::block(Level level, int row) const {
  return matrix.block(row, hed_column(level, 0), 1, 4).transpose();
}

bool HierarchicalED::operator==(const HierarchicalED& o) const {
  return utterance_id == o.utterance_id && phones == o.phones && word_index == o.word_index &&
         provenance == o.provenance && matrix.rows() == o.matrix.rows() && matrix.cols() == o.matrix.cols() &&
         matrix == o.matrix;
}

std::string invariant_violation(const HierarchicalED& h) {
  const auto n = static_cast<Eigen::Index>(h.phones.size());
  if (h.word_index.size() != h.phones.size()) return "word_index length differs from phone count";
  if (h.matrix.rows() != n || h.matrix.cols() != kHedColumns) return "matrix shape is not phones x 12";
  if (n == 0) return "HED has no phones";
  for (Eigen::Index i = 0; i < h.matrix.size(); ++i)
    if (!std::isfinite(h.matrix(i)) || h.matrix(i) < 0.0 || h.matrix(i) > 1.0) return "entry outside [0, 1]";
  for (Eigen::Index r = 1; r < n; ++r)
    if (h.matrix.block(r, 8, 1, 4) != h.matrix.block(0, 8, 1, 4)) return "utterance block differs between rows";
  for (std::size_t i = 0; i < h.word_index.size(); ++i) {
    if (h.word_index[i] < 0) return "negative word index";
    if (i > 0 && h.word_index[i] < h.word_index[i - 1]) return "word indices decrease";
  }
  for (Eigen::Index r = 1; r < n; ++r)
    if (h.word_index[static_cast<std::size_t>(r)] == h.word_index[static_cast<std::size_t>(r - 1)] &&
        h.matrix.block(r, 4, 1, 4) != h.matrix.block(r - 1, 4, 1, 4))
      return "word block differs within word " + std::to_string(h.word_index[static_cast<std::size_t>(r)]);
  return {};
}

void validate_hed(const HierarchicalED& hed) {
  const std::string v = invariant_violation(hed);
  if (!v.empty()) fail(ErrorCode::InvalidValue, "invalid HED: " + v);
}

HierarchicalED assemble_hed(const corpus::AlignmentTrack& track, const Matrix& phone_eds, const Matrix& word_eds,
                            const Vector& utterance_ed, Provenance provenance) {
  const auto n = static_cast<Eigen::Index>(track.phones.size());
  if (phone_eds.rows() != n || phone_eds.cols() != 4)
    fail(ErrorCode::AlignmentMismatch, "phone intensities do not match the alignment's " + std::to_string(n) + " phones");
  if (word_eds.rows() != static_cast<Eigen::Index>(track.words.size()) || word_eds.cols() != 4)
    fail(ErrorCode::AlignmentMismatch, "word intensities do not match the alignment's words");
  check_row(utterance_ed, "utterance");
  HierarchicalED h;
  h.utterance_id = track.utterance_id;
  h.provenance = provenance;
  h.matrix.resize(n, kHedColumns);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = track.phones[static_cast<std::size_t>(i)];
    h.phones.push_back(p.symbol);
    h.word_index.push_back(p.word_index);
    h.matrix.block(i, 0, 1, 4) = phone_eds.row(i);
    h.matrix.block(i, 4, 1, 4) = word_eds.row(p.word_index);
    h.matrix.block(i, 8, 1, 4) = utterance_ed.transpose();
  }
  validate_hed(h);
  return h;
}

HierarchicalED extract_hed(const corpus::AlignmentTrack& track, const std::map<Level, SegmentScorer>& scorers) {
  for (Level l : kAllLevels)
    if (!scorers.count(l) || !scorers.at(l))
      fail(ErrorCode::MissingModel, "no intensity extractor for level " + std::string(level_name(l)));
  const corpus::SegmentSet segs = corpus::slice_segments(track);
  Matrix phone(static_cast<Eigen::Index>(segs.phones.size()), 4);
  Matrix word(static_cast<Eigen::Index>(segs.words.size()), 4);
  for (std::size_t i = 0; i < segs.phones.size(); ++i)
    phone.row(static_cast<Eigen::Index>(i)) = scorers.at(Level::Phoneme)(segs.phones[i]).as_vector().transpose();
  for (std::size_t i = 0; i < segs.words.size(); ++i)
    word.row(static_cast<Eigen::Index>(i)) = scorers.at(Level::Word)(segs.words[i]).as_vector().transpose();
  const Vector utt = scorers.at(Level::Utterance)(segs.utterance).as_vector();
  return assemble_hed(track, phone, word, utt, Provenance::Extracted);
}

HierarchicalED extract_hed(const corpus::AlignmentTrack& track, const std::map<Level, LevelSource>& sources) {
  std::map<Level, SegmentScorer> scorers;
  for (Level l : kAllLevels) {
    auto it = sources.find(l);
    if (it == sources.end() || it->second.model == nullptr || it->second.features == nullptr)
      fail(ErrorCode::MissingModel, "no intensity model or features for level " + std::string(level_name(l)));
    const LevelSource src = it->second;
    const double end = track.phones.empty() ? 0.0 : track.phones.back().end;
    if (end > src.features->duration() + 2.0 / src.features->frame_rate)
      fail(ErrorCode::AlignmentMismatch, "alignment of " + track.utterance_id + " ends at " + std::to_string(end) +
                                             " s but features cover " + std::to_string(src.features->duration()) + " s");
    scorers[l] = [src](const corpus::Segment& seg) {
      // the last phone may overhang the final frame by up to the tolerance above
      corpus::TimeSpan span = seg.span;
      const double limit = src.features->duration();
      span.end = std::min(span.end, limit);
      span.start = std::min(span.start, limit - 1.0 / src.features->frame_rate);
      const auto [first, last] = dsp::segment_frame_range(*src.features, span);
      const Matrix rows = src.features->values.middleRows(first, last - first);
      if (src.mode == intensity::SampleMode::Frames) return intensity::forward_intensity(*src.model, rows);
      return intensity::forward_intensity(*src.model, Matrix(dsp::functionals_of(rows).transpose()));
    };
  }
  return extract_hed(track, scorers);
}

std::string edit_violation(const HierarchicalED& hed, const EDEdit& e) {
  if (e.emotion < 0 || e.emotion >= kNumIntensityEmotions) return "emotion: must be one of Angry, Happy, Sad, Surprise";
  if (!std::isfinite(e.value)) return "value: must be finite";
  if (e.mode == EditMode::Set && (e.value < 0.0 || e.value > 1.0)) return "value: set value must lie in [0, 1]";
  if (e.mode == EditMode::Scale && e.value < 0.0) return "value: scale factor must be >= 0";
  if (e.level == Level::Utterance) return {};
  const int limit = e.level == Level::Phoneme ? hed.num_phones() : hed.num_words();
  if (e.begin < 0 || e.end <= e.begin || e.end > limit)
    return "target: [" + std::to_string(e.begin) + ", " + std::to_string(e.end) + ") outside 0.." +
           std::to_string(limit) + " " + std::string(level_name(e.level)) + "s";
  return {};
}

HierarchicalED apply_edit(const HierarchicalED& hed, const EDEdit& e) {
  const std::string v = edit_violation(hed, e);
  if (!v.empty()) fail(v.rfind("target", 0) == 0 ? ErrorCode::IndexOutOfRange : ErrorCode::InvalidValue, v);
  HierarchicalED out = hed;
  out.provenance = Provenance::Edited;
  const int col = hed_column(e.level, e.emotion);
  auto update = [&](Eigen::Index row) {
    double& x = out.matrix(row, col);
    x = std::clamp(e.mode == EditMode::Set ? e.value : x * e.value, 0.0, 1.0);
  };
  for (Eigen::Index r = 0; r < out.matrix.rows(); ++r) {
    const auto ri = static_cast<std::size_t>(r);
    switch (e.level) {
      case Level::Utterance: update(r); break;
      case Level::Word:
        if (hed.word_index[ri] >= e.begin && hed.word_index[ri] < e.end) update(r);
        break;
      case Level::Phoneme: {
        const bool in_span = r >= e.begin && r < e.end;
        const bool skip = e.end - e.begin > 1 && corpus::is_silence_symbol(hed.phones[ri]);
        if (in_span && !skip) update(r);
        break;
      }
    }
  }
  return out;
}

nlohmann::json edit_to_json(const EDEdit& e) {
  nlohmann::json doc = {{"level", level_name(e.level)},
                        {"emotion", emotion_name(emotion_at(e.emotion))},
                        {"mode", e.mode == EditMode::Set ? "set" : "scale"},
                        {"value", e.value}};
  if (e.level != Level::Utterance) doc["target"] = e.end - e.begin == 1 ? nlohmann::json(e.begin) : nlohmann::json{e.begin, e.end};
  return doc;
}

EDEdit edit_from_json(const nlohmann::json& doc) {
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(name)) fail(ErrorCode::InvalidValue, std::string(name) + ": required");
    return doc.at(name);
  };
  EDEdit e;
  const auto& level = field("level");
  const auto parsed_level = level.is_string() ? parse_level(level.get<std::string>()) : std::nullopt;
  if (!parsed_level) fail(ErrorCode::InvalidValue, "level: must be phoneme, word or utterance");
  e.level = *parsed_level;
  const auto& emo = field("emotion");
  const auto parsed_emotion = emo.is_string() ? parse_emotion(emo.get<std::string>()) : std::nullopt;
  if (!parsed_emotion || intensity_index(*parsed_emotion) < 0)
    fail(ErrorCode::InvalidValue, "emotion: must be one of Angry, Happy, Sad, Surprise");
  e.emotion = intensity_index(*parsed_emotion);
  const auto& mode = field("mode");
  if (mode == "set") {
    e.mode = EditMode::Set;
  } else if (mode == "scale") {
    e.mode = EditMode::Scale;
  } else {
    fail(ErrorCode::InvalidValue, "mode: must be set or scale");
  }
  const auto& value = field("value");
  if (!value.is_number()) fail(ErrorCode::InvalidValue, "value: must be a number");
  e.value = value.get<double>();
  if (e.level != Level::Utterance) {
    const auto& target = field("target");
    if (target.is_number_integer()) {
      e.begin = target.get<int>();
      e.end = e.begin + 1;
    } else if (target.is_array() && target.size() == 2 && target[0].is_number_integer() &&
               target[1].is_number_integer()) {
      e.begin = target[0].get<int>();
      e.end = target[1].get<int>();
    } else {
      fail(ErrorCode::InvalidValue, "target: must be an index or a [begin, end) pair");
    }
  }
  return e;
}

std::vector<double> default_sweep_values() { return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}; }

std::vector<HierarchicalED> intensity_sweep(const HierarchicalED& hed, Level level, int begin, int end, int emotion,
                                            const std::vector<double>& values) {
  std::vector<HierarchicalED> out;
  for (double v : values) {
    EDEdit e;
    e.level = level;
    e.begin = begin;
    e.end = end;
    e.emotion = emotion;
    e.mode = EditMode::Set;
    e.value = v;
    out.push_back(apply_edit(hed, e));
  }
  return out;
}

std::vector<int> longest_words(const corpus::AlignmentTrack& track, int k) {
  std::vector<int> lengths(track.words.size(), 0);
  for (const auto& p : track.phones)
    if (!corpus::is_silence_symbol(p.symbol)) lengths[static_cast<std::size_t>(p.word_index)]++;
  std::vector<int> order(track.words.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lengths[static_cast<std::size_t>(a)] > lengths[static_cast<std::size_t>(b)];
  });
  order.erase(std::remove_if(order.begin(), order.end(), [&](int w) { return lengths[static_cast<std::size_t>(w)] == 0; }),
              order.end());
  if (static_cast<int>(order.size()) > k) order.resize(static_cast<std::size_t>(k));
  return order;
}

nlohmann::json hed_to_json(const HierarchicalED& hed) {
  nlohmann::json emotions = nlohmann::json::array();
  for (Emotion e : kIntensityOrder) emotions.push_back(emotion_name(e));
  nlohmann::json matrix = nlohmann::json::array();
  for (Eigen::Index r = 0; r < hed.matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < hed.matrix.cols(); ++c) row.push_back(hed.matrix(r, c));
    matrix.push_back(row);
  }
  return {{"version", kHedVersion},     {"utterance_id", hed.utterance_id},
          {"emotions", emotions},       {"levels", kLevelOrder},
          {"phones", hed.phones},       {"word_index", hed.word_index},
          {"matrix", matrix},           {"provenance", provenance_name(hed.provenance)}};
}

HierarchicalED hed_from_json(const nlohmann::json& doc, int reader_version) {
  if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer())
    fail(ErrorCode::CorruptPayload, "HED document has no version");
  const int version = doc["version"].get<int>();
  if (version != reader_version)
    fail(ErrorCode::SchemaVersionMismatch, "HED document is version " + std::to_string(version) +
                                               ", reader expects version " + std::to_string(reader_version));
  try {
    HierarchicalED h;
    h.utterance_id = doc.at("utterance_id").get<std::string>();
    const auto emotions = doc.at("emotions").get<std::vector<std::string>>();
    const auto levels = doc.at("levels").get<std::vector<std::string>>();
    for (int e = 0; e < 4; ++e)
      if (emotions.size() != 4 || emotions[static_cast<std::size_t>(e)] != emotion_name(emotion_at(e)))
        fail(ErrorCode::CorruptPayload, "unexpected emotion column order");
    if (levels != std::vector<std::string>(kLevelOrder.begin(), kLevelOrder.end()))
      fail(ErrorCode::CorruptPayload, "unexpected level order");
    h.phones = doc.at("phones").get<std::vector<std::string>>();
    h.word_index = doc.at("word_index").get<std::vector<int>>();
    h.provenance = doc.contains("provenance") ? parse_provenance(doc["provenance"].get<std::string>())
                                              : Provenance::Manual;
    const auto& rows = doc.at("matrix");
    if (!rows.is_array() || rows.size() != h.phones.size()) fail(ErrorCode::CorruptPayload, "matrix row count differs from phones");
    h.matrix.resize(static_cast<Eigen::Index>(rows.size()), kHedColumns);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != kHedColumns) fail(ErrorCode::CorruptPayload, "matrix row is not 12 wide");
      for (std::size_t c = 0; c < kHedColumns; ++c)
        h.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
    }
    const std::string v = invariant_violation(h);
    if (!v.empty()) fail(ErrorCode::CorruptPayload, "HED document violates invariants: " + v);
    return h;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptPayload, std::string("malformed HED document: ") + e.what());
  }
}

std::string serialize_hed(const HierarchicalED& hed) { return hed_to_json(hed).dump() + "\n"; }

HierarchicalED deserialize_hed(const std::string& text, int reader_version) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptPayload, std::string("HED document is not valid JSON: ") + e.what());
  }
  return hed_from_json(doc, reader_version);
}

}  // namespace hedtts::hed
