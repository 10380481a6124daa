// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/corpus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hedtts/common/error.hpp"
#include "hedtts/common/resample.hpp"

namespace hedtts::corpus {
namespace fs = std::filesystem;

std::string_view gender_name(Gender g) {
  switch (g) {
    case Gender::Female: return "F";
    case Gender::Male: return "M";
    case Gender::Unknown: return "";
  }
  return "";
}

Gender parse_gender(std::string_view text) {
  if (text.empty()) return Gender::Unknown;
  const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text.front())));
  if (c == 'F') return Gender::Female;
  if (c == 'M') return Gender::Male;
  return Gender::Unknown;
}

void CorpusIndex::add(UtteranceRecord record) {
  if (by_id_.count(record.id)) fail(ErrorCode::DuplicateId, "duplicate utterance id " + record.id);
  const auto pos = std::lower_bound(records_.begin(), records_.end(), record.id,
                                    [](const UtteranceRecord& r, const std::string& id) { return r.id < id; });
  records_.insert(pos, std::move(record));
  by_id_.clear();
  for (std::size_t i = 0; i < records_.size(); ++i) by_id_[records_[i].id] = i;
}

const UtteranceRecord& CorpusIndex::at(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) fail(ErrorCode::NotFound, "unknown utterance " + id);
  return records_[it->second];
}

std::vector<std::string> CorpusIndex::speakers() const {
  std::set<std::string> s;
  for (const auto& r : records_) s.insert(r.speaker_id);
  return {s.begin(), s.end()};
}

std::map<std::pair<std::string, Emotion>, std::vector<std::string>> CorpusIndex::groups() const {
  std::map<std::pair<std::string, Emotion>, std::vector<std::string>> out;
  for (const auto& r : records_) out[{r.speaker_id, r.emotion_label}].push_back(r.id);
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

void finish_record(UtteranceRecord& rec, const LoadOptions& options, const fs::path& alignment_dir) {
  if (!fs::exists(rec.audio_path))
    fail(ErrorCode::MissingAudio, "audio for " + rec.id + " not found: " + rec.audio_path.string());
  WavInfo info;
  try {
    info = read_wav_info(rec.audio_path);
  } catch (const Error& e) {
    fail(ErrorCode::MissingAudio, "audio for " + rec.id + " not decodable: " + e.what());
  }
  rec.sample_rate = info.sample_rate;
  if (info.sample_rate != 16000 && !options.allow_resample)
    fail(ErrorCode::BadSampleRate, rec.id + " is sampled at " + std::to_string(info.sample_rate) +
                                       " Hz; 16000 Hz required (enable resampling to convert)");
  rec.duration = info.sample_rate > 0 ? static_cast<double>(info.frames) / info.sample_rate : 0.0;
  if (rec.duration <= 0.0) fail(ErrorCode::MissingAudio, "audio for " + rec.id + " is empty");
  const fs::path align = alignment_dir / (rec.id + ".json");
  if (fs::exists(align)) rec.alignment_path = align;
}

CorpusIndex load_manifest(const fs::path& root, const fs::path& manifest, const LoadOptions& options,
                          const fs::path& alignment_dir) {
  CorpusIndex index;
  index.root = root;
  const auto rows = parse_csv(read_file(manifest));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (i == 0 && !row.empty() && row[0] == "id") continue;  // header
    if (row.size() < 5)
      fail(ErrorCode::CorruptPayload, "manifest row " + std::to_string(i + 1) + " has " +
                                          std::to_string(row.size()) + " fields");
    UtteranceRecord rec;
    rec.id = row[0];
    rec.speaker_id = row[1];
    const auto emotion = parse_emotion(row[2]);
    if (!emotion) fail(ErrorCode::InvalidValue, "unknown emotion '" + row[2] + "' for " + rec.id);
    rec.emotion_label = *emotion;
    rec.text = row[3];
    rec.audio_path = root / row[4];
    if (row.size() > 5) rec.gender = parse_gender(row[5]);
    finish_record(rec, options, alignment_dir);
    index.add(std::move(rec));
  }
  return index;
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

CorpusIndex scan_esd(const fs::path& root, const LoadOptions& options, const fs::path& alignment_dir) {
  CorpusIndex index;
  index.root = root;
  std::vector<fs::path> speaker_dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory() && fs::exists(entry.path() / (entry.path().filename().string() + ".txt")))
      speaker_dirs.push_back(entry.path());
  std::sort(speaker_dirs.begin(), speaker_dirs.end());

  for (const auto& dir : speaker_dirs) {
    const std::string speaker = dir.filename().string();
    std::map<std::string, fs::path> wavs;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".wav")
        wavs[entry.path().stem().string()] = entry.path();

    std::ifstream in(dir / (speaker + ".txt"));
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty()) continue;
      std::vector<std::string> parts;
      std::stringstream ss(line);
      std::string part;
      while (std::getline(ss, part, '\t')) parts.push_back(trim(part));
      if (parts.size() < 3) {
        index.warnings.push_back("skipping malformed transcript line in " + speaker + ": " + line);
        continue;
      }
      const auto emotion = parse_emotion(parts[2]);
      if (!emotion) {
        index.warnings.push_back("skipping line with unknown emotion: " + line);
        continue;
      }
      UtteranceRecord rec;
      rec.id = parts[0];
      rec.speaker_id = speaker;
      rec.emotion_label = *emotion;
      rec.text = parts[1];
      auto it = wavs.find(rec.id);
      if (it == wavs.end()) fail(ErrorCode::MissingAudio, "no audio found for " + rec.id);
      rec.audio_path = it->second;
      finish_record(rec, options, alignment_dir);
      index.add(std::move(rec));
    }
  }
  return index;
}

}  // namespace

CorpusIndex load_corpus(const fs::path& root, const std::optional<fs::path>& manifest,
                        const LoadOptions& options) {
  if (!fs::is_directory(root)) fail(ErrorCode::NotFound, "corpus root " + root.string() + " missing");
  const fs::path alignment_dir = options.alignment_dir.value_or(root / "alignments");
  CorpusIndex index = manifest ? load_manifest(root, *manifest, options, alignment_dir)
                               : scan_esd(root, options, alignment_dir);
  if (index.empty()) index.warnings.push_back("corpus at " + root.string() + " is empty");
  return index;
}

Waveform load_audio(const UtteranceRecord& record) {
  Waveform wave = read_wav(record.audio_path);
  if (wave.sample_rate != 16000) {
    wave.samples = resample(wave.samples, wave.sample_rate, 16000);
    wave.sample_rate = 16000;
  }
  return wave;
}

void write_manifest(const fs::path& file, const CorpusIndex& index) {
  std::string out = "id,speaker,emotion,text,audio_relpath,gender\n";
  for (const auto& r : index.records()) {
    const fs::path rel = index.root.empty() ? r.audio_path : fs::relative(r.audio_path, index.root);
    out += csv_escape(r.id) + "," + csv_escape(r.speaker_id) + "," +
           std::string(emotion_name(r.emotion_label)) + "," + csv_escape(r.text) + "," +
           csv_escape(rel.generic_string()) + "," + std::string(gender_name(r.gender)) + "\n";
  }
  write_file(file, out);
}

FrameMatrix load_external_embedding(const fs::path& file, const UtteranceRecord& record) {
  FrameMatrix m = read_frame_matrix(file);
  if (m.utterance_id != record.id)
    fail(ErrorCode::AlignmentMismatch,
         "embedding file is for '" + m.utterance_id + "', expected '" + record.id + "'");
  require(m.frame_rate > 0.0, ErrorCode::CorruptPayload, "embedding frame rate must be positive");
  const double expected = record.duration * m.frame_rate;
  if (std::abs(static_cast<double>(m.frames()) - expected) > 2.0 + 1e-9)
    fail(ErrorCode::AlignmentMismatch, "embedding for " + record.id + " has " +
                                           std::to_string(m.frames()) + " frames, expected ~" +
                                           std::to_string(expected));
  return m;
}

}  // namespace hedtts::corpus
