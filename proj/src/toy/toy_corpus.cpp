// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/toy/toy_corpus.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>

#include "hedtts/common/error.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/rng.hpp"
#include "hedtts/hed/hed.hpp"
#include "hedtts/tts/phonemes.hpp"

namespace hedtts::toy {

namespace fs = std::filesystem;

namespace {

enum class PhoneClass { Silence, Vowel, Approximant, Nasal, Fricative, VoicedFricative, Stop };

struct PhoneSpec {
  PhoneClass cls = PhoneClass::Silence;
  std::array<double, 3> formants = {500, 1500, 2500};
  double noise_emphasis = 0.0;  // 0 flat, 1 strongly high-passed
};

PhoneSpec phone_spec(const std::string& symbol) {
  static const std::map<std::string, std::array<double, 3>> vowels = {
      {"AA", {730, 1090, 2440}}, {"AE", {660, 1720, 2410}}, {"AH", {640, 1190, 2390}}, {"AO", {570, 840, 2410}},
      {"AW", {700, 1200, 2500}}, {"AY", {700, 1500, 2500}}, {"EH", {530, 1840, 2480}}, {"ER", {490, 1350, 1690}},
      {"EY", {480, 2000, 2600}}, {"IH", {390, 1990, 2550}}, {"IY", {270, 2290, 3010}}, {"OW", {500, 900, 2400}},
      {"OY", {550, 1000, 2450}}, {"UH", {440, 1020, 2240}}, {"UW", {300, 870, 2240}}};
  static const std::map<std::string, std::array<double, 3>> approximants = {
      {"L", {360, 1300, 2700}}, {"R", {420, 1300, 1600}}, {"W", {300, 700, 2200}}, {"Y", {280, 2200, 2900}}};
  PhoneSpec s;
  if (corpus::is_silence_symbol(symbol)) return s;
  std::string base = symbol;
  while (!base.empty() && std::isdigit(static_cast<unsigned char>(base.back()))) base.pop_back();
  if (auto it = vowels.find(base); it != vowels.end()) {
    s.cls = PhoneClass::Vowel;
    s.formants = it->second;
  } else if (auto a = approximants.find(base); a != approximants.end()) {
    s.cls = PhoneClass::Approximant;
    s.formants = a->second;
  } else if (base == "M" || base == "N" || base == "NG") {
    s.cls = PhoneClass::Nasal;
    s.formants = {280, 1100, 2500};
  } else if (base == "V" || base == "Z" || base == "ZH" || base == "DH") {
    s.cls = PhoneClass::VoicedFricative;
    s.formants = {300, 1400, 2500};
    s.noise_emphasis = base == "Z" || base == "ZH" ? 0.9 : 0.5;
  } else if (base == "F" || base == "S" || base == "SH" || base == "TH" || base == "HH") {
    s.cls = PhoneClass::Fricative;
    s.noise_emphasis = base == "S" || base == "SH" ? 0.95 : (base == "HH" ? 0.2 : 0.6);
  } else {
    s.cls = PhoneClass::Stop;
    s.noise_emphasis = 0.7;
  }
  return s;
}

double phone_seconds(PhoneClass cls, Rng& rng) {
  switch (cls) {
    case PhoneClass::Silence: return rng.uniform(0.08, 0.12);
    case PhoneClass::Vowel: return rng.uniform(0.09, 0.14);
    case PhoneClass::Stop: return rng.uniform(0.06, 0.09);
    default: return rng.uniform(0.05, 0.08);
  }
}

double class_gain(PhoneClass cls) {
  switch (cls) {
    case PhoneClass::Vowel: return 1.0;
    case PhoneClass::Approximant: return 0.6;
    case PhoneClass::Nasal: return 0.35;
    case PhoneClass::VoicedFricative: return 0.3;
    default: return 0.0;
  }
}

double noise_gain(PhoneClass cls) {
  switch (cls) {
    case PhoneClass::Fricative: return 0.08;
    case PhoneClass::VoicedFricative: return 0.04;
    case PhoneClass::Stop: return 0.1;
    case PhoneClass::Silence: return 0.002;
    default: return 0.0;
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

const std::vector<std::string>& toy_vocabulary() {
  static const std::vector<std::string> words = {
      "the",   "cat",  "sat",    "dog",     "ran",     "sun",    "is",     "big",     "red",    "blue",
      "sky",   "we",   "go",     "home",    "now",     "mama",   "nine",   "moon",    "lovely", "window",
      "morning", "yellow", "lemon", "rainbow", "animal", "melody", "no",   "yes",     "so",     "and"};
  return words;
}

}  // namespace

std::vector<ToySpeaker> toy_speakers(int count) {
  static const double f0s[] = {110, 200, 135, 225, 150, 180, 100, 240};
  static const double scales[] = {1.0, 1.15, 1.04, 1.2, 1.07, 1.12, 0.97, 1.22};
  std::vector<ToySpeaker> out;
  for (int i = 0; i < count; ++i) {
    ToySpeaker s;
    char id[16];
    std::snprintf(id, sizeof id, "spk%02d", i + 1);
    s.id = id;
    s.f0 = f0s[i % 8] * (1.0 + 0.03 * (i / 8));
    s.formant_scale = scales[i % 8];
    s.gender = s.f0 < 170 ? corpus::Gender::Male : corpus::Gender::Female;
    out.push_back(s);
  }
  return out;
}

ToyUtterance render_utterance(const std::string& id, const ToySpeaker& speaker, const std::vector<std::string>& words,
                              Emotion emotion, double intensity, const EmotionCues& cues, std::uint64_t seed) {
  require(!words.empty(), ErrorCode::EmptyInput, "utterance needs at least one word");
  require(intensity >= 0.0 && intensity <= 1.0, ErrorCode::InvalidValue, "intensity must lie in [0, 1]");
  Rng rng(seed);
  const tts::Lexicon lexicon = tts::Lexicon::builtin();
  ToyUtterance u;
  u.id = id;
  u.speaker_id = speaker.id;
  u.gender = speaker.gender;
  u.emotion = emotion;
  u.intensity = emotion == Emotion::Neutral ? 0.0 : intensity;
  u.alignment.utterance_id = id;

  // phone layout in whole samples
  struct Planned {
    std::string symbol;
    int word;
    long begin, end;
  };
  std::vector<Planned> plan;
  long cursor = 0;
  auto push = [&](const std::string& symbol, int word) {
    const long len = std::lround(phone_seconds(phone_spec(symbol).cls, rng) * kSampleRate);
    plan.push_back({symbol, word, cursor, cursor + len});
    cursor += len;
  };
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (w == 0) push("SIL", 0);
    for (const auto& p : lexicon.pronounce(words[w])) push(p, static_cast<int>(w));
    if (w + 1 == words.size()) push("SIL", static_cast<int>(w));
    u.text += (w ? " " : "") + words[w];
  }
  for (std::size_t w = 0; w < words.size(); ++w) {
    corpus::AlignedWord aw;
    aw.text = words[w];
    aw.start = 1e9;
    for (const auto& p : plan)
      if (p.word == static_cast<int>(w)) {
        aw.start = std::min(aw.start, static_cast<double>(p.begin) / kSampleRate);
        aw.end = std::max(aw.end, static_cast<double>(p.end) / kSampleRate);
      }
    u.alignment.words.push_back(aw);
  }
  for (const auto& p : plan)
    u.alignment.phones.push_back(
        {p.symbol, static_cast<double>(p.begin) / kSampleRate, static_cast<double>(p.end) / kSampleRate, p.word});

  const double s = u.intensity;
  double log_gain = 0.0, tilt = 1.0, f0_ratio = 1.0, rise = 0.0;
  switch (emotion) {
    case Emotion::Sad: log_gain = cues.sad_log_gain * s; break;
    case Emotion::Angry:
      log_gain = cues.angry_log_gain * s;
      tilt += cues.angry_tilt * s;
      break;
    case Emotion::Happy: f0_ratio += cues.happy_f0_ratio * s; break;
    case Emotion::Surprise: rise = cues.surprise_f0_rise * s; break;
    case Emotion::Neutral: break;
  }
  const double gain = std::exp(log_gain);
  const double total = static_cast<double>(cursor);
  u.audio.sample_rate = kSampleRate;
  u.audio.samples.assign(static_cast<std::size_t>(cursor), 0.0);

  double phase = 0.0;
  double noise_prev = 0.0;
  constexpr int kBlock = 64;
  const long ramp = kSampleRate / 200;  // 5 ms
  std::vector<double> amps;
  for (const auto& p : plan) {
    const PhoneSpec spec = phone_spec(p.symbol);
    const double voice = class_gain(spec.cls);
    const double noise = noise_gain(spec.cls);
    const long len = p.end - p.begin;
    const long closure = spec.cls == PhoneClass::Stop ? len * 6 / 10 : 0;
    for (long i = 0; i < len; ++i) {
      const long n = p.begin + i;
      const double pos = static_cast<double>(n) / total;
      const double f0 = speaker.f0 * f0_ratio * (1.0 + rise * pos) * (1.0 - 0.1 * pos);
      if (voice > 0.0 && (i % kBlock == 0 || amps.empty())) {
        const int harmonics = std::max(1, static_cast<int>(4000.0 / f0));
        amps.assign(static_cast<std::size_t>(harmonics), 0.0);
        double power = 0.0;
        for (int k = 1; k <= harmonics; ++k) {
          const double f = k * f0;
          double env = 0.0;
          for (int j = 0; j < 3; ++j) {
            const double centre = spec.formants[static_cast<std::size_t>(j)] * speaker.formant_scale;
            const double bw = 80.0 + 40.0 * j;
            env += 1.0 / (1.0 + std::pow((f - centre) / bw, 2.0));
          }
          env *= std::pow(std::max(f, 100.0) / 100.0, -tilt);
          amps[static_cast<std::size_t>(k - 1)] = env;
          power += 0.5 * env * env;
        }
        const double norm = 0.1 / std::sqrt(std::max(power, 1e-12));
        for (double& a : amps) a *= norm;
      }
      phase += 2.0 * M_PI * f0 / kSampleRate;
      if (phase > 2.0 * M_PI * 1e6) phase = std::fmod(phase, 2.0 * M_PI);
      double x = 0.0;
      if (voice > 0.0)
        for (std::size_t k = 0; k < amps.size(); ++k) x += amps[k] * std::sin(static_cast<double>(k + 1) * phase);
      x *= voice;
      const double white = rng.uniform(-1.0, 1.0);
      const double shaped = white - spec.noise_emphasis * noise_prev;
      noise_prev = white;
      if (i >= closure) x += noise * shaped;
      double env = 1.0;
      if (i < ramp) env = 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(i) / ramp);
      if (len - 1 - i < ramp) env = std::min(env, 0.5 - 0.5 * std::cos(M_PI * static_cast<double>(len - 1 - i) / ramp));
      u.audio.samples[static_cast<std::size_t>(n)] = gain * env * x;
    }
    amps.clear();
  }
  corpus::validate_alignment(u.alignment);
  return u;
}

std::vector<ToyUtterance> generate_toy_corpus(const ToyCorpusConfig& config) {
  require(config.speakers >= 1 && config.utterances_per_cell >= 1, ErrorCode::InvalidArgument,
          "toy corpus needs speakers and utterances");
  require(config.min_words >= 1 && config.max_words >= config.min_words, ErrorCode::InvalidArgument,
          "bad word count range");
  require(!config.intensity_levels.empty(), ErrorCode::InvalidArgument, "no intensity levels");
  Rng rng(config.seed);
  const auto& vocab = toy_vocabulary();
  std::vector<ToyUtterance> out;
  for (const ToySpeaker& spk : toy_speakers(config.speakers)) {
    for (Emotion e : config.emotions) {
      for (int k = 0; k < config.utterances_per_cell; ++k) {
        const int nwords = config.min_words + static_cast<int>(rng.index(
                                                  static_cast<std::uint64_t>(config.max_words - config.min_words + 1)));
        std::vector<std::string> words;
        for (int w = 0; w < nwords; ++w) words.push_back(vocab[rng.index(vocab.size())]);
        const double level = config.intensity_levels[static_cast<std::size_t>(k) % config.intensity_levels.size()];
        char id[64];
        std::snprintf(id, sizeof id, "%s_%s_%03d", spk.id.c_str(), lower(emotion_name(e)).c_str(), k + 1);
        out.push_back(render_utterance(id, spk, words, e, level, config.cues, rng.next_u64()));
      }
    }
  }
  return out;
}

Matrix toy_hed_matrix(const ToyUtterance& utt) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(utt.alignment.phones.size()), hed::kHedColumns);
  const int e = intensity_index(utt.emotion);
  if (e >= 0)
    for (Level l : kAllLevels) m.col(hed::hed_column(l, e)).setConstant(utt.intensity);
  return m;
}

void write_toy_corpus(const fs::path& root, const std::vector<ToyUtterance>& utterances) {
  fs::create_directories(root / "wavs");
  fs::create_directories(root / "alignments");
  std::string manifest = "id,speaker,emotion,text,audio_relpath,gender\n";
  std::string labels = "id,emotion,intensity\n";
  for (const auto& u : utterances) {
    write_wav(root / "wavs" / (u.id + ".wav"), u.audio);
    corpus::write_alignment(root / "alignments" / (u.id + ".json"), u.alignment);
    manifest += corpus::csv_escape(u.id) + "," + corpus::csv_escape(u.speaker_id) + "," +
                std::string(emotion_name(u.emotion)) + "," + corpus::csv_escape(u.text) + ",wavs/" + u.id + ".wav," +
                std::string(corpus::gender_name(u.gender)) + "\n";
    char value[32];
    std::snprintf(value, sizeof value, "%.6g", u.intensity);
    labels += corpus::csv_escape(u.id) + "," + std::string(emotion_name(u.emotion)) + "," + value + "\n";
  }
  write_file(root / "manifest.csv", manifest);
  write_file(root / "intensities.csv", labels);
}

std::map<std::string, ToyLabel> read_toy_labels(const fs::path& file) {
  std::map<std::string, ToyLabel> out;
  const auto rows = corpus::parse_csv(read_file(file));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 && !rows[i].empty() && rows[i][0] == "id") continue;
    if (rows[i].size() < 3) fail(ErrorCode::CorruptPayload, "intensity row " + std::to_string(i + 1) + " is short");
    const auto e = parse_emotion(rows[i][1]);
    if (!e) fail(ErrorCode::CorruptPayload, "unknown emotion '" + rows[i][1] + "'");
    ToyLabel l;
    l.emotion = *e;
    try {
      l.intensity = std::stod(rows[i][2]);
    } catch (const std::exception&) {
      fail(ErrorCode::CorruptPayload, "bad intensity '" + rows[i][2] + "'");
    }
    out[rows[i][0]] = l;
  }
  return out;
}

}  // namespace hedtts::toy
