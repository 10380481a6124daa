// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/tts/speaker.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "hedtts/common/error.hpp"
#include "hedtts/common/hash.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/rng.hpp"

namespace hedtts::tts {

namespace {

Vector hashed_normal(const std::string& key, int dim) {
  Rng rng(fnv1a(key));
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.normal();
  return v;
}

}  // namespace

Vector pseudo_speaker_embedding(const std::string& speaker_id, int dim) {
  return hashed_normal("speaker:" + speaker_id, dim).normalized();
}

Vector pseudo_utterance_embedding(const std::string& speaker_id, const std::string& utterance_id, int dim,
                                  double spread) {
  const Vector base = pseudo_speaker_embedding(speaker_id, dim);
  const Vector noise = hashed_normal("utterance:" + utterance_id, dim) / std::sqrt(static_cast<double>(dim));
  return (base + spread * noise).normalized();
}

Vector load_speaker_embedding(const std::filesystem::path& file) {
  const std::string text = read_file(file);
  std::vector<double> values;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '[' || text[first] == '{')) {
    try {
      const auto doc = nlohmann::json::parse(text);
      values = (doc.is_object() ? doc.at("embedding") : doc).get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::CorruptPayload, "speaker embedding " + file.string() + " is malformed: " + e.what());
    }
  } else {
    std::istringstream in(text);
    double x = 0.0;
    while (in >> x) values.push_back(x);
    if (!in.eof()) fail(ErrorCode::CorruptPayload, "speaker embedding " + file.string() + " has non-numeric content");
  }
  require(!values.empty(), ErrorCode::CorruptPayload, "speaker embedding " + file.string() + " is empty");
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void save_speaker_embedding(const std::filesystem::path& file, const Vector& embedding) {
  write_file(file, nlohmann::json(std::vector<double>(embedding.data(), embedding.data() + embedding.size())).dump() + "\n");
}

}  // namespace hedtts::tts
