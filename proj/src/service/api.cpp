// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/service/api.hpp"

#include <regex>

#include "hedtts/common/error.hpp"
#include "hedtts/common/hash.hpp"
#include "hedtts/common/matrix_file.hpp"
#include "hedtts/common/wav.hpp"
#include "hedtts/corpus/alignment.hpp"
#include "hedtts/tts/phonemes.hpp"
#include "hedtts/tts/synthesize.hpp"

namespace hedtts::service {
namespace fs = std::filesystem;

namespace {

ApiResponse json_response(int status, const nlohmann::json& body) { return {status, "application/json", body.dump()}; }

ApiResponse error_response(ErrorCode code, const std::string& message) {
  nlohmann::json body = {{"error", to_string(code)}, {"message", message}};
  // hed validation messages read "<field>: <reason>"
  const auto colon = message.find(':');
  if (http_status(code) == 422 && colon != std::string::npos && colon < 16) body["field"] = message.substr(0, colon);
  return json_response(http_status(code), body);
}

nlohmann::json parse_body(const std::string& body) {
  if (body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptPayload, std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::ModelNotLoaded:
    case ErrorCode::MissingModel: return 409;
    case ErrorCode::InvalidValue:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::AlignmentMismatch:
    case ErrorCode::LengthMismatch: return 422;
    case ErrorCode::CorruptPayload:
    case ErrorCode::SchemaVersionMismatch:
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyInput:
    case ErrorCode::UnknownSymbol: return 400;
    default: return 500;
  }
}

std::string audio_resource_id(const std::string& utterance_id, const hed::HierarchicalED& hed,
                              const tts::SynthesisRequest& request) {
  Fnv1a h;
  h.update(utterance_id);
  h.update(hed::serialize_hed(hed));
  h.update(request.speaker_embedding);
  const std::string params = std::to_string(request.seed) + "|" + std::to_string(request.n_ode_steps) + "|" +
                             std::to_string(request.temperature) + "|" + std::to_string(request.length_scale);
  h.update(params);
  return h.hex();
}

ApiService::ApiService(const Workspace& workspace, const intensity::IntensityModel* extractor,
                       const tts::AcousticModel* acoustic, const fs::path& state_dir)
    : ws_(workspace),
      extractor_(extractor),
      acoustic_(acoustic),
      audio_dir_(state_dir / "audio"),
      sessions_(state_dir / "sessions") {
  fs::create_directories(audio_dir_);
}

hed::HierarchicalED ApiService::utterance_hed(const std::string& id) {
  ws_.index().at(id);
  {
    std::lock_guard lock(hed_mutex_);
    auto it = hed_cache_.find(id);
    if (it != hed_cache_.end()) return it->second;
  }
  std::optional<hed::HierarchicalED> hed = cached_hed(ws_, id);
  if (!hed) {
    if (extractor_ == nullptr)
      fail(ErrorCode::ModelNotLoaded, "no cached HED for " + id + " and no extractor loaded");
    hed = extract_utterance_hed(ws_, *extractor_, id);
  }
  std::lock_guard lock(hed_mutex_);
  return hed_cache_.emplace(id, *hed).first->second;
}

nlohmann::json ApiService::session_json(const SessionState& s) const {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : s.edits) edits.push_back(hed::edit_to_json(e));
  return {{"session_id", s.session_id},
          {"utterance_id", s.utterance_id},
          {"hed", hed::hed_to_json(s.current())},
          {"edits", edits},
          {"can_undo", s.history.size() > 1},
          {"last_audio_id", s.last_audio_id ? nlohmann::json(*s.last_audio_id) : nlohmann::json(nullptr)}};
}

ApiResponse ApiService::handle(const std::string& method, const std::string& path, const std::string& body) {
  try {
    return route(method, path, body);
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_response(ErrorCode::CorruptPayload, e.what());
  } catch (const std::exception& e) {
    return json_response(500, {{"error", "Internal"}, {"message", e.what()}});
  }
}

ApiResponse ApiService::route(const std::string& method, const std::string& path, const std::string& body) {
  static const std::regex utterance_re(R"(^/utterances/([^/]+)/(alignment|hed)$)");
  static const std::regex session_re(R"(^/sessions/([^/]+)(/(edit|undo|synthesize))?$)");
  static const std::regex audio_re(R"(^/audio/([0-9a-f]+)$)");
  std::smatch m;

  if (method == "GET" && path == "/health") {
    return json_response(200, {{"status", "ok"},
                               {"version", kVersion},
                               {"hed_schema", hed::kHedVersion},
                               {"extractor_loaded", extractor_ != nullptr},
                               {"acoustic_loaded", acoustic_ != nullptr},
                               {"utterances", ws_.index().size()}});
  }
  if (method == "GET" && path == "/utterances") {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : ws_.index().records())
      out.push_back({{"id", r.id},
                     {"speaker", r.speaker_id},
                     {"emotion", emotion_name(r.emotion_label)},
                     {"text", r.text},
                     {"duration", r.duration},
                     {"has_alignment", r.alignment_path.has_value()}});
    return json_response(200, out);
  }
  if (method == "GET" && std::regex_match(path, m, utterance_re)) {
    const std::string id = m[1];
    ws_.index().at(id);
    if (m[2] == "alignment") return json_response(200, corpus::alignment_to_json(ws_.alignment(id)));
    return json_response(200, hed::hed_to_json(utterance_hed(id)));
  }
  if (method == "POST" && path == "/sessions") {
    const auto req = parse_body(body);
    if (!req.contains("utterance_id") || !req.at("utterance_id").is_string())
      fail(ErrorCode::InvalidValue, "utterance_id: required");
    const std::string id = req.at("utterance_id").get<std::string>();
    ws_.index().at(id);
    hed::HierarchicalED initial;
    if (req.contains("hed")) {
      initial = hed::hed_from_json(req.at("hed"));
      const auto track = ws_.alignment(id);
      if (initial.num_phones() != static_cast<int>(track.phones.size()))
        fail(ErrorCode::AlignmentMismatch, "hed: has " + std::to_string(initial.num_phones()) + " rows, " + id +
                                               " has " + std::to_string(track.phones.size()) + " phones");
    } else {
      initial = utterance_hed(id);
    }
    return json_response(201, session_json(sessions_.create(id, initial)));
  }
  if (std::regex_match(path, m, session_re)) {
    const std::string sid = m[1];
    const std::string action = m[3];
    if (method == "GET" && action.empty()) return json_response(200, session_json(sessions_.get(sid)));
    if (method == "POST" && action == "edit") {
      const SessionState before = sessions_.get(sid);
      const hed::EDEdit edit = hed::edit_from_json(parse_body(body));
      const std::string violation = hed::edit_violation(before.current(), edit);
      if (!violation.empty()) fail(ErrorCode::InvalidValue, violation);
      return json_response(200, session_json(sessions_.edit(sid, edit)));
    }
    if (method == "POST" && action == "undo") {
      const SessionState s = sessions_.get(sid);
      if (s.history.size() <= 1)
        return json_response(409, {{"error", "NothingToUndo"}, {"message", "session " + sid + " has no edits"}});
      return json_response(200, session_json(sessions_.undo(sid)));
    }
    if (method == "POST" && action == "synthesize") {
      const SessionState s = sessions_.get(sid);
      if (acoustic_ == nullptr) fail(ErrorCode::ModelNotLoaded, "no acoustic model loaded");
      const auto req = parse_body(body);
      const std::uint64_t seed = req.value("seed", ws_.config().seed);
      const tts::SynthesisRequest request = utterance_request(ws_, *acoustic_, s.utterance_id, s.current(), seed);
      const std::string audio_id = audio_resource_id(s.utterance_id, s.current(), request);
      const fs::path wav = audio_dir_ / (audio_id + ".wav");
      double duration = 0.0;
      {
        std::lock_guard lock(audio_mutex_);
        if (!fs::exists(wav)) {
          const auto result = tts::synthesize(acoustic_, request);
          write_file(wav, encode_wav(result.waveform));
          duration = result.waveform.duration();
        } else {
          duration = read_wav_info(wav).frames / 16000.0;
        }
      }
      sessions_.record_audio(sid, audio_id);
      return json_response(200, {{"audio_id", audio_id},
                                 {"url", "/audio/" + audio_id},
                                 {"seed", seed},
                                 {"duration", duration},
                                 {"session_id", sid}});
    }
  }
  if (method == "GET" && std::regex_match(path, m, audio_re)) {
    const fs::path wav = audio_dir_ / (std::string(m[1]) + ".wav");
    if (!fs::exists(wav)) fail(ErrorCode::NotFound, "unknown audio id " + std::string(m[1]));
    return {200, "audio/wav", read_file(wav)};
  }
  fail(ErrorCode::NotFound, "no route for " + method + " " + path);
}

}  // namespace hedtts::service
