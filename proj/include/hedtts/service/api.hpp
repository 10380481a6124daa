// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "hedtts/common/error.hpp"
#include "hedtts/intensity/model.hpp"
#include "hedtts/service/pipeline.hpp"
#include "hedtts/service/session.hpp"
#include "hedtts/tts/model.hpp"

namespace hedtts::service {

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// HTTP status for an error code: 404 NotFound, 409 ModelNotLoaded, 422
/// for invalid values and indices, 400 for other malformed input, else 500.
int http_status(ErrorCode code);

/// Transport-independent request handler behind the HTTP server.
///
///   GET  /health
///   GET  /utterances
///   GET  /utterances/{id}/alignment
///   GET  /utterances/{id}/hed
///   POST /sessions                   {utterance_id, hed?}
///   GET  /sessions/{id}
///   POST /sessions/{id}/edit         EDEdit
///   POST /sessions/{id}/undo
///   POST /sessions/{id}/synthesize   {seed?}
///   GET  /audio/{id}                 audio/wav
///
/// Models are shared read-only; either may be null. Sessions and audio are
/// kept under `state_dir` so a restarted service sees the same state.
class ApiService {
 public:
  ApiService(const Workspace& workspace, const intensity::IntensityModel* extractor,
             const tts::AcousticModel* acoustic, const std::filesystem::path& state_dir);

  ApiResponse handle(const std::string& method, const std::string& path, const std::string& body);

 private:
  hed::HierarchicalED utterance_hed(const std::string& id);
  nlohmann::json session_json(const SessionState& s) const;
  ApiResponse route(const std::string& method, const std::string& path, const std::string& body);

  const Workspace& ws_;
  const intensity::IntensityModel* extractor_;
  const tts::AcousticModel* acoustic_;
  std::filesystem::path audio_dir_;
  SessionStore sessions_;
  std::mutex hed_mutex_;
  std::map<std::string, hed::HierarchicalED> hed_cache_;
  std::mutex audio_mutex_;
};

/// Audio resource id: hash of everything that determines the waveform.
std::string audio_resource_id(const std::string& utterance_id, const hed::HierarchicalED& hed,
                              const tts::SynthesisRequest& request);

/// HTTP transport for an ApiService. Requests run on a thread pool.
class HttpServer {
 public:
  explicit HttpServer(ApiService& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called from another thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hedtts::service
