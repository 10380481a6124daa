// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hedtts/hed/hed.hpp"

namespace hedtts::service {

struct SessionState {
  std::string session_id;
  std::string utterance_id;
  std::vector<hed::HierarchicalED> history;  // history.back() is the current HED
  std::vector<hed::EDEdit> edits;            // edits applied since creation, undos removed
  std::optional<std::string> last_audio_id;

  const hed::HierarchicalED& current() const { return history.back(); }
};

/// Sessions persisted as append-only JSONL logs (`<dir>/<id>.jsonl`) of
/// create / edit / undo / synthesize records. Opening a directory replays
/// every log, so a restarted store holds identical HEDs. Edits to one
/// session are serialised; different sessions proceed concurrently.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir);

  SessionState create(const std::string& utterance_id, const hed::HierarchicalED& initial);
  /// Throws NotFound for an unknown id and the hed module's errors for
  /// invalid edits (the log is untouched on failure).
  SessionState edit(const std::string& session_id, const hed::EDEdit& edit);
  /// Throws InvalidArgument when there is nothing to undo.
  SessionState undo(const std::string& session_id);
  void record_audio(const std::string& session_id, const std::string& audio_id);
  SessionState get(const std::string& session_id) const;
  std::vector<std::string> ids() const;

  /// Rebuilds a session purely from its log.
  static SessionState replay(const std::filesystem::path& log);

 private:
  struct Entry {
    std::mutex mutex;
    SessionState state;
  };
  Entry& entry(const std::string& session_id) const;
  void append(const std::string& session_id, const nlohmann::json& record);

  std::filesystem::path dir_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::unique_ptr<Entry>> sessions_;
  int next_ = 1;
};

}  // namespace hedtts::service
