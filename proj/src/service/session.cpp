// Copyright 2026 The hedtts Authors
// SPDX-License-Identifier: Apache-2.0

#include "hedtts/service/session.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hedtts/common/error.hpp"

namespace hedtts::service {
namespace fs = std::filesystem;

namespace {

void apply_record(SessionState& s, const nlohmann::json& rec) {
  const std::string op = rec.at("op").get<std::string>();
  if (op == "create") {
    s.utterance_id = rec.at("utterance_id").get<std::string>();
    s.history = {hed::hed_from_json(rec.at("hed"))};
    s.edits.clear();
  } else if (op == "edit") {
    const auto e = hed::edit_from_json(rec.at("edit"));
    s.history.push_back(hed::apply_edit(s.current(), e));
    s.edits.push_back(e);
  } else if (op == "undo") {
    require(s.history.size() > 1, ErrorCode::CorruptPayload, "undo without a prior edit in log");
    s.history.pop_back();
    s.edits.pop_back();
  } else if (op == "synthesize") {
    s.last_audio_id = rec.at("audio_id").get<std::string>();
  } else {
    fail(ErrorCode::CorruptPayload, "unknown session record '" + op + "'");
  }
}

}  // namespace

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
  std::vector<fs::path> logs;
  for (const auto& e : fs::directory_iterator(dir_))
    if (e.path().extension() == ".jsonl") logs.push_back(e.path());
  std::sort(logs.begin(), logs.end());
  for (const auto& log : logs) {
    auto entry = std::make_unique<Entry>();
    entry->state = replay(log);
    const std::string id = entry->state.session_id;
    int n = 0;
    if (std::sscanf(id.c_str(), "s%d", &n) == 1) next_ = std::max(next_, n + 1);
    sessions_[id] = std::move(entry);
  }
}

SessionState SessionStore::replay(const fs::path& log) {
  std::ifstream in(log);
  if (!in) fail(ErrorCode::IoError, "cannot read session log " + log.string());
  SessionState s;
  s.session_id = log.stem().string();
  std::string line;
  try {
    while (std::getline(in, line))
      if (!line.empty()) apply_record(s, nlohmann::json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::CorruptPayload, "session log " + log.string() + ": " + e.what());
  }
  if (s.history.empty()) fail(ErrorCode::CorruptPayload, "session log " + log.string() + " has no create record");
  return s;
}

SessionStore::Entry& SessionStore::entry(const std::string& session_id) const {
  std::shared_lock lock(map_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) fail(ErrorCode::NotFound, "unknown session " + session_id);
  return *it->second;
}

void SessionStore::append(const std::string& session_id, const nlohmann::json& record) {
  std::ofstream out(dir_ / (session_id + ".jsonl"), std::ios::app);
  if (!out) fail(ErrorCode::IoError, "cannot append to session log " + session_id);
  out << record.dump() << "\n";
  out.flush();
  if (!out) fail(ErrorCode::IoError, "cannot append to session log " + session_id);
}

SessionState SessionStore::create(const std::string& utterance_id, const hed::HierarchicalED& initial) {
  hed::validate_hed(initial);
  std::unique_lock lock(map_mutex_);
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%04d", next_++);
  const std::string id = buf;
  auto e = std::make_unique<Entry>();
  e->state.session_id = id;
  apply_record(e->state, {{"op", "create"}, {"utterance_id", utterance_id}, {"hed", hed::hed_to_json(initial)}});
  append(id, {{"op", "create"}, {"utterance_id", utterance_id}, {"hed", hed::hed_to_json(initial)}});
  SessionState out = e->state;
  sessions_[id] = std::move(e);
  return out;
}

SessionState SessionStore::edit(const std::string& session_id, const hed::EDEdit& edit) {
  Entry& e = entry(session_id);
  std::lock_guard lock(e.mutex);
  auto next = hed::apply_edit(e.state.current(), edit);
  append(session_id, {{"op", "edit"}, {"edit", hed::edit_to_json(edit)}});
  e.state.history.push_back(std::move(next));
  e.state.edits.push_back(edit);
  return e.state;
}

SessionState SessionStore::undo(const std::string& session_id) {
  Entry& e = entry(session_id);
  std::lock_guard lock(e.mutex);
  if (e.state.history.size() <= 1) fail(ErrorCode::InvalidArgument, "nothing to undo in session " + session_id);
  append(session_id, {{"op", "undo"}});
  e.state.history.pop_back();
  e.state.edits.pop_back();
  return e.state;
}

void SessionStore::record_audio(const std::string& session_id, const std::string& audio_id) {
  Entry& e = entry(session_id);
  std::lock_guard lock(e.mutex);
  append(session_id, {{"op", "synthesize"}, {"audio_id", audio_id}});
  e.state.last_audio_id = audio_id;
}

SessionState SessionStore::get(const std::string& session_id) const {
  Entry& e = entry(session_id);
  std::lock_guard lock(e.mutex);
  return e.state;
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(map_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, e] : sessions_) out.push_back(id);
  return out;
}

}  // namespace hedtts::service
