#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "delib/events.hpp"
#include "delib/fifo_mutex.hpp"
#include "delib/gateway.hpp"
#include "delib/pipeline.hpp"
#include "delib/session_state.hpp"
#include "delib/session_store.hpp"

namespace delib {

// API-level failure. `code` is the stable machine-readable name
// (UnknownSession, UnknownPersona, ReflectionMissing, StructuredOutputFailed, ...).
class ServiceError : public std::runtime_error {
 public:
  ServiceError(std::string code, int http_status, const std::string& message, Json details = Json::object())
      : std::runtime_error(message), code_(std::move(code)), http_status_(http_status), details_(std::move(details)) {}

  const std::string& code() const noexcept { return code_; }
  int http_status() const noexcept { return http_status_; }
  const Json& details() const noexcept { return details_; }

  Json to_json() const { return Json{{"code", code_}, {"message", what()}, {"details", details_}}; }

 private:
  std::string code_;
  int http_status_;
  Json details_;
};

struct ServiceOptions {
  PipelineOptions pipeline;
  std::function<std::int64_t()> now_ms;  // wall clock; defaults to system_clock
};

struct AppendOutcome {
  std::int64_t seq = 0;
  double timestamp = 0.0;
  bool clamped = false;
};

struct AcceptOutcome {
  std::vector<StakeholderQuestion> question_list;
  bool duplicate = false;  // an entry with identical question text already existed
};

// Runs the persona pipeline for many sessions. Mutating calls on one session
// are applied one at a time in arrival order; different sessions proceed
// independently. Every completed mutation is persisted before it is visible.
class SessionService {
 public:
  SessionService(std::shared_ptr<Gateway> gateway, SessionStore store, ServiceOptions options = {});
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  std::string create_session(const AssemblyContext& context);
  SessionState get(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;

  AppendOutcome append_segment(const std::string& session_id, std::string speaker, std::string text,
                               std::optional<double> timestamp = std::nullopt);

  std::vector<StakeholderPersona> generate_stakeholders(const std::string& session_id);
  StakeholderReflection generate_reflection(const std::string& session_id, const std::string& persona_id);
  // Staged only: the question is returned and announced, not added to the list.
  StakeholderQuestion generate_question(const std::string& session_id, const std::string& persona_id);
  AcceptOutcome accept_question(const std::string& session_id, StakeholderQuestion question);

  // Writes the session's snapshot file (normally already current) and returns its path.
  std::filesystem::path snapshot(const std::string& session_id);
  // Throws ServiceError(CorruptSnapshot).
  static SessionState restore(const std::filesystem::path& file);

  std::shared_ptr<EventChannel> events(const std::string& session_id) const;

  // Re-persists every session and closes all event channels.
  void shutdown();

  const std::vector<std::string>& load_failures() const noexcept { return load_failures_; }

 private:
  struct Slot {
    FifoMutex op_mutex;
    mutable std::shared_mutex state_mutex;
    SessionState state;
    std::shared_ptr<EventChannel> events = std::make_shared<EventChannel>();
  };

  std::shared_ptr<Slot> slot(const std::string& session_id) const;
  SessionState read(const Slot& slot) const;
  void commit(Slot& slot, SessionState next);
  std::int64_t now_ms() const;
  std::string fresh_id();
  [[noreturn]] void fail_generation(Slot& slot, const char* operation, const std::exception_ptr& error);

  std::shared_ptr<Gateway> gateway_;
  SessionStore store_;
  ServiceOptions options_;

  mutable std::shared_mutex slots_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::vector<std::string> load_failures_;

  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
};

}  // namespace delib
