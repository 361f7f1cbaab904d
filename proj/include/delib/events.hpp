#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string_view>
#include <vector>

#include "delib/domain.hpp"

namespace delib {

enum class EventKind { SegmentAdded, StakeholdersReady, ReflectionReady, QuestionReady, QuestionListChanged, Error };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct SessionEvent {
  std::int64_t seq = 0;
  EventKind kind = EventKind::Error;
  Json payload;

  bool operator==(const SessionEvent&) const = default;
};

void to_json(Json& j, const SessionEvent& e);

// Per-session event log with blocking readers. Sequence numbers start at 1
// and increase by one per published event; the newest `history_limit` events
// stay readable.
class EventChannel {
 public:
  explicit EventChannel(std::size_t history_limit = 4096) : history_limit_(history_limit) {}

  std::int64_t publish(EventKind kind, Json payload);
  std::int64_t last_seq() const;

  // Retained events with seq > after.
  std::vector<SessionEvent> since(std::int64_t after) const;
  // Like since(), but blocks up to `timeout` for at least one event. Returns
  // early with an empty result once the channel is closed.
  std::vector<SessionEvent> wait_since(std::int64_t after, std::chrono::milliseconds timeout) const;

  void close();
  bool closed() const;

 private:
  std::vector<SessionEvent> collect(std::int64_t after) const;

  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  std::deque<SessionEvent> history_;
  std::int64_t last_seq_ = 0;
  std::size_t history_limit_;
  bool closed_ = false;
};

}  // namespace delib
