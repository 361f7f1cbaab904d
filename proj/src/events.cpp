#include "delib/events.hpp"

namespace delib {

namespace {

constexpr std::pair<std::string_view, EventKind> kEventNames[] = {
    {"SegmentAdded", EventKind::SegmentAdded},
    {"StakeholdersReady", EventKind::StakeholdersReady},
    {"ReflectionReady", EventKind::ReflectionReady},
    {"QuestionReady", EventKind::QuestionReady},
    {"QuestionListChanged", EventKind::QuestionListChanged},
    {"Error", EventKind::Error},
};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [name, value] : kEventNames) {
    if (value == kind) return name;
  }
  return "Error";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (const auto& [n, value] : kEventNames) {
    if (n == name) return value;
  }
  return std::nullopt;
}

void to_json(Json& j, const SessionEvent& e) {
  j = Json{{"seq", e.seq}, {"kind", to_string(e.kind)}, {"payload", e.payload}};
}

std::int64_t EventChannel::publish(EventKind kind, Json payload) {
  std::int64_t seq = 0;
  {
    std::lock_guard lock(mutex_);
    seq = ++last_seq_;
    history_.push_back(SessionEvent{seq, kind, std::move(payload)});
    while (history_.size() > history_limit_) history_.pop_front();
  }
  cv_.notify_all();
  return seq;
}

std::int64_t EventChannel::last_seq() const {
  std::lock_guard lock(mutex_);
  return last_seq_;
}

std::vector<SessionEvent> EventChannel::collect(std::int64_t after) const {
  std::vector<SessionEvent> out;
  for (const auto& e : history_) {
    if (e.seq > after) out.push_back(e);
  }
  return out;
}

std::vector<SessionEvent> EventChannel::since(std::int64_t after) const {
  std::lock_guard lock(mutex_);
  return collect(after);
}

std::vector<SessionEvent> EventChannel::wait_since(std::int64_t after, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return closed_ || last_seq_ > after; });
  if (closed_ && last_seq_ <= after) return {};
  return collect(after);
}

void EventChannel::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool EventChannel::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

}  // namespace delib
