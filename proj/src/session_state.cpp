#include "delib/session_state.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <set>
#include <stdexcept>

namespace delib {

const StakeholderPersona* SessionState::find_persona(std::string_view persona_id) const {
  for (const auto& p : stakeholders) {
    if (p.id == persona_id) return &p;
  }
  return nullptr;
}

int SessionState::latest_batch() const {
  int latest = 0;
  for (const auto& p : stakeholders) latest = std::max(latest, p.batch);
  return latest;
}

std::vector<std::string> SessionState::question_texts() const {
  std::vector<std::string> out;
  out.reserve(question_list.size());
  for (const auto& q : question_list) out.push_back(q.question);
  return out;
}

std::vector<std::string> integrity_violations(const SessionState& state) {
  std::vector<std::string> out;
  std::set<std::string> ids;
  for (const auto& p : state.stakeholders) {
    if (p.id.empty()) out.push_back("persona without id");
    if (!ids.insert(p.id).second) out.push_back("duplicate persona id " + p.id);
  }
  for (const auto& [id, reflection] : state.reflections) {
    if (!ids.count(id)) out.push_back("reflection for unknown persona " + id);
    if (reflection.persona_id != id) out.push_back("reflection keyed " + id + " names " + reflection.persona_id);
  }
  for (std::size_t i = 0; i < state.question_list.size(); ++i) {
    const auto& q = state.question_list[i];
    if (!q.persona_id) continue;
    if (!ids.count(*q.persona_id)) {
      out.push_back("question " + std::to_string(i) + " references unknown persona " + *q.persona_id);
    } else if (!state.reflections.count(*q.persona_id)) {
      out.push_back("question " + std::to_string(i) + " persona " + *q.persona_id + " has no reflection");
    }
  }
  return out;
}

std::string format_utc_millis(std::int64_t millis) {
  std::int64_t secs = millis / 1000;
  std::int64_t ms = millis % 1000;
  if (ms < 0) {
    ms += 1000;
    --secs;
  }
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

std::int64_t parse_utc_millis(std::string_view text) {
  std::tm tm{};
  int ms = 0;
  char tail = 0;
  const std::string s(text);
  const int n = std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                            &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &ms, &tail);
  if (n != 8 || tail != 'Z' || s.size() != 24) throw std::invalid_argument("bad UTC timestamp: " + s);
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return static_cast<std::int64_t>(timegm(&tm)) * 1000 + ms;
}

void to_json(Json& j, const SessionState& s) {
  Json reflections = Json::object();
  for (const auto& [id, r] : s.reflections) reflections[id] = r;
  j = Json{{"session_id", s.session_id},
           {"context", s.context},
           {"transcript", s.transcript},
           {"stakeholders", s.stakeholders},
           {"reflections", std::move(reflections)},
           {"question_list", s.question_list},
           {"created_at", format_utc_millis(s.created_at_ms)},
           {"updated_at", format_utc_millis(s.updated_at_ms)}};
}

void from_json(const Json& j, SessionState& s) {
  j.at("session_id").get_to(s.session_id);
  j.at("context").get_to(s.context);
  j.at("transcript").get_to(s.transcript);
  j.at("stakeholders").get_to(s.stakeholders);
  s.reflections.clear();
  for (const auto& [id, r] : j.at("reflections").items()) s.reflections.emplace(id, r.get<StakeholderReflection>());
  j.at("question_list").get_to(s.question_list);
  s.created_at_ms = parse_utc_millis(j.at("created_at").get<std::string>());
  s.updated_at_ms = parse_utc_millis(j.at("updated_at").get<std::string>());
}

}  // namespace delib
