#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "delib/domain.hpp"
#include "delib/transcript.hpp"

namespace delib {

struct SessionState {
  std::string session_id;
  AssemblyContext context;
  Transcript transcript;
  std::vector<StakeholderPersona> stakeholders;             // every batch, oldest first
  std::map<std::string, StakeholderReflection> reflections;  // keyed by persona id
  std::vector<StakeholderQuestion> question_list;
  std::int64_t created_at_ms = 0;  // wall clock, milliseconds since the Unix epoch
  std::int64_t updated_at_ms = 0;

  const StakeholderPersona* find_persona(std::string_view persona_id) const;
  int latest_batch() const;
  std::vector<std::string> question_texts() const;

  bool operator==(const SessionState&) const = default;
};

// Referential-integrity violations, empty when the state is consistent:
// reflections point at stored personas, accepted persona questions point at
// personas that have a reflection, persona ids are unique.
std::vector<std::string> integrity_violations(const SessionState& state);

// "2026-10-16T07:28:00.123Z"
std::string format_utc_millis(std::int64_t millis);
// Inverse of format_utc_millis; throws std::invalid_argument.
std::int64_t parse_utc_millis(std::string_view text);

void to_json(Json& j, const SessionState& s);
void from_json(const Json& j, SessionState& s);

}  // namespace delib
