#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace delib {

// Insertion-ordered so serialized keys follow declaration order.
using Json = nlohmann::ordered_json;

struct ExpertProfile {
  std::string name;
  std::string expertise;

  bool operator==(const ExpertProfile&) const = default;
};

struct AssemblyContext {
  std::string theme;
  std::vector<ExpertProfile> experts;
  std::string setting_note;

  bool operator==(const AssemblyContext&) const = default;
};

struct TranscriptSegment {
  std::int64_t seq = 0;
  double timestamp = 0.0;  // seconds since session start
  std::string speaker;
  std::string text;

  bool operator==(const TranscriptSegment&) const = default;
};

enum class PoliticalLeaning { Left, Right, Center };
enum class SustainabilityInterest { Low, Medium, High };

std::string_view to_string(PoliticalLeaning v);
std::string_view to_string(SustainabilityInterest v);

// Case-insensitive, whitespace-tolerant parse. Returns nullopt on no match.
std::optional<PoliticalLeaning> parse_political_leaning(std::string_view s);
std::optional<SustainabilityInterest> parse_sustainability_interest(std::string_view s);

inline constexpr int kMinAge = 16;
inline constexpr int kMaxAge = 100;

struct Demographics {
  int age = 0;
  std::string gender;
  std::string income;
  std::string education;
  std::string profession;
  PoliticalLeaning political_leaning = PoliticalLeaning::Center;
  SustainabilityInterest sustainability_interest = SustainabilityInterest::Medium;

  bool operator==(const Demographics&) const = default;
};

struct StakeholderPersona {
  std::string id;  // assigned by the service, never by the model
  std::string name;
  std::string description;
  Demographics demographics;
  int batch = 0;            // generation batch within the session, 1-based once stored
  bool superseded = false;  // true once a later batch exists

  bool operator==(const StakeholderPersona&) const = default;
};

struct StakeholderReflection {
  std::string persona_id;
  std::string agree_explanation;
  std::string disagree_explanation;
  std::string missing_perspectives;

  bool operator==(const StakeholderReflection&) const = default;
};

struct StakeholderQuestion {
  std::optional<std::string> persona_id;  // nullopt for facilitator-authored questions
  std::string question;
  std::string explanation;
  std::string expert;
  bool expert_resolved = false;

  bool operator==(const StakeholderQuestion&) const = default;
};

// Canonical serialization. Field names are the wire names.
void to_json(Json& j, const ExpertProfile& v);
void from_json(const Json& j, ExpertProfile& v);
void to_json(Json& j, const AssemblyContext& v);
void from_json(const Json& j, AssemblyContext& v);
void to_json(Json& j, const TranscriptSegment& v);
void from_json(const Json& j, TranscriptSegment& v);
void to_json(Json& j, const Demographics& v);
void from_json(const Json& j, Demographics& v);
void to_json(Json& j, const StakeholderPersona& v);
void from_json(const Json& j, StakeholderPersona& v);
void to_json(Json& j, const StakeholderReflection& v);
void from_json(const Json& j, StakeholderReflection& v);
void to_json(Json& j, const StakeholderQuestion& v);
void from_json(const Json& j, StakeholderQuestion& v);

// Small string helpers shared across modules.
std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::size_t word_count(std::string_view s);

}  // namespace delib
