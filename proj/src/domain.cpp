#include "delib/domain.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace delib {

namespace {

template <class Enum, std::size_t N>
std::optional<Enum> parse_enum(std::string_view s, const std::pair<std::string_view, Enum> (&table)[N]) {
  const std::string needle = trim(s);
  for (const auto& [name, value] : table) {
    if (iequals(needle, name)) return value;
  }
  return std::nullopt;
}

constexpr std::pair<std::string_view, PoliticalLeaning> kLeanings[] = {
    {"Left", PoliticalLeaning::Left},
    {"Right", PoliticalLeaning::Right},
    {"Center", PoliticalLeaning::Center},
};

constexpr std::pair<std::string_view, SustainabilityInterest> kInterests[] = {
    {"Low", SustainabilityInterest::Low},
    {"Medium", SustainabilityInterest::Medium},
    {"High", SustainabilityInterest::High},
};

}  // namespace

std::string_view to_string(PoliticalLeaning v) {
  switch (v) {
    case PoliticalLeaning::Left: return "Left";
    case PoliticalLeaning::Right: return "Right";
    case PoliticalLeaning::Center: return "Center";
  }
  return "Center";
}

std::string_view to_string(SustainabilityInterest v) {
  switch (v) {
    case SustainabilityInterest::Low: return "Low";
    case SustainabilityInterest::Medium: return "Medium";
    case SustainabilityInterest::High: return "High";
  }
  return "Medium";
}

std::optional<PoliticalLeaning> parse_political_leaning(std::string_view s) {
  return parse_enum(s, kLeanings);
}

std::optional<SustainabilityInterest> parse_sustainability_interest(std::string_view s) {
  return parse_enum(s, kInterests);
}

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && to_lower(a) == to_lower(b);
}

std::size_t word_count(std::string_view s) {
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------

void to_json(Json& j, const ExpertProfile& v) {
  j = Json{{"name", v.name}, {"expertise", v.expertise}};
}

void from_json(const Json& j, ExpertProfile& v) {
  j.at("name").get_to(v.name);
  v.expertise = j.value("expertise", std::string{});
}

void to_json(Json& j, const AssemblyContext& v) {
  j = Json{{"theme", v.theme}, {"experts", v.experts}, {"setting_note", v.setting_note}};
}

void from_json(const Json& j, AssemblyContext& v) {
  j.at("theme").get_to(v.theme);
  v.experts = j.value("experts", std::vector<ExpertProfile>{});
  v.setting_note = j.value("setting_note", std::string{});
}

void to_json(Json& j, const TranscriptSegment& v) {
  j = Json{{"seq", v.seq}, {"ts", v.timestamp}, {"speaker", v.speaker}, {"text", v.text}};
}

void from_json(const Json& j, TranscriptSegment& v) {
  j.at("seq").get_to(v.seq);
  j.at("ts").get_to(v.timestamp);
  j.at("speaker").get_to(v.speaker);
  j.at("text").get_to(v.text);
}

void to_json(Json& j, const Demographics& v) {
  j = Json{{"age", v.age},
           {"gender", v.gender},
           {"income", v.income},
           {"education", v.education},
           {"profession", v.profession},
           {"political_leaning", to_string(v.political_leaning)},
           {"sustainability_interest", to_string(v.sustainability_interest)}};
}

void from_json(const Json& j, Demographics& v) {
  j.at("age").get_to(v.age);
  j.at("gender").get_to(v.gender);
  j.at("income").get_to(v.income);
  j.at("education").get_to(v.education);
  j.at("profession").get_to(v.profession);
  auto leaning = parse_political_leaning(j.at("political_leaning").get<std::string>());
  auto interest = parse_sustainability_interest(j.at("sustainability_interest").get<std::string>());
  if (!leaning || !interest) throw std::invalid_argument("demographics: bad enum value");
  v.political_leaning = *leaning;
  v.sustainability_interest = *interest;
}

void to_json(Json& j, const StakeholderPersona& v) {
  j = Json{{"id", v.id},
           {"name", v.name},
           {"description", v.description},
           {"demographics", v.demographics},
           {"batch", v.batch},
           {"superseded", v.superseded}};
}

void from_json(const Json& j, StakeholderPersona& v) {
  v.id = j.value("id", std::string{});
  j.at("name").get_to(v.name);
  j.at("description").get_to(v.description);
  j.at("demographics").get_to(v.demographics);
  v.batch = j.value("batch", 0);
  v.superseded = j.value("superseded", false);
}

void to_json(Json& j, const StakeholderReflection& v) {
  j = Json{{"persona_id", v.persona_id},
           {"agree_explanation", v.agree_explanation},
           {"disagree_explanation", v.disagree_explanation},
           {"missing_perspectives", v.missing_perspectives}};
}

void from_json(const Json& j, StakeholderReflection& v) {
  j.at("persona_id").get_to(v.persona_id);
  j.at("agree_explanation").get_to(v.agree_explanation);
  j.at("disagree_explanation").get_to(v.disagree_explanation);
  j.at("missing_perspectives").get_to(v.missing_perspectives);
}

void to_json(Json& j, const StakeholderQuestion& v) {
  j = Json::object();
  j["persona_id"] = v.persona_id ? Json(*v.persona_id) : Json(nullptr);
  j["question"] = v.question;
  j["explanation"] = v.explanation;
  j["expert"] = v.expert;
  j["expert_resolved"] = v.expert_resolved;
}

void from_json(const Json& j, StakeholderQuestion& v) {
  const auto it = j.find("persona_id");
  if (it == j.end() || it->is_null()) {
    v.persona_id.reset();
  } else {
    v.persona_id = it->get<std::string>();
  }
  j.at("question").get_to(v.question);
  v.explanation = j.value("explanation", std::string{});
  v.expert = j.value("expert", std::string{});
  v.expert_resolved = j.value("expert_resolved", false);
}

}  // namespace delib
