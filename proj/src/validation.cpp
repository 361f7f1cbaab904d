#include "delib/validation.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace delib {

std::string_view to_string(IssueKind kind) {
  switch (kind) {
    case IssueKind::MissingField: return "MissingField";
    case IssueKind::EmptyField: return "EmptyField";
    case IssueKind::BadType: return "BadType";
    case IssueKind::BadEnum: return "BadEnum";
    case IssueKind::BadRange: return "BadRange";
    case IssueKind::Duplicate: return "Duplicate";
    case IssueKind::WrongCount: return "WrongCount";
    case IssueKind::ConstraintLowInterestMissing: return "ConstraintLowInterestMissing";
    case IssueKind::NoJson: return "NoJson";
  }
  return "Unknown";
}

namespace {

std::string describe(const std::vector<FieldIssue>& issues) {
  std::ostringstream os;
  os << "validation failed:";
  for (const auto& issue : issues) os << ' ' << to_string(issue.kind) << '(' << issue.path << ')';
  return os.str();
}

std::string join_path(std::string_view prefix, std::string_view key) {
  if (prefix.empty()) return std::string(key);
  return std::string(prefix) + "." + std::string(key);
}

class IssueCollector {
 public:
  void add(IssueKind kind, std::string path, std::string detail) {
    issues_.push_back(FieldIssue{kind, std::move(path), std::move(detail), {}, {}});
  }
  void add(FieldIssue issue) { issues_.push_back(std::move(issue)); }

  bool empty() const { return issues_.empty(); }
  std::size_t size() const { return issues_.size(); }
  void throw_if_any() {
    if (!issues_.empty()) throw ValidationError(std::move(issues_));
  }

  // Reads a required string field; numbers are accepted and rendered as text
  // when `allow_number` is set. Records an issue and returns nullopt on failure.
  std::optional<std::string> text(const Json& obj, std::string_view prefix, const char* key,
                                  bool allow_number = false) {
    const std::string path = join_path(prefix, key);
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      add(IssueKind::MissingField, path, "required field is absent");
      return std::nullopt;
    }
    std::string value;
    if (it->is_string()) {
      value = it->get<std::string>();
    } else if (allow_number && it->is_number()) {
      value = it->dump();
    } else {
      add(IssueKind::BadType, path, "expected a string");
      return std::nullopt;
    }
    if (trim(value).empty()) {
      add(IssueKind::EmptyField, path, "must not be empty");
      return std::nullopt;
    }
    return value;
  }

  template <class Enum>
  std::optional<Enum> enumeration(const Json& obj, std::string_view prefix, const char* key,
                                  std::optional<Enum> (*parse)(std::string_view),
                                  std::vector<std::string> allowed) {
    const std::string path = join_path(prefix, key);
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      add(IssueKind::MissingField, path, "required field is absent");
      return std::nullopt;
    }
    std::string got = it->is_string() ? it->get<std::string>() : it->dump();
    std::optional<Enum> value = it->is_string() ? parse(got) : std::nullopt;
    if (!value) {
      std::string detail = "expected one of ";
      for (std::size_t i = 0; i < allowed.size(); ++i) detail += (i ? ", " : "") + allowed[i];
      detail += " (got \"" + got + "\")";
      add(FieldIssue{IssueKind::BadEnum, path, std::move(detail), std::move(allowed), std::move(got)});
    }
    return value;
  }

  std::optional<int> age(const Json& obj, std::string_view prefix) {
    const std::string path = join_path(prefix, "age");
    const auto it = obj.find("age");
    if (it == obj.end() || it->is_null()) {
      add(IssueKind::MissingField, path, "required field is absent");
      return std::nullopt;
    }
    double number = 0.0;
    if (it->is_number()) {
      number = it->get<double>();
    } else if (it->is_string()) {
      const std::string s = trim(it->get<std::string>());
      std::size_t used = 0;
      try {
        number = std::stod(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (s.empty() || used != s.size()) {
        add(IssueKind::BadType, path, "expected an integer number of years");
        return std::nullopt;
      }
    } else {
      add(IssueKind::BadType, path, "expected an integer number of years");
      return std::nullopt;
    }
    if (!std::isfinite(number) || number != std::floor(number)) {
      add(IssueKind::BadType, path, "expected an integer number of years");
      return std::nullopt;
    }
    if (number < kMinAge || number > kMaxAge) {
      add(IssueKind::BadRange, path,
          "must be within [" + std::to_string(kMinAge) + ", " + std::to_string(kMaxAge) + "]");
      return std::nullopt;
    }
    return static_cast<int>(number);
  }

 private:
  std::vector<FieldIssue> issues_;
};

std::optional<StakeholderPersona> collect_persona(const Json& raw, std::string_view prefix,
                                                  IssueCollector& issues) {
  if (!raw.is_object()) {
    issues.add(IssueKind::BadType, prefix.empty() ? "$" : std::string(prefix), "expected a JSON object");
    return std::nullopt;
  }
  const std::size_t before = issues.size();
  StakeholderPersona persona;
  auto name = issues.text(raw, prefix, "name");
  auto description = issues.text(raw, prefix, "description");

  const std::string demo_path = join_path(prefix, "demographics");
  const auto demo_it = raw.find("demographics");
  if (demo_it == raw.end() || demo_it->is_null()) {
    issues.add(IssueKind::MissingField, demo_path, "required field is absent");
  } else if (!demo_it->is_object()) {
    issues.add(IssueKind::BadType, demo_path, "expected a JSON object");
  } else {
    const Json& demo = *demo_it;
    auto age = issues.age(demo, demo_path);
    auto gender = issues.text(demo, demo_path, "gender");
    auto income = issues.text(demo, demo_path, "income", true);
    auto education = issues.text(demo, demo_path, "education");
    auto profession = issues.text(demo, demo_path, "profession");
    auto leaning = issues.enumeration<PoliticalLeaning>(demo, demo_path, "political_leaning",
                                                        &parse_political_leaning,
                                                        {"Left", "Right", "Center"});
    auto interest = issues.enumeration<SustainabilityInterest>(
        demo, demo_path, "sustainability_interest", &parse_sustainability_interest,
        {"Low", "Medium", "High"});
    if (age) persona.demographics.age = *age;
    if (gender) persona.demographics.gender = *gender;
    if (income) persona.demographics.income = *income;
    if (education) persona.demographics.education = *education;
    if (profession) persona.demographics.profession = *profession;
    if (leaning) persona.demographics.political_leaning = *leaning;
    if (interest) persona.demographics.sustainability_interest = *interest;
  }
  if (issues.size() != before) return std::nullopt;
  persona.name = *name;
  persona.description = *description;
  return persona;
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldIssue> issues)
    : std::runtime_error(describe(issues)), issues_(std::move(issues)) {}

bool ValidationError::has(IssueKind kind, std::string_view path) const {
  for (const auto& issue : issues_) {
    if (issue.kind == kind && issue.path == path) return true;
  }
  return false;
}

bool ValidationError::has(IssueKind kind) const {
  for (const auto& issue : issues_) {
    if (issue.kind == kind) return true;
  }
  return false;
}

std::string ValidationError::bullet_list() const {
  std::string out;
  for (const auto& issue : issues_) {
    if (!out.empty()) out += '\n';
    out += "- " + issue.path + ": " + issue.detail;
  }
  return out;
}

Json to_json_value(const FieldIssue& issue) {
  Json j{{"kind", to_string(issue.kind)}, {"path", issue.path}, {"detail", issue.detail}};
  if (issue.kind == IssueKind::BadEnum) {
    j["got"] = issue.got;
    j["allowed"] = issue.allowed;
  }
  return j;
}

Json to_json_value(const ValidationError& error) {
  Json issues = Json::array();
  for (const auto& issue : error.issues()) issues.push_back(to_json_value(issue));
  return issues;
}

StakeholderPersona validate_persona(const Json& raw) {
  IssueCollector issues;
  auto persona = collect_persona(raw, "", issues);
  issues.throw_if_any();
  return *persona;
}

std::vector<StakeholderPersona> validate_stakeholder_batch(const Json& raw) {
  IssueCollector issues;
  if (!raw.is_object()) {
    issues.add(IssueKind::BadType, "$", "expected a JSON object with a \"stakeholders\" array");
    issues.throw_if_any();
  }
  const auto it = raw.find("stakeholders");
  if (it == raw.end() || it->is_null()) {
    issues.add(IssueKind::MissingField, "stakeholders", "required field is absent");
    issues.throw_if_any();
  }
  if (!it->is_array()) {
    issues.add(IssueKind::BadType, "stakeholders", "expected an array");
    issues.throw_if_any();
  }
  const Json& array = *it;
  if (array.size() != kStakeholderBatchSize) {
    issues.add(IssueKind::WrongCount, "stakeholders",
               "expected exactly " + std::to_string(kStakeholderBatchSize) + " stakeholders, got " +
                   std::to_string(array.size()));
  }
  std::vector<StakeholderPersona> personas;
  for (std::size_t i = 0; i < array.size(); ++i) {
    auto persona = collect_persona(array[i], "stakeholders[" + std::to_string(i) + "]", issues);
    if (persona) personas.push_back(std::move(*persona));
  }
  if (issues.empty()) {
    bool has_low = false;
    for (const auto& p : personas) {
      has_low = has_low || p.demographics.sustainability_interest == SustainabilityInterest::Low;
    }
    if (!has_low) {
      issues.add(IssueKind::ConstraintLowInterestMissing, "stakeholders",
                 "at least one stakeholder must have sustainability_interest \"Low\"");
    }
  }
  issues.throw_if_any();
  return personas;
}

Validated<StakeholderReflection> validate_reflection(const Json& raw, std::string_view persona_id) {
  IssueCollector issues;
  if (!raw.is_object()) {
    issues.add(IssueKind::BadType, "$", "expected a JSON object");
    issues.throw_if_any();
  }
  auto agree = issues.text(raw, "", "agree_explanation");
  auto disagree = issues.text(raw, "", "disagree_explanation");
  auto missing = issues.text(raw, "", "missing_perspectives");
  issues.throw_if_any();

  Validated<StakeholderReflection> out{
      StakeholderReflection{std::string(persona_id), *agree, *disagree, *missing}, {}};
  const std::pair<const char*, const std::string*> fields[] = {
      {"agree_explanation", &out.value.agree_explanation},
      {"disagree_explanation", &out.value.disagree_explanation},
      {"missing_perspectives", &out.value.missing_perspectives},
  };
  for (const auto& [key, text] : fields) {
    const std::size_t words = word_count(*text);
    if (words < kReflectionMinWords || words > kReflectionMaxWords) {
      out.warnings.push_back(std::string(key) + ": " + std::to_string(words) + " words, outside [" +
                             std::to_string(kReflectionMinWords) + ", " +
                             std::to_string(kReflectionMaxWords) + "]");
    }
  }
  return out;
}

std::optional<std::string> resolve_expert(std::string_view name, const AssemblyContext& context) {
  const std::string needle = trim(name);
  if (needle.empty()) return std::nullopt;
  for (const auto& expert : context.experts) {
    if (iequals(needle, trim(expert.name))) return expert.name;
  }
  for (const auto& expert : context.experts) {
    if (!expert.expertise.empty() && iequals(needle, expert.name + " (" + expert.expertise + ")")) {
      return expert.name;
    }
  }
  return std::nullopt;
}

StakeholderQuestion validate_question(const Json& raw, const AssemblyContext& context,
                                      std::optional<std::string> persona_id) {
  IssueCollector issues;
  if (!raw.is_object()) {
    issues.add(IssueKind::BadType, "$", "expected a JSON object");
    issues.throw_if_any();
  }
  auto question = issues.text(raw, "", "question");
  auto explanation = issues.text(raw, "", "explanation");
  std::string expert;
  const auto it = raw.find("expert");
  if (it == raw.end() || it->is_null()) {
    issues.add(IssueKind::MissingField, "expert", "required field is absent");
  } else if (!it->is_string()) {
    issues.add(IssueKind::BadType, "expert", "expected a string");
  } else {
    expert = trim(it->get<std::string>());
  }
  issues.throw_if_any();

  StakeholderQuestion out;
  out.persona_id = std::move(persona_id);
  out.question = *question;
  out.explanation = *explanation;
  if (auto resolved = resolve_expert(expert, context)) {
    out.expert = *resolved;
    out.expert_resolved = true;
  } else {
    out.expert = expert;
    out.expert_resolved = false;
  }
  return out;
}

AssemblyContext validate_context(const Json& raw) {
  IssueCollector issues;
  if (!raw.is_object()) {
    issues.add(IssueKind::BadType, "$", "expected a JSON object");
    issues.throw_if_any();
  }
  AssemblyContext context;
  if (auto theme = issues.text(raw, "", "theme")) context.theme = *theme;

  if (auto it = raw.find("setting_note"); it != raw.end() && !it->is_null()) {
    if (it->is_string()) {
      context.setting_note = it->get<std::string>();
    } else {
      issues.add(IssueKind::BadType, "setting_note", "expected a string");
    }
  }

  if (auto it = raw.find("experts"); it != raw.end() && !it->is_null()) {
    if (!it->is_array()) {
      issues.add(IssueKind::BadType, "experts", "expected an array");
    } else {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string path = "experts[" + std::to_string(i) + "]";
        const Json& entry = (*it)[i];
        ExpertProfile expert;
        if (entry.is_string()) {
          expert.name = trim(entry.get<std::string>());
          if (expert.name.empty()) issues.add(IssueKind::EmptyField, path, "must not be empty");
        } else if (entry.is_object()) {
          if (auto name = issues.text(entry, path, "name")) expert.name = trim(*name);
          if (auto e = entry.find("expertise"); e != entry.end() && e->is_string()) {
            expert.expertise = e->get<std::string>();
          }
        } else {
          issues.add(IssueKind::BadType, path, "expected an object or a string");
          continue;
        }
        if (!expert.name.empty() && !seen.insert(to_lower(expert.name)).second) {
          issues.add(IssueKind::Duplicate, path + ".name", "duplicate expert name \"" + expert.name + "\"");
        }
        context.experts.push_back(std::move(expert));
      }
    }
  }
  issues.throw_if_any();
  return context;
}

}  // namespace delib
