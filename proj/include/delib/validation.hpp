#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delib/domain.hpp"

namespace delib {

enum class IssueKind {
  MissingField,
  EmptyField,
  BadType,
  BadEnum,
  BadRange,
  Duplicate,
  WrongCount,
  ConstraintLowInterestMissing,
  NoJson,
};

std::string_view to_string(IssueKind kind);

// One violated field. `path` is dotted with bracketed indices,
// e.g. "stakeholders[1].demographics.sustainability_interest"; "$" is the root.
struct FieldIssue {
  IssueKind kind;
  std::string path;
  std::string detail;
  std::vector<std::string> allowed;  // BadEnum only
  std::string got;                   // BadEnum only

  bool operator==(const FieldIssue&) const = default;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<FieldIssue> issues);

  const std::vector<FieldIssue>& issues() const noexcept { return issues_; }
  bool has(IssueKind kind, std::string_view path) const;
  bool has(IssueKind kind) const;

  // Multi-line "- path: detail" listing used in corrective prompts and diagnostics.
  std::string bullet_list() const;

 private:
  std::vector<FieldIssue> issues_;
};

Json to_json_value(const FieldIssue& issue);
Json to_json_value(const ValidationError& error);

template <class T>
struct Validated {
  T value;
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kStakeholderBatchSize = 3;
inline constexpr std::size_t kReflectionMinWords = 30;
inline constexpr std::size_t kReflectionMaxWords = 400;

// Validators for untrusted model output. Each throws ValidationError listing
// every violation found; none of them throw anything else for any JSON input.
StakeholderPersona validate_persona(const Json& raw);
std::vector<StakeholderPersona> validate_stakeholder_batch(const Json& raw);
Validated<StakeholderReflection> validate_reflection(const Json& raw, std::string_view persona_id);
StakeholderQuestion validate_question(const Json& raw, const AssemblyContext& context,
                                      std::optional<std::string> persona_id);

// Intake check for contexts posted by clients: non-empty theme, non-empty unique expert names.
AssemblyContext validate_context(const Json& raw);

// Roster name matching `name` case-insensitively, or matching the rendered
// "Name (expertise)" form the question prompt shows to the model.
std::optional<std::string> resolve_expert(std::string_view name, const AssemblyContext& context);

}  // namespace delib
