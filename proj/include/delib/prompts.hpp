#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "delib/domain.hpp"
#include "delib/prompt_template.hpp"

namespace delib {

enum class PromptStage { StakeholderGeneration, Reflection, Question };

// Stable identifier used in mock scripts and diagnostics.
std::string_view stage_name(PromptStage stage);
std::optional<PromptStage> parse_stage_name(std::string_view name);

struct PromptPair {
  std::string system;
  std::string user;
  PromptStage stage = PromptStage::StakeholderGeneration;
  std::vector<BindingSpan> user_spans;  // where each binding landed in `user`

  bool operator==(const PromptPair&) const = default;
};

// Values available to the user templates. Which ones are required depends on
// the stage; rendering a stage with a required value unset throws MissingBinding.
struct PromptBindings {
  std::optional<std::string> theme;
  std::optional<std::string> transcript;
  std::optional<std::string> persona_name;
  std::optional<std::string> persona_description;
  std::optional<std::string> demographics_json;
  std::optional<std::string> political_leaning;
  std::optional<std::string> sustainability_interest;
  std::optional<std::string> reflection_text;
  std::optional<std::string> current_questions_text;
  std::optional<std::string> experts_text;
};

PromptPair render_prompt(PromptStage stage, const PromptBindings& bindings);

PromptPair build_stakeholder_prompt(const AssemblyContext& context, std::string_view transcript_text);
PromptPair build_reflection_prompt(const StakeholderPersona& persona, const AssemblyContext& context,
                                   std::string_view transcript_text);
PromptPair build_question_prompt(const StakeholderPersona& persona,
                                 const StakeholderReflection& reflection,
                                 const AssemblyContext& context, std::string_view transcript_text,
                                 std::span<const std::string> current_questions);

// Value renderers. Each is deterministic in its input.
std::string render_demographics_json(const Demographics& demographics);
std::string render_question_list(std::span<const std::string> questions);
std::string render_experts(std::span<const ExpertProfile> experts);
std::string render_reflection_text(const StakeholderReflection& reflection);

inline constexpr std::string_view kEmptyQuestionList = "(none yet)";

// Frozen template sources, as shipped in assets/prompts.
std::string_view system_template(PromptStage stage);
const PromptTemplate& user_template(PromptStage stage);

}  // namespace delib
