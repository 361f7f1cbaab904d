#include "delib/prompts.hpp"

#include "delib/prompt_assets.hpp"

namespace delib {

std::string_view stage_name(PromptStage stage) {
  switch (stage) {
    case PromptStage::StakeholderGeneration: return "stakeholder_generation";
    case PromptStage::Reflection: return "reflection";
    case PromptStage::Question: return "question";
  }
  return "stakeholder_generation";
}

std::optional<PromptStage> parse_stage_name(std::string_view name) {
  for (auto stage : {PromptStage::StakeholderGeneration, PromptStage::Reflection, PromptStage::Question}) {
    if (name == stage_name(stage)) return stage;
  }
  return std::nullopt;
}

std::string_view system_template(PromptStage stage) {
  switch (stage) {
    case PromptStage::StakeholderGeneration: return assets::stakeholder_system;
    case PromptStage::Reflection: return assets::reflection_system;
    case PromptStage::Question: return assets::question_system;
  }
  return assets::stakeholder_system;
}

const PromptTemplate& user_template(PromptStage stage) {
  static const PromptTemplate stakeholder = PromptTemplate::parse(assets::stakeholder_user);
  static const PromptTemplate reflection = PromptTemplate::parse(assets::reflection_user);
  static const PromptTemplate question = PromptTemplate::parse(assets::question_user);
  switch (stage) {
    case PromptStage::StakeholderGeneration: return stakeholder;
    case PromptStage::Reflection: return reflection;
    case PromptStage::Question: return question;
  }
  return stakeholder;
}

PromptPair render_prompt(PromptStage stage, const PromptBindings& b) {
  Bindings values;
  auto bind = [&values](const char* marker, const std::optional<std::string>& value,
                        const char* binding_name) {
    if (!value) throw MissingBinding(binding_name);
    values.emplace(marker, *value);
  };

  switch (stage) {
    case PromptStage::StakeholderGeneration:
      bind("THEME", b.theme, "theme");
      bind("TRANSCRIPT", b.transcript, "transcript");
      break;
    case PromptStage::Reflection:
      bind("NAME", b.persona_name, "persona_name");
      bind("DESCRIPTION", b.persona_description, "persona_description");
      bind("DEMOGRAPHICS_JSON", b.demographics_json, "demographics_json");
      bind("TRANSCRIPT", b.transcript, "transcript");
      bind("POLITICAL_LEANING", b.political_leaning, "political_leaning");
      bind("SUSTAINABILITY_INTEREST", b.sustainability_interest, "sustainability_interest");
      break;
    case PromptStage::Question:
      bind("NAME", b.persona_name, "persona_name");
      bind("DESCRIPTION", b.persona_description, "persona_description");
      bind("DEMOGRAPHICS_JSON", b.demographics_json, "demographics_json");
      bind("REFLECTION_TEXT", b.reflection_text, "reflection_text");
      bind("TRANSCRIPT", b.transcript, "transcript");
      bind("CURRENT_QUESTIONS", b.current_questions_text, "current_questions_text");
      bind("EXPERTS", b.experts_text, "experts");
      break;
  }

  RenderedText user = user_template(stage).render(values);
  return PromptPair{std::string(system_template(stage)), std::move(user.text), stage,
                    std::move(user.spans)};
}

PromptPair build_stakeholder_prompt(const AssemblyContext& context, std::string_view transcript_text) {
  if (trim(context.theme).empty()) throw MissingBinding("theme");
  PromptBindings b;
  b.theme = context.theme;
  b.transcript = std::string(transcript_text);
  return render_prompt(PromptStage::StakeholderGeneration, b);
}

namespace {

PromptBindings persona_bindings(const StakeholderPersona& persona, std::string_view transcript_text) {
  if (trim(persona.name).empty()) throw MissingBinding("persona_name");
  if (trim(persona.description).empty()) throw MissingBinding("persona_description");
  PromptBindings b;
  b.persona_name = persona.name;
  b.persona_description = persona.description;
  b.demographics_json = render_demographics_json(persona.demographics);
  b.transcript = std::string(transcript_text);
  return b;
}

}  // namespace

PromptPair build_reflection_prompt(const StakeholderPersona& persona, const AssemblyContext& /*context*/,
                                   std::string_view transcript_text) {
  PromptBindings b = persona_bindings(persona, transcript_text);
  b.political_leaning = std::string(to_string(persona.demographics.political_leaning));
  b.sustainability_interest = std::string(to_string(persona.demographics.sustainability_interest));
  return render_prompt(PromptStage::Reflection, b);
}

PromptPair build_question_prompt(const StakeholderPersona& persona,
                                 const StakeholderReflection& reflection,
                                 const AssemblyContext& context, std::string_view transcript_text,
                                 std::span<const std::string> current_questions) {
  if (context.experts.empty()) throw MissingBinding("experts");
  PromptBindings b = persona_bindings(persona, transcript_text);
  b.reflection_text = render_reflection_text(reflection);
  b.current_questions_text = render_question_list(current_questions);
  b.experts_text = render_experts(context.experts);
  return render_prompt(PromptStage::Question, b);
}

std::string render_demographics_json(const Demographics& demographics) {
  return Json(demographics).dump(2);
}

std::string render_question_list(std::span<const std::string> questions) {
  if (questions.empty()) return std::string(kEmptyQuestionList);
  std::string out;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    if (i) out += '\n';
    out += std::to_string(i + 1) + ". " + questions[i];
  }
  return out;
}

std::string render_experts(std::span<const ExpertProfile> experts) {
  std::string out;
  for (const auto& expert : experts) {
    if (!out.empty()) out += "; ";
    out += expert.name;
    if (!expert.expertise.empty()) out += " (" + expert.expertise + ")";
  }
  return out;
}

std::string render_reflection_text(const StakeholderReflection& reflection) {
  return "Reflection:\nWhat I agree with: " + reflection.agree_explanation +
         "\nWhat I disagree with: " + reflection.disagree_explanation +
         "\nWhat is missing from the conversation: " + reflection.missing_perspectives;
}

}  // namespace delib
