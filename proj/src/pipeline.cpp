#include "delib/pipeline.hpp"

namespace delib {

StageOutcome<std::vector<StakeholderPersona>> run_stakeholder_stage(Gateway& gateway,
                                                                    const AssemblyContext& context,
                                                                    const Transcript& transcript,
                                                                    const PipelineOptions& options) {
  auto request = gateway.make_request(
      build_stakeholder_prompt(context, transcript.window(options.transcript_char_budget)));
  auto result = gateway.complete_structured(std::move(request), &validate_stakeholder_batch, options.max_retries);
  return {std::move(result.value), std::move(result.completion), {}};
}

StageOutcome<StakeholderReflection> run_reflection_stage(Gateway& gateway, const StakeholderPersona& persona,
                                                         const AssemblyContext& context,
                                                         const Transcript& transcript,
                                                         const PipelineOptions& options) {
  auto request = gateway.make_request(
      build_reflection_prompt(persona, context, transcript.window(options.transcript_char_budget)));
  auto result = gateway.complete_structured(
      std::move(request), [&](const Json& raw) { return validate_reflection(raw, persona.id); },
      options.max_retries);
  return {std::move(result.value.value), std::move(result.completion), std::move(result.value.warnings)};
}

StageOutcome<StakeholderQuestion> run_question_stage(Gateway& gateway, const StakeholderPersona& persona,
                                                     const StakeholderReflection& reflection,
                                                     const AssemblyContext& context,
                                                     const Transcript& transcript,
                                                     std::span<const std::string> current_questions,
                                                     const PipelineOptions& options) {
  auto request = gateway.make_request(build_question_prompt(
      persona, reflection, context, transcript.window(options.transcript_char_budget), current_questions));
  auto result = gateway.complete_structured(
      std::move(request), [&](const Json& raw) { return validate_question(raw, context, persona.id); },
      options.max_retries);
  std::vector<std::string> warnings;
  if (!result.value.expert_resolved) {
    warnings.push_back("expert \"" + result.value.expert + "\" is not on the panel roster");
  }
  return {std::move(result.value), std::move(result.completion), std::move(warnings)};
}

}  // namespace delib
