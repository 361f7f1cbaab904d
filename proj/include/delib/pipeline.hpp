#pragma once

#include <span>
#include <string>
#include <vector>

#include "delib/gateway.hpp"
#include "delib/transcript.hpp"

namespace delib {

struct PipelineOptions {
  std::size_t transcript_char_budget = kDefaultWindowChars;
  int max_retries = 2;
};

template <class T>
struct StageOutcome {
  T value;
  CompletionResult completion;
  std::vector<std::string> warnings;
};

// The three generation stages: personas from context + transcript, a
// reflection per persona, then a panel question from persona + reflection.
// Stateless; ids and storage are the caller's business. Propagates
// MissingBinding, GatewayError and StructuredOutputFailed.

StageOutcome<std::vector<StakeholderPersona>> run_stakeholder_stage(Gateway& gateway,
                                                                    const AssemblyContext& context,
                                                                    const Transcript& transcript,
                                                                    const PipelineOptions& options = {});

StageOutcome<StakeholderReflection> run_reflection_stage(Gateway& gateway, const StakeholderPersona& persona,
                                                         const AssemblyContext& context,
                                                         const Transcript& transcript,
                                                         const PipelineOptions& options = {});

StageOutcome<StakeholderQuestion> run_question_stage(Gateway& gateway, const StakeholderPersona& persona,
                                                     const StakeholderReflection& reflection,
                                                     const AssemblyContext& context,
                                                     const Transcript& transcript,
                                                     std::span<const std::string> current_questions,
                                                     const PipelineOptions& options = {});

}  // namespace delib
