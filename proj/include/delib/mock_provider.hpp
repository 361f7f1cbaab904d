#pragma once

#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "delib/gateway.hpp"

namespace delib {

struct ScriptedResponse {
  enum class Kind { Text, Timeout, Transport, Provider };

  Kind kind = Kind::Text;
  std::string text;  // response text, or the error body for failures
  int status = 500;  // Provider failures only

  static ScriptedResponse reply(std::string text) { return {Kind::Text, std::move(text), 0}; }
  static ScriptedResponse failure(Kind kind, std::string body = {}, int status = 500) {
    return {kind, std::move(body), status};
  }
};

// Ordered scripted replies. A reply is taken from the queue of the request's
// stage when that queue is non-empty, otherwise from the shared queue.
//
// File form (JSON):
//   { "responses": [ ... ],
//     "stakeholder_generation": [ ... ], "reflection": [ ... ], "question": [ ... ] }
// or a bare array (shared queue only). Each entry is a string (raw reply), or
// {"raw": "..."}, {"json": <value>} (serialized compactly), or
// {"fail": "timeout" | "transport" | "provider", "status": 503, "body": "..."}.
class ProviderScript {
 public:
  ProviderScript() = default;

  static ProviderScript from_json(const Json& script);
  static ProviderScript load(const std::filesystem::path& path);

  ProviderScript& push(ScriptedResponse response);
  ProviderScript& push(PromptStage stage, ScriptedResponse response);
  ProviderScript& push_text(std::string text) { return push(ScriptedResponse::reply(std::move(text))); }
  ProviderScript& push_text(PromptStage stage, std::string text) {
    return push(stage, ScriptedResponse::reply(std::move(text)));
  }

  std::optional<ScriptedResponse> next(PromptStage stage);
  std::size_t remaining() const;

 private:
  std::deque<ScriptedResponse> shared_;
  std::map<PromptStage, std::deque<ScriptedResponse>> by_stage_;
};

// Deterministic offline provider. Replies with zero latency and records every
// request it receives.
class MockProvider : public ChatProvider {
 public:
  explicit MockProvider(ProviderScript script = {});

  CompletionResult complete(const CompletionRequest& request) override;
  std::string tag() const override { return "mock"; }

  std::vector<CompletionRequest> requests() const;
  std::size_t remaining() const;
  void enqueue(ScriptedResponse response);
  void enqueue(PromptStage stage, ScriptedResponse response);

 private:
  mutable std::mutex mutex_;
  ProviderScript script_;
  std::vector<CompletionRequest> requests_;
};

}  // namespace delib
