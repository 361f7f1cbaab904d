#pragma once

#include <functional>
#include <optional>
#include <string>

#include "delib/gateway.hpp"

namespace delib {

struct OpenAIConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  // Extra attempts allowed after a timeout. Other transport failures are never retried.
  int timeout_retries = 0;
};

// Chat-completions client for any server speaking the OpenAI wire shape:
// POST {base_url}/chat/completions with {model, messages, temperature, max_tokens}.
class OpenAICompatibleProvider : public ChatProvider {
 public:
  explicit OpenAICompatibleProvider(OpenAIConfig config);

  CompletionResult complete(const CompletionRequest& request) override;
  std::string tag() const override { return "openai-compatible"; }

  // Request body as sent on the wire.
  static Json request_body(const CompletionRequest& request);
  // Assistant text from a chat-completions response body; throws GatewayError(Provider).
  static std::string parse_response(const std::string& body, int status);

 private:
  OpenAIConfig config_;
  std::string origin_;       // scheme://host[:port]
  std::string path_prefix_;  // e.g. "/v1"
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

struct LlmEnvironment {
  OpenAIConfig provider;
  GatewayConfig gateway;
};

// Reads LLM_API_KEY, LLM_BASE_URL, LLM_MODEL and LLM_TIMEOUT_SECS.
// Throws std::invalid_argument on malformed values.
LlmEnvironment load_llm_environment(const EnvLookup& lookup = {});

}  // namespace delib
