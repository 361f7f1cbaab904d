#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "delib/json_extract.hpp"
#include "delib/prompts.hpp"
#include "delib/validation.hpp"

namespace delib {

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

inline constexpr const char* kDefaultModel = "gpt-4o";

struct CompletionRequest {
  PromptPair prompt;
  // Extra turns after the prompt pair: the rejected answer and a corrective
  // user message for each failed validation.
  std::vector<ChatMessage> followups;
  std::string model = kDefaultModel;
  double temperature = 0.7;
  int max_output_tokens = 2048;
  double timeout_seconds = 60.0;

  // Throws GatewayError(InvalidRequest) when an invariant is violated.
  void check() const;
  // system, user, then followups in order.
  std::vector<ChatMessage> messages() const;
};

struct CompletionResult {
  std::string raw_text;
  int attempts = 1;
  double latency_seconds = 0.0;
  std::string provider;
};

enum class GatewayErrorKind { Timeout, Transport, Provider, ScriptExhausted, InvalidRequest };

std::string_view to_string(GatewayErrorKind kind);

class GatewayError : public std::runtime_error {
 public:
  GatewayError(GatewayErrorKind kind, const std::string& message, int status = 0,
               std::string body_excerpt = {})
      : std::runtime_error(message), kind_(kind), status_(status), body_excerpt_(std::move(body_excerpt)) {}

  GatewayErrorKind kind() const noexcept { return kind_; }
  int status() const noexcept { return status_; }
  const std::string& body_excerpt() const noexcept { return body_excerpt_; }

 private:
  GatewayErrorKind kind_;
  int status_;
  std::string body_excerpt_;
};

class StructuredOutputFailed : public std::runtime_error {
 public:
  StructuredOutputFailed(ValidationError last_error, int attempts)
      : std::runtime_error("structured output failed after " + std::to_string(attempts) +
                           " attempt(s): " + last_error.what()),
        last_error_(std::move(last_error)),
        attempts_(attempts) {}

  const ValidationError& last_error() const noexcept { return last_error_; }
  int attempts() const noexcept { return attempts_; }

 private:
  ValidationError last_error_;
  int attempts_;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  // One round trip. Never retries on validation grounds; throws GatewayError.
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
  virtual std::string tag() const = 0;
};

struct GatewayConfig {
  std::string model = kDefaultModel;
  double temperature = 0.7;
  int max_output_tokens = 2048;
  double timeout_seconds = 60.0;
  int max_in_flight = 4;
};

template <class T>
struct StructuredResult {
  T value;
  CompletionResult completion;
};

// The corrective user turn appended after a rejected answer.
std::string corrective_message(const ValidationError& error);

// Shared front end over a provider: request defaults, an in-flight cap, and
// the structured complete -> extract -> validate loop.
class Gateway {
 public:
  explicit Gateway(std::shared_ptr<ChatProvider> provider, GatewayConfig config = {});

  CompletionRequest make_request(PromptPair prompt) const;
  CompletionResult complete(const CompletionRequest& request);

  // `validator` maps a JSON value to a domain value or throws ValidationError.
  // Transport failures propagate immediately; only validation failures are
  // retried, each retry carrying a corrective message.
  template <class Validator>
  auto complete_structured(CompletionRequest request, Validator&& validator, int max_retries)
      -> StructuredResult<std::decay_t<std::invoke_result_t<Validator&, const Json&>>>;

  const GatewayConfig& config() const noexcept { return config_; }
  ChatProvider& provider() noexcept { return *provider_; }

 private:
  std::shared_ptr<ChatProvider> provider_;
  GatewayConfig config_;
  std::mutex slots_mutex_;
  std::condition_variable slots_cv_;
  int in_flight_ = 0;
};

template <class Validator>
auto Gateway::complete_structured(CompletionRequest request, Validator&& validator, int max_retries)
    -> StructuredResult<std::decay_t<std::invoke_result_t<Validator&, const Json&>>> {
  if (max_retries < 0) throw GatewayError(GatewayErrorKind::InvalidRequest, "max_retries must be >= 0");
  double latency = 0.0;
  std::optional<ValidationError> last_error;
  const int max_attempts = max_retries + 1;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    CompletionResult result = complete(request);
    latency += result.latency_seconds;
    try {
      Json parsed;
      try {
        parsed = extract_json(result.raw_text);
      } catch (const NoJsonFound& e) {
        throw ValidationError({FieldIssue{IssueKind::NoJson, "$", e.what(), {}, {}}});
      }
      auto value = validator(static_cast<const Json&>(parsed));
      result.attempts = attempt;
      result.latency_seconds = latency;
      return {std::move(value), std::move(result)};
    } catch (const ValidationError& e) {
      last_error = e;
      request.followups.push_back(ChatMessage{"assistant", result.raw_text});
      request.followups.push_back(ChatMessage{"user", corrective_message(e)});
    }
  }
  throw StructuredOutputFailed(*last_error, max_attempts);
}

}  // namespace delib
