#include "delib/gateway.hpp"

namespace delib {

std::string_view to_string(GatewayErrorKind kind) {
  switch (kind) {
    case GatewayErrorKind::Timeout: return "Timeout";
    case GatewayErrorKind::Transport: return "TransportError";
    case GatewayErrorKind::Provider: return "ProviderError";
    case GatewayErrorKind::ScriptExhausted: return "ScriptExhausted";
    case GatewayErrorKind::InvalidRequest: return "InvalidRequest";
  }
  return "GatewayError";
}

void CompletionRequest::check() const {
  if (model.empty()) throw GatewayError(GatewayErrorKind::InvalidRequest, "model must not be empty");
  if (!(timeout_seconds > 0.0)) throw GatewayError(GatewayErrorKind::InvalidRequest, "timeout must be > 0");
  if (!(temperature >= 0.0 && temperature <= 2.0)) {
    throw GatewayError(GatewayErrorKind::InvalidRequest, "temperature must be within [0, 2]");
  }
  if (max_output_tokens <= 0) {
    throw GatewayError(GatewayErrorKind::InvalidRequest, "max_output_tokens must be positive");
  }
}

std::vector<ChatMessage> CompletionRequest::messages() const {
  std::vector<ChatMessage> out;
  out.reserve(2 + followups.size());
  out.push_back({"system", prompt.system});
  out.push_back({"user", prompt.user});
  out.insert(out.end(), followups.begin(), followups.end());
  return out;
}

std::string corrective_message(const ValidationError& error) {
  return "Your previous response could not be accepted because these fields are invalid:\n" +
         error.bullet_list() +
         "\nReply with only the corrected JSON object, keeping the same format as requested.";
}

Gateway::Gateway(std::shared_ptr<ChatProvider> provider, GatewayConfig config)
    : provider_(std::move(provider)), config_(std::move(config)) {
  if (!provider_) throw std::invalid_argument("Gateway requires a provider");
  if (config_.max_in_flight < 1) config_.max_in_flight = 1;
}

CompletionRequest Gateway::make_request(PromptPair prompt) const {
  CompletionRequest request;
  request.prompt = std::move(prompt);
  request.model = config_.model;
  request.temperature = config_.temperature;
  request.max_output_tokens = config_.max_output_tokens;
  request.timeout_seconds = config_.timeout_seconds;
  return request;
}

CompletionResult Gateway::complete(const CompletionRequest& request) {
  request.check();
  {
    std::unique_lock lock(slots_mutex_);
    slots_cv_.wait(lock, [this] { return in_flight_ < config_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    Gateway* self;
    ~Release() {
      {
        std::lock_guard lock(self->slots_mutex_);
        --self->in_flight_;
      }
      self->slots_cv_.notify_one();
    }
  } release{this};
  return provider_->complete(request);
}

}  // namespace delib
