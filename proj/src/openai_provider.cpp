#include "delib/openai_provider.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>

namespace delib {

namespace {

struct ParsedUrl {
  std::string origin;
  std::string path;
};

ParsedUrl split_base_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("base URL needs a scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw std::invalid_argument("unsupported URL scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? std::string{} : url.substr(path_start);
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  if (out.origin.size() <= scheme_end + 3) throw std::invalid_argument("base URL has no host: " + url);
  return out;
}

void set_timeouts(httplib::Client& client, double seconds) {
  const auto micros = std::chrono::microseconds(static_cast<std::int64_t>(seconds * 1e6));
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(micros);
  const auto rest = micros - secs;
  client.set_connection_timeout(secs.count(), rest.count());
  client.set_read_timeout(secs.count(), rest.count());
  client.set_write_timeout(secs.count(), rest.count());
}

}  // namespace

OpenAICompatibleProvider::OpenAICompatibleProvider(OpenAIConfig config) : config_(std::move(config)) {
  auto parsed = split_base_url(config_.base_url);
  origin_ = std::move(parsed.origin);
  path_prefix_ = std::move(parsed.path);
  if (config_.timeout_retries < 0) config_.timeout_retries = 0;
}

Json OpenAICompatibleProvider::request_body(const CompletionRequest& request) {
  Json messages = Json::array();
  for (const auto& m : request.messages()) messages.push_back(Json{{"role", m.role}, {"content", m.content}});
  return Json{{"model", request.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature},
              {"max_tokens", request.max_output_tokens}};
}

std::string OpenAICompatibleProvider::parse_response(const std::string& body, int status) {
  const std::string excerpt = body.substr(0, 200);
  Json parsed = Json::parse(body, nullptr, false);
  if (parsed.is_discarded()) {
    throw GatewayError(GatewayErrorKind::Provider, "provider returned a non-JSON body", status, excerpt);
  }
  try {
    const Json& content = parsed.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw std::invalid_argument("content is not a string");
    return content.get<std::string>();
  } catch (const std::exception&) {
    throw GatewayError(GatewayErrorKind::Provider, "provider response has no choices[0].message.content",
                       status, excerpt);
  }
}

CompletionResult OpenAICompatibleProvider::complete(const CompletionRequest& request) {
  request.check();
  const std::string body = request_body(request).dump();
  const std::string path = path_prefix_ + "/chat/completions";

  const auto started = std::chrono::steady_clock::now();
  for (int attempt = 0;; ++attempt) {
    httplib::Client client(origin_);
    if (!client.is_valid()) {
      throw GatewayError(GatewayErrorKind::Transport, "cannot create an HTTP client for " + origin_ +
                                                          " (is TLS support compiled in?)");
    }
    set_timeouts(client, request.timeout_seconds);
    if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

    const auto attempt_started = std::chrono::steady_clock::now();
    auto res = client.Post(path, body, "application/json");
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - attempt_started).count();

    if (!res) {
      const auto err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             ((err == httplib::Error::Read || err == httplib::Error::Write) &&
                              elapsed >= 0.9 * request.timeout_seconds);
      if (timed_out) {
        if (attempt < config_.timeout_retries) continue;
        throw GatewayError(GatewayErrorKind::Timeout,
                           "request to " + origin_ + path + " timed out after " +
                               std::to_string(request.timeout_seconds) + "s");
      }
      throw GatewayError(GatewayErrorKind::Transport,
                         "request to " + origin_ + path + " failed: " + httplib::to_string(err));
    }
    if (res->status < 200 || res->status >= 300) {
      throw GatewayError(GatewayErrorKind::Provider, "provider returned status " + std::to_string(res->status),
                         res->status, res->body.substr(0, 200));
    }
    CompletionResult result;
    result.raw_text = parse_response(res->body, res->status);
    result.attempts = 1;
    result.latency_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    result.provider = tag();
    return result;
  }
}

LlmEnvironment load_llm_environment(const EnvLookup& lookup) {
  EnvLookup get = lookup;
  if (!get) {
    get = [](const char* name) -> std::optional<std::string> {
      const char* v = std::getenv(name);
      if (!v || !*v) return std::nullopt;
      return std::string(v);
    };
  }
  LlmEnvironment env;
  if (auto key = get("LLM_API_KEY")) env.provider.api_key = *key;
  if (auto url = get("LLM_BASE_URL")) env.provider.base_url = *url;
  if (auto model = get("LLM_MODEL")) env.gateway.model = *model;
  if (auto timeout = get("LLM_TIMEOUT_SECS")) {
    std::size_t used = 0;
    double secs = 0.0;
    try {
      secs = std::stod(*timeout, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != timeout->size() || !(secs > 0.0)) {
      throw std::invalid_argument("LLM_TIMEOUT_SECS must be a positive number, got \"" + *timeout + "\"");
    }
    env.gateway.timeout_seconds = secs;
  }
  return env;
}

}  // namespace delib
