#include "delib/mock_provider.hpp"

#include <fstream>
#include <sstream>

namespace delib {

namespace {

ScriptedResponse parse_entry(const Json& entry, const std::string& where) {
  if (entry.is_string()) return ScriptedResponse::reply(entry.get<std::string>());
  if (!entry.is_object()) throw std::invalid_argument(where + ": expected a string or an object");
  if (auto it = entry.find("raw"); it != entry.end()) {
    if (!it->is_string()) throw std::invalid_argument(where + ".raw: expected a string");
    return ScriptedResponse::reply(it->get<std::string>());
  }
  if (auto it = entry.find("json"); it != entry.end()) return ScriptedResponse::reply(it->dump());
  if (auto it = entry.find("fail"); it != entry.end()) {
    const std::string kind = it->is_string() ? it->get<std::string>() : std::string{};
    const std::string body = entry.value("body", std::string{});
    if (kind == "timeout") return ScriptedResponse::failure(ScriptedResponse::Kind::Timeout, body);
    if (kind == "transport") return ScriptedResponse::failure(ScriptedResponse::Kind::Transport, body);
    if (kind == "provider") {
      return ScriptedResponse::failure(ScriptedResponse::Kind::Provider, body, entry.value("status", 500));
    }
    throw std::invalid_argument(where + ".fail: expected timeout, transport or provider");
  }
  throw std::invalid_argument(where + ": expected one of raw, json, fail");
}

void parse_queue(const Json& array, const std::string& where, std::deque<ScriptedResponse>& out) {
  if (!array.is_array()) throw std::invalid_argument(where + ": expected an array");
  for (std::size_t i = 0; i < array.size(); ++i) {
    out.push_back(parse_entry(array[i], where + "[" + std::to_string(i) + "]"));
  }
}

}  // namespace

ProviderScript ProviderScript::from_json(const Json& script) {
  ProviderScript out;
  if (script.is_array()) {
    parse_queue(script, "script", out.shared_);
    return out;
  }
  if (!script.is_object()) throw std::invalid_argument("script: expected an object or an array");
  for (const auto& [key, value] : script.items()) {
    if (key == "responses") {
      parse_queue(value, key, out.shared_);
    } else if (auto stage = parse_stage_name(key)) {
      parse_queue(value, key, out.by_stage_[*stage]);
    } else {
      throw std::invalid_argument("script: unknown key \"" + key + "\"");
    }
  }
  return out;
}

ProviderScript ProviderScript::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open mock script " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  Json parsed = Json::parse(buffer.str(), nullptr, false);
  if (parsed.is_discarded()) throw std::invalid_argument("mock script " + path.string() + " is not valid JSON");
  return from_json(parsed);
}

ProviderScript& ProviderScript::push(ScriptedResponse response) {
  shared_.push_back(std::move(response));
  return *this;
}

ProviderScript& ProviderScript::push(PromptStage stage, ScriptedResponse response) {
  by_stage_[stage].push_back(std::move(response));
  return *this;
}

std::optional<ScriptedResponse> ProviderScript::next(PromptStage stage) {
  auto take = [](std::deque<ScriptedResponse>& queue) {
    ScriptedResponse front = std::move(queue.front());
    queue.pop_front();
    return front;
  };
  if (auto it = by_stage_.find(stage); it != by_stage_.end() && !it->second.empty()) return take(it->second);
  if (!shared_.empty()) return take(shared_);
  return std::nullopt;
}

std::size_t ProviderScript::remaining() const {
  std::size_t total = shared_.size();
  for (const auto& [stage, queue] : by_stage_) total += queue.size();
  return total;
}

MockProvider::MockProvider(ProviderScript script) : script_(std::move(script)) {}

CompletionResult MockProvider::complete(const CompletionRequest& request) {
  std::lock_guard lock(mutex_);
  requests_.push_back(request);
  auto next = script_.next(request.prompt.stage);
  if (!next) {
    throw GatewayError(GatewayErrorKind::ScriptExhausted,
                       "mock script has no reply left for stage " +
                           std::string(stage_name(request.prompt.stage)));
  }
  switch (next->kind) {
    case ScriptedResponse::Kind::Text:
      return CompletionResult{std::move(next->text), 1, 0.0, tag()};
    case ScriptedResponse::Kind::Timeout:
      throw GatewayError(GatewayErrorKind::Timeout, "scripted timeout");
    case ScriptedResponse::Kind::Transport:
      throw GatewayError(GatewayErrorKind::Transport, "scripted transport failure");
    case ScriptedResponse::Kind::Provider:
      throw GatewayError(GatewayErrorKind::Provider,
                         "provider returned status " + std::to_string(next->status), next->status,
                         next->text.substr(0, 200));
  }
  throw GatewayError(GatewayErrorKind::Transport, "unreachable");
}

std::vector<CompletionRequest> MockProvider::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::size_t MockProvider::remaining() const {
  std::lock_guard lock(mutex_);
  return script_.remaining();
}

void MockProvider::enqueue(ScriptedResponse response) {
  std::lock_guard lock(mutex_);
  script_.push(std::move(response));
}

void MockProvider::enqueue(PromptStage stage, ScriptedResponse response) {
  std::lock_guard lock(mutex_);
  script_.push(stage, std::move(response));
}

}  // namespace delib
