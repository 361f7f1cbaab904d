#include "delib/session_service.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <mutex>

#include "delib/validation.hpp"

namespace delib {

namespace {

ServiceError unknown_session(const std::string& id) {
  return ServiceError("UnknownSession", 404, "no session with id \"" + id + "\"", Json{{"session_id", id}});
}

ServiceError unknown_persona(const std::string& id) {
  return ServiceError("UnknownPersona", 404, "no persona with id \"" + id + "\" in this session",
                      Json{{"persona_id", id}});
}

ServiceError reflection_missing(const std::string& id) {
  return ServiceError("ReflectionMissing", 409,
                      "persona \"" + id + "\" has no reflection yet; generate one before asking for a question",
                      Json{{"persona_id", id}});
}

Json warnings_json(const std::vector<std::string>& warnings) { return Json(warnings); }

}  // namespace

SessionService::SessionService(std::shared_ptr<Gateway> gateway, SessionStore store, ServiceOptions options)
    : gateway_(std::move(gateway)), store_(std::move(store)), options_(std::move(options)), rng_(std::random_device{}()) {
  if (!gateway_) throw std::invalid_argument("SessionService requires a gateway");
  auto report = store_.load_all();
  load_failures_ = std::move(report.failures);
  for (auto& state : report.sessions) {
    auto s = std::make_shared<Slot>();
    const std::string id = state.session_id;
    s->state = std::move(state);
    slots_.emplace(id, std::move(s));
  }
}

SessionService::~SessionService() {
  std::shared_lock lock(slots_mutex_);
  for (auto& [id, s] : slots_) s->events->close();
}

std::int64_t SessionService::now_ms() const {
  if (options_.now_ms) return options_.now_ms();
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string SessionService::fresh_id() {
  std::lock_guard lock(rng_mutex_);
  char buf[24];
  std::snprintf(buf, sizeof buf, "s%016llx", static_cast<unsigned long long>(rng_()));
  return buf;
}

std::shared_ptr<SessionService::Slot> SessionService::slot(const std::string& session_id) const {
  std::shared_lock lock(slots_mutex_);
  const auto it = slots_.find(session_id);
  if (it == slots_.end()) throw unknown_session(session_id);
  return it->second;
}

SessionState SessionService::read(const Slot& s) const {
  std::shared_lock lock(s.state_mutex);
  return s.state;
}

void SessionService::commit(Slot& s, SessionState next) {
  next.updated_at_ms = std::max(now_ms(), next.created_at_ms);
  try {
    store_.save(next);
  } catch (const StoreError& e) {
    throw ServiceError("PersistenceFailed", 500, e.what());
  }
  std::unique_lock lock(s.state_mutex);
  s.state = std::move(next);
}

void SessionService::fail_generation(Slot& s, const char* operation, const std::exception_ptr& error) {
  auto publish_and_throw = [&](ServiceError e) {
    s.events->publish(EventKind::Error,
                      Json{{"operation", operation}, {"code", e.code()}, {"message", e.what()}, {"details", e.details()}});
    throw e;
  };
  try {
    std::rethrow_exception(error);
  } catch (const ServiceError&) {
    throw;
  } catch (const StructuredOutputFailed& e) {
    publish_and_throw(ServiceError("StructuredOutputFailed", 502, e.what(),
                                   Json{{"attempts", e.attempts()}, {"issues", to_json_value(e.last_error())}}));
  } catch (const GatewayError& e) {
    int status = 502;
    if (e.kind() == GatewayErrorKind::Timeout) status = 504;
    if (e.kind() == GatewayErrorKind::ScriptExhausted) status = 503;
    if (e.kind() == GatewayErrorKind::InvalidRequest) status = 500;
    Json details = Json::object();
    if (e.kind() == GatewayErrorKind::Provider) {
      details = Json{{"status", e.status()}, {"body_excerpt", e.body_excerpt()}};
    }
    publish_and_throw(ServiceError(std::string(to_string(e.kind())), status, e.what(), std::move(details)));
  } catch (const MissingBinding& e) {
    publish_and_throw(ServiceError("MissingBinding", 409, e.what(), Json{{"binding", e.binding()}}));
  }
  throw ServiceError("Internal", 500, "unexpected failure");
}

std::string SessionService::create_session(const AssemblyContext& context) {
  try {
    // Round-trips through the intake validator so programmatic callers get the same checks as HTTP.
    validate_context(Json(context));
  } catch (const ValidationError& e) {
    throw ServiceError("BadContext", 400, e.what(), Json{{"issues", to_json_value(e)}});
  }
  auto s = std::make_shared<Slot>();
  s->state.context = context;
  s->state.created_at_ms = now_ms();
  s->state.updated_at_ms = s->state.created_at_ms;

  std::unique_lock lock(slots_mutex_);
  std::string id;
  do {
    id = fresh_id();
  } while (slots_.count(id));
  s->state.session_id = id;
  try {
    store_.save(s->state);
  } catch (const StoreError& e) {
    throw ServiceError("PersistenceFailed", 500, e.what());
  }
  slots_.emplace(id, std::move(s));
  return id;
}

SessionState SessionService::get(const std::string& session_id) const { return read(*slot(session_id)); }

std::vector<std::string> SessionService::session_ids() const {
  std::shared_lock lock(slots_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : slots_) ids.push_back(id);
  return ids;
}

std::shared_ptr<EventChannel> SessionService::events(const std::string& session_id) const {
  return slot(session_id)->events;
}

AppendOutcome SessionService::append_segment(const std::string& session_id, std::string speaker, std::string text,
                                             std::optional<double> timestamp) {
  auto s = slot(session_id);
  std::lock_guard op(s->op_mutex);
  SessionState next = read(*s);
  const double ts = timestamp ? *timestamp : static_cast<double>(now_ms() - next.created_at_ms) / 1000.0;
  Transcript::AppendResult appended;
  try {
    appended = next.transcript.append(std::move(speaker), std::move(text), ts);
  } catch (const TranscriptError& e) {
    throw ServiceError("EmptyText", 400, e.what());
  }
  if (appended.clamped) {
    std::cerr << "warning: session " << session_id << " segment " << appended.seq << " timestamp clamped to "
              << appended.timestamp << "\n";
  }
  const TranscriptSegment segment = next.transcript.segments().back();
  commit(*s, std::move(next));
  s->events->publish(EventKind::SegmentAdded, Json{{"segment", segment}, {"clamped", appended.clamped}});
  return AppendOutcome{appended.seq, appended.timestamp, appended.clamped};
}

std::vector<StakeholderPersona> SessionService::generate_stakeholders(const std::string& session_id) {
  auto s = slot(session_id);
  std::lock_guard op(s->op_mutex);
  SessionState next = read(*s);

  std::vector<StakeholderPersona> batch;
  try {
    batch = run_stakeholder_stage(*gateway_, next.context, next.transcript, options_.pipeline).value;
  } catch (...) {
    fail_generation(*s, "generate_stakeholders", std::current_exception());
  }

  const int batch_no = next.latest_batch() + 1;
  for (auto& p : next.stakeholders) p.superseded = true;
  std::size_t counter = next.stakeholders.size();
  for (auto& p : batch) {
    p.id = "p" + std::to_string(++counter);
    p.batch = batch_no;
    p.superseded = false;
    next.stakeholders.push_back(p);
  }
  commit(*s, std::move(next));
  s->events->publish(EventKind::StakeholdersReady, Json{{"batch", batch_no}, {"stakeholders", batch}});
  return batch;
}

StakeholderReflection SessionService::generate_reflection(const std::string& session_id,
                                                          const std::string& persona_id) {
  auto s = slot(session_id);
  std::lock_guard op(s->op_mutex);
  SessionState next = read(*s);
  const StakeholderPersona* persona = next.find_persona(persona_id);
  if (!persona) throw unknown_persona(persona_id);

  StageOutcome<StakeholderReflection> outcome;
  try {
    outcome = run_reflection_stage(*gateway_, *persona, next.context, next.transcript, options_.pipeline);
  } catch (...) {
    fail_generation(*s, "generate_reflection", std::current_exception());
  }
  next.reflections[persona_id] = outcome.value;
  commit(*s, std::move(next));
  s->events->publish(EventKind::ReflectionReady,
                     Json{{"persona_id", persona_id}, {"reflection", outcome.value}, {"warnings", warnings_json(outcome.warnings)}});
  return outcome.value;
}

StakeholderQuestion SessionService::generate_question(const std::string& session_id, const std::string& persona_id) {
  auto s = slot(session_id);
  std::lock_guard op(s->op_mutex);
  const SessionState current = read(*s);
  const StakeholderPersona* persona = current.find_persona(persona_id);
  if (!persona) throw unknown_persona(persona_id);
  const auto reflection = current.reflections.find(persona_id);
  if (reflection == current.reflections.end()) throw reflection_missing(persona_id);

  StageOutcome<StakeholderQuestion> outcome;
  try {
    const auto questions = current.question_texts();
    outcome = run_question_stage(*gateway_, *persona, reflection->second, current.context, current.transcript,
                                 questions, options_.pipeline);
  } catch (...) {
    fail_generation(*s, "generate_question", std::current_exception());
  }
  s->events->publish(EventKind::QuestionReady,
                     Json{{"question", outcome.value}, {"warnings", warnings_json(outcome.warnings)}});
  return outcome.value;
}

AcceptOutcome SessionService::accept_question(const std::string& session_id, StakeholderQuestion question) {
  auto s = slot(session_id);
  std::lock_guard op(s->op_mutex);
  SessionState next = read(*s);

  question.question = trim(question.question);
  if (question.question.empty()) {
    throw ServiceError("BadRequest", 400, "question text must not be empty", Json{{"path", "question"}});
  }
  if (question.persona_id) {
    if (!next.find_persona(*question.persona_id)) throw unknown_persona(*question.persona_id);
    if (!next.reflections.count(*question.persona_id)) throw reflection_missing(*question.persona_id);
  }
  if (auto resolved = resolve_expert(question.expert, next.context)) {
    question.expert = *resolved;
    question.expert_resolved = true;
  } else {
    question.expert = trim(question.expert);
    question.expert_resolved = false;
  }

  bool duplicate = false;
  for (const auto& existing : next.question_list) duplicate = duplicate || existing.question == question.question;
  next.question_list.push_back(question);
  AcceptOutcome outcome{next.question_list, duplicate};
  commit(*s, std::move(next));
  s->events->publish(EventKind::QuestionListChanged,
                     Json{{"question_list", outcome.question_list}, {"added", question}, {"duplicate", duplicate}});
  return outcome;
}

std::filesystem::path SessionService::snapshot(const std::string& session_id) {
  auto s = slot(session_id);
  std::lock_guard op(s->op_mutex);
  const SessionState current = read(*s);
  try {
    store_.save(current);
  } catch (const StoreError& e) {
    throw ServiceError("PersistenceFailed", 500, e.what());
  }
  return store_.path_for(session_id);
}

SessionState SessionService::restore(const std::filesystem::path& file) {
  try {
    return SessionStore::load(file);
  } catch (const StoreError& e) {
    throw ServiceError("CorruptSnapshot", 500, e.what(), Json{{"file", file.string()}});
  }
}

void SessionService::shutdown() {
  std::vector<std::shared_ptr<Slot>> all;
  {
    std::shared_lock lock(slots_mutex_);
    for (const auto& [id, s] : slots_) all.push_back(s);
  }
  for (auto& s : all) {
    std::lock_guard op(s->op_mutex);
    try {
      store_.save(read(*s));
    } catch (const StoreError& e) {
      std::cerr << "warning: " << e.what() << "\n";
    }
    s->events->close();
  }
}

}  // namespace delib
