#include "commands.hpp"

#include <pthread.h>
#include <signal.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "delib/http_api.hpp"
#include "delib/mock_provider.hpp"
#include "delib/openai_provider.hpp"
#include "delib/session_service.hpp"
#include "delib/survey.hpp"
#include "delib/validation.hpp"

namespace delib::cli {

namespace fs = std::filesystem;

namespace {

// Failure carrying its exit code; raised inside commands, reported once at the top.
struct CommandFailure {
  int exit_code;
  std::string code;
  std::string message;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandFailure{kExitInputError, "InputUnreadable", "cannot read " + path.string()};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << data;
  if (!out.flush()) throw CommandFailure{kExitInputError, "OutputUnwritable", "cannot write " + path.string()};
}

Json read_json_file(const fs::path& path) {
  const std::string text = read_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw CommandFailure{kExitInputError, "BadJson", path.string() + ": not valid JSON"};
  return j;
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

std::shared_ptr<ChatProvider> make_provider(const std::optional<fs::path>& mock_script, GatewayConfig& config) {
  if (mock_script) {
    try {
      return std::make_shared<MockProvider>(ProviderScript::load(*mock_script));
    } catch (const std::exception& e) {
      throw CommandFailure{kExitInputError, "BadMockScript", e.what()};
    }
  }
  try {
    auto env = load_llm_environment();
    config = env.gateway;
    return std::make_shared<OpenAICompatibleProvider>(env.provider);
  } catch (const std::invalid_argument& e) {
    throw CommandFailure{kExitInputError, "BadEnvironment", e.what()};
  }
}

// Maps pipeline exceptions onto the exit-code contract.
CommandFailure classify(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const CommandFailure& f) {
    return f;
  } catch (const StructuredOutputFailed& e) {
    return {kExitPipelineError, "StructuredOutputFailed", std::string(e.what()) + "\n" + e.last_error().bullet_list()};
  } catch (const MissingBinding& e) {
    return {kExitPipelineError, "MissingBinding", e.what()};
  } catch (const GatewayError& e) {
    const int code = e.kind() == GatewayErrorKind::InvalidRequest ? kExitPipelineError : kExitProviderError;
    return {code, std::string(to_string(e.kind())), e.what()};
  } catch (const ServiceError& e) {
    return {e.http_status() >= 500 ? kExitProviderError : kExitInputError, e.code(), e.what()};
  } catch (const std::exception& e) {
    return {kExitPipelineError, "Internal", e.what()};
  }
}

int report(const CommandFailure& f, std::ostream& err) {
  err << "error: " << f.code << ": " << f.message << "\n";
  return f.exit_code;
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

const StakeholderPersona& pick_persona(const std::vector<StakeholderPersona>& personas, std::size_t index) {
  if (index >= personas.size()) {
    throw CommandFailure{kExitInputError, "UnknownPersona",
                         "--persona " + std::to_string(index) + " out of range (" +
                             std::to_string(personas.size()) + " personas)"};
  }
  return personas[index];
}

std::vector<StakeholderPersona> load_personas(const fs::path& out_dir) {
  const fs::path file = out_dir / "personas.json";
  if (!fs::exists(file)) {
    throw CommandFailure{kExitPipelineError, "StakeholdersMissing",
                         file.string() + " not found; run --stage stakeholders first"};
  }
  try {
    return read_json_file(file).get<std::vector<StakeholderPersona>>();
  } catch (const Json::exception& e) {
    throw CommandFailure{kExitInputError, "BadArtifact", file.string() + ": " + e.what()};
  }
}

StakeholderReflection load_reflection(const fs::path& out_dir, const StakeholderPersona& persona) {
  const fs::path file = out_dir / "reflection.json";
  const std::string missing = "no reflection for persona " + persona.id + "; run --stage reflection first";
  if (!fs::exists(file)) throw CommandFailure{kExitPipelineError, "ReflectionMissing", missing};
  StakeholderReflection reflection;
  try {
    reflection = read_json_file(file).get<StakeholderReflection>();
  } catch (const Json::exception& e) {
    throw CommandFailure{kExitInputError, "BadArtifact", file.string() + ": " + e.what()};
  }
  if (reflection.persona_id != persona.id) throw CommandFailure{kExitPipelineError, "ReflectionMissing", missing};
  return reflection;
}

sigset_t shutdown_signals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  return set;
}

}  // namespace

int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  // Block before any thread starts so only the waiter below receives them.
  const sigset_t signals = shutdown_signals();
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    std::optional<SessionStore> store;
    try {
      store.emplace(options.data_dir);
    } catch (const StoreError& e) {
      throw CommandFailure{kExitInputError, "BadDataDir", e.what()};
    }
    GatewayConfig config;
    auto provider = make_provider(options.mock_script, config);
    auto gateway = std::make_shared<Gateway>(provider, config);
    SessionService service(gateway, std::move(*store));
    for (const auto& failure : service.load_failures()) err << "warning: skipped snapshot " << failure << "\n";

    HttpApi api(service);
    int port = options.port;
    if (port == 0) {
      port = api.bind_to_any_port(options.host);
      if (port < 0) throw CommandFailure{kExitInputError, "PortInUse", "no free port on " + options.host};
    } else if (!api.bind(options.host, port)) {
      throw CommandFailure{kExitInputError, "PortInUse", "cannot bind " + options.host + ":" + std::to_string(port)};
    }

    std::thread waiter([&api, signals] {
      int received = 0;
      sigwait(&signals, &received);
      api.stop();
    });

    out << "listening on http://" << options.host << ":" << port << " (" << provider->tag() << " provider, "
        << service.session_ids().size() << " session(s) loaded)" << std::endl;
    api.listen_after_bind();

    // listen may also end without a signal; wake the waiter ourselves.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();

    service.shutdown();
    out << "shut down cleanly" << std::endl;
    return kExitOk;
  } catch (...) {
    return report(classify(std::current_exception()), err);
  }
}

int cmd_replay(const ReplayOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const std::string& stage = options.stage;
    const bool all = stage == "all";
    if (!all && stage != "stakeholders" && stage != "reflection" && stage != "question") {
      throw CommandFailure{kExitInputError, "BadStage", "--stage must be all, stakeholders, reflection or question"};
    }

    AssemblyContext context;
    try {
      context = validate_context(read_json_file(options.context));
    } catch (const ValidationError& e) {
      throw CommandFailure{kExitInputError, "BadContext", options.context.string() + ":\n" + e.bullet_list()};
    }
    Transcript transcript;
    try {
      transcript = Transcript::from_jsonl(read_file(options.transcript));
    } catch (const TranscriptError& e) {
      throw CommandFailure{kExitInputError, "BadTranscript", options.transcript.string() + ": " + e.what()};
    }

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw CommandFailure{kExitInputError, "OutputUnwritable", options.out_dir.string() + ": " + ec.message()};

    GatewayConfig config;
    Gateway gateway(make_provider(options.mock_script, config), config);

    std::vector<StakeholderPersona> personas;
    if (all || stage == "stakeholders") {
      auto outcome = run_stakeholder_stage(gateway, context, transcript, options.pipeline);
      personas = std::move(outcome.value);
      for (std::size_t i = 0; i < personas.size(); ++i) {
        personas[i].id = "p" + std::to_string(i + 1);
        personas[i].batch = 1;
        personas[i].superseded = false;
      }
      write_file(options.out_dir / "personas.json", pretty(Json(personas)));
      print_warnings(outcome.warnings, err);
      out << "stakeholders: " << personas.size() << " personas, " << outcome.completion.attempts << " attempt(s)\n";
    } else {
      if (stage == "question" && !fs::exists(options.out_dir / "reflection.json")) {
        throw CommandFailure{kExitPipelineError, "ReflectionMissing",
                             (options.out_dir / "reflection.json").string() +
                                 " not found; run --stage reflection first"};
      }
      personas = load_personas(options.out_dir);
    }
    if (stage == "stakeholders") return kExitOk;

    const StakeholderPersona& persona = pick_persona(personas, options.persona_index);

    StakeholderReflection reflection;
    if (all || stage == "reflection") {
      auto outcome = run_reflection_stage(gateway, persona, context, transcript, options.pipeline);
      reflection = std::move(outcome.value);
      write_file(options.out_dir / "reflection.json", pretty(Json(reflection)));
      print_warnings(outcome.warnings, err);
      out << "reflection: persona " << persona.id << ", " << outcome.completion.attempts << " attempt(s)\n";
    } else {
      reflection = load_reflection(options.out_dir, persona);
    }
    if (stage == "reflection") return kExitOk;

    auto outcome = run_question_stage(gateway, persona, reflection, context, transcript, {}, options.pipeline);
    write_file(options.out_dir / "question.json", pretty(Json(outcome.value)));
    print_warnings(outcome.warnings, err);
    out << "question: persona " << persona.id << ", expert " << outcome.value.expert
        << (outcome.value.expert_resolved ? "" : " (unresolved)") << ", " << outcome.completion.attempts
        << " attempt(s)\n";
    return kExitOk;
  } catch (...) {
    return report(classify(std::current_exception()), err);
  }
}

int cmd_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const std::string text = read_file(options.csv);
    survey::SurveyReport report;
    try {
      const auto responses = survey::parse_csv(text);
      report = survey::summarize_items(responses);
    } catch (const survey::SurveyError& e) {
      throw CommandFailure{kExitInputError, "BadSurvey", options.csv.string() + ": " + e.what()};
    }
    out << survey::to_table(report);
    if (options.out) write_file(*options.out, pretty(survey::to_json(report)));
    return kExitOk;
  } catch (...) {
    return report(classify(std::current_exception()), err);
  }
}

}  // namespace delib::cli
