#include "delib/http_api.hpp"

#include <httplib.h>

#include <cmath>

namespace delib {

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const ServiceError& e) { send_json(res, e.http_status(), e.to_json()); }

ServiceError bad_request(const std::string& message, Json details = Json::object()) {
  return ServiceError("BadRequest", 400, message, std::move(details));
}

Json parse_body(const httplib::Request& req) {
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw bad_request("request body must be a JSON object");
  return body;
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e);
    } catch (const Json::exception& e) {
      send_error(res, bad_request(e.what()));
    } catch (const std::exception& e) {
      send_error(res, ServiceError("Internal", 500, e.what()));
    }
  };
}

std::string sse_frame(const SessionEvent& e) {
  return "id: " + std::to_string(e.seq) + "\nevent: " + std::string(to_string(e.kind)) +
         "\ndata: " + Json(e).dump() + "\n\n";
}

std::int64_t parse_cursor(const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v < 0) throw bad_request("event cursor must be a non-negative integer");
  return v;
}

}  // namespace

HttpApi::HttpApi(SessionService& service, HttpApiOptions options)
    : service_(service),
      options_(options),
      server_(std::make_unique<httplib::Server>()),
      stopping_(std::make_shared<std::atomic<bool>>(false)) {
  const int threads = std::max(2, options_.worker_threads);
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  // httplib's default adds SO_REUSEPORT, which lets a second server share a busy port.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  install_routes();
}

HttpApi::~HttpApi() { stop(); }

bool HttpApi::bind(const std::string& host, int port) { return server_->bind_to_port(host, port); }
int HttpApi::bind_to_any_port(const std::string& host) { return server_->bind_to_any_port(host); }
bool HttpApi::listen_after_bind() { return server_->listen_after_bind(); }
bool HttpApi::is_running() const { return server_->is_running(); }
void HttpApi::wait_until_ready() const { server_->wait_until_ready(); }

void HttpApi::stop() {
  stopping_->store(true);
  if (server_->is_running()) server_->stop();
}

void HttpApi::install_routes() {
  auto& svr = *server_;
  SessionService& service = service_;

  svr.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Last-Event-ID");
    res.status = 204;
  });

  svr.Post("/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req);
    AssemblyContext context;
    try {
      context = validate_context(body);
    } catch (const ValidationError& e) {
      throw ServiceError("BadContext", 400, e.what(), Json{{"issues", to_json_value(e)}});
    }
    send_json(res, 201, Json{{"session_id", service.create_session(context)}});
  }));

  svr.Get("/sessions/:id", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const std::string& id = req.path_params.at("id");
    Json body = service.get(id);
    body["event_seq"] = service.events(id)->last_seq();
    send_json(res, 200, body);
  }));

  svr.Post("/sessions/:id/transcript", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req);
    const auto text = body.find("text");
    if (text == body.end() || !text->is_string()) {
      throw bad_request("\"text\" must be a string", Json{{"path", "text"}});
    }
    std::string speaker = "Unknown";
    if (auto it = body.find("speaker"); it != body.end() && !it->is_null()) {
      if (!it->is_string()) throw bad_request("\"speaker\" must be a string", Json{{"path", "speaker"}});
      speaker = it->get<std::string>();
    }
    std::optional<double> timestamp;
    if (auto it = body.find("timestamp"); it != body.end() && !it->is_null()) {
      if (!it->is_number() || !std::isfinite(it->get<double>())) {
        throw bad_request("\"timestamp\" must be a number of seconds", Json{{"path", "timestamp"}});
      }
      timestamp = it->get<double>();
    }
    const auto outcome =
        service.append_segment(req.path_params.at("id"), std::move(speaker), text->get<std::string>(), timestamp);
    send_json(res, 201, Json{{"seq", outcome.seq}, {"timestamp", outcome.timestamp}, {"clamped", outcome.clamped}});
  }));

  svr.Get("/sessions/:id/transcript", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const SessionState state = service.get(req.path_params.at("id"));
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "json";
    if (format == "json") {
      send_json(res, 200, Json(state.transcript));
    } else if (format == "jsonl") {
      res.status = 200;
      res.set_content(state.transcript.to_jsonl(), "application/x-ndjson");
    } else {
      throw bad_request("format must be json or jsonl", Json{{"path", "format"}});
    }
  }));

  svr.Post("/sessions/:id/stakeholders", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const auto batch = service.generate_stakeholders(req.path_params.at("id"));
    send_json(res, 200, Json{{"stakeholders", batch}});
  }));

  svr.Post("/sessions/:id/stakeholders/:pid/reflection",
           guarded([&service](const httplib::Request& req, httplib::Response& res) {
             const auto reflection =
                 service.generate_reflection(req.path_params.at("id"), req.path_params.at("pid"));
             send_json(res, 200, Json(reflection));
           }));

  svr.Post("/sessions/:id/stakeholders/:pid/question",
           guarded([&service](const httplib::Request& req, httplib::Response& res) {
             const auto question = service.generate_question(req.path_params.at("id"), req.path_params.at("pid"));
             send_json(res, 200, Json(question));
           }));

  svr.Post("/sessions/:id/questions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req);
    StakeholderQuestion question;
    try {
      question = body.get<StakeholderQuestion>();
    } catch (const Json::exception&) {
      throw bad_request("expected {question, persona_id?, explanation?, expert?}", Json{{"path", "question"}});
    }
    const auto outcome = service.accept_question(req.path_params.at("id"), std::move(question));
    send_json(res, 200, Json{{"question_list", outcome.question_list}, {"duplicate", outcome.duplicate}});
  }));

  const auto poll = options_.event_poll;
  const auto keepalive = options_.keepalive;
  auto stopping = stopping_;
  svr.Get("/sessions/:id/events",
          guarded([&service, poll, keepalive, stopping](const httplib::Request& req, httplib::Response& res) {
            auto channel = service.events(req.path_params.at("id"));
            std::int64_t cursor = channel->last_seq();
            if (req.has_param("since")) {
              cursor = parse_cursor(req.get_param_value("since"));
            } else if (req.has_header("Last-Event-ID")) {
              cursor = parse_cursor(req.get_header_value("Last-Event-ID"));
            }
            res.set_header("Cache-Control", "no-cache");
            auto last_write = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::now());
            auto first = std::make_shared<bool>(true);
            res.set_chunked_content_provider(
                "text/event-stream",
                [channel, cursor, poll, keepalive, stopping, last_write, first](std::size_t,
                                                                                 httplib::DataSink& sink) mutable {
                  if (*first) {
                    *first = false;
                    const std::string hello = ": connected at " + std::to_string(cursor) + "\n\n";
                    if (!sink.write(hello.data(), hello.size())) return false;
                  }
                  if (stopping->load()) return false;
                  const auto events = channel->wait_since(cursor, poll);
                  if (events.empty()) {
                    if (channel->closed() || stopping->load()) return false;
                    if (std::chrono::steady_clock::now() - *last_write >= keepalive) {
                      static constexpr char ping[] = ": ping\n\n";
                      if (!sink.write(ping, sizeof ping - 1)) return false;
                      *last_write = std::chrono::steady_clock::now();
                    }
                    return true;
                  }
                  std::string frames;
                  for (const auto& e : events) {
                    frames += sse_frame(e);
                    cursor = e.seq;
                  }
                  if (!sink.write(frames.data(), frames.size())) return false;
                  *last_write = std::chrono::steady_clock::now();
                  return true;
                });
          }));
}

}  // namespace delib
