#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <string>

#include "delib/session_service.hpp"

namespace httplib {
class Server;
}

namespace delib {

struct HttpApiOptions {
  int worker_threads = 32;  // each open event stream holds one worker
  std::chrono::milliseconds event_poll{500};
  std::chrono::seconds keepalive{15};
};

// JSON routes over SessionService:
//   POST /sessions                                   -> {session_id}
//   GET  /sessions/{id}                              -> session state
//   POST /sessions/{id}/transcript                   -> {seq, timestamp, clamped}
//   GET  /sessions/{id}/transcript?format=json|jsonl
//   POST /sessions/{id}/stakeholders                 -> {stakeholders:[...]}
//   POST /sessions/{id}/stakeholders/{pid}/reflection
//   POST /sessions/{id}/stakeholders/{pid}/question
//   POST /sessions/{id}/questions                    -> {question_list, duplicate}
//   GET  /sessions/{id}/events                       -> text/event-stream
// Errors are {code, message, details}.
class HttpApi {
 public:
  explicit HttpApi(SessionService& service, HttpApiOptions options = {});
  ~HttpApi();

  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  bool bind(const std::string& host, int port);
  int bind_to_any_port(const std::string& host);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  bool is_running() const;
  void wait_until_ready() const;

 private:
  void install_routes();

  SessionService& service_;
  HttpApiOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::shared_ptr<std::atomic<bool>> stopping_;
};

}  // namespace delib
