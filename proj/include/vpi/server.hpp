#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "vpi/session.hpp"

namespace vpi {

struct ServerOptions {
  /// Directory served at "/" when set (built web client assets).
  std::string static_dir;
  /// Session snapshot written here on stop() when set.
  std::string snapshot_path;
  /// Long-poll wait when the request gives no timeout_ms.
  std::chrono::milliseconds default_poll{25'000};
  std::chrono::milliseconds max_poll{60'000};
};

/// JSON-over-HTTP front end of a SessionManager:
///   POST /sessions                       {task, method, backend?, seed?, label?}
///   GET  /sessions/{id}
///   POST /sessions/{id}/moves            {object_id, target_position: [x, y]}
///   POST /sessions/{id}/infer
///   GET  /sessions/{id}/render/{step}.png
///   GET  /sessions/{id}/changes?since=REV[&timeout_ms=T]
/// Errors carry {"error": kind, "message": text}: 404 unknown session, step
/// or object; 409 invalid move or overlapping inference; 422 malformed body;
/// 502 backend failure.
class SessionServer {
 public:
  explicit SessionServer(std::shared_ptr<SessionManager> sessions, ServerOptions options = {});
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Binds and serves until stop(); returns false if binding failed.
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1); serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

  SessionManager& sessions() { return *sessions_; }

 private:
  struct Impl;
  std::shared_ptr<SessionManager> sessions_;
  ServerOptions options_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vpi
