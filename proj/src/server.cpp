#include "vpi/server.hpp"

#include <fstream>

#include <httplib.h>

#include "vpi/error.hpp"
#include "vpi/json_io.hpp"

namespace vpi {

struct SessionServer::Impl {
  httplib::Server http;
};

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view kind, const std::string& msg) {
  send_json(res, status, {{"error", kind}, {"message", msg}});
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnknownSession:
    case ErrorKind::kUnknownObject:
      return 404;
    case ErrorKind::kInvalidResult:
    case ErrorKind::kBusy:
      return 409;
    case ErrorKind::kBackendFailure:
    case ErrorKind::kUnrecognizedRequest:
      return 502;
    default:
      return 422;
  }
}

// Runs `body`, translating library and JSON errors into error payloads.
template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const Error& err) {
    send_error(res, status_for(err.kind()), error_kind_name(err.kind()), err.what());
  } catch (const json::exception& err) {
    send_error(res, 422, "MalformedBody", err.what());
  } catch (const std::exception& err) {
    send_error(res, 500, "Internal", err.what());
  }
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body);
  if (!j.is_object()) throw Error(ErrorKind::kParseError, "body must be a JSON object");
  return j;
}

Point parse_point(const json& j) {
  if (j.is_array() && j.size() == 2) return {j.at(0).get<double>(), j.at(1).get<double>()};
  if (j.is_object()) return {j.at("x").get<double>(), j.at("y").get<double>()};
  throw Error(ErrorKind::kParseError, "target_position must be [x, y] or {\"x\", \"y\"}");
}

}  // namespace

SessionServer::SessionServer(std::shared_ptr<SessionManager> sessions, ServerOptions options)
    : sessions_(std::move(sessions)), options_(std::move(options)), impl_(std::make_unique<Impl>()) {
  auto& http = impl_->http;
  auto& mgr = *sessions_;

  http.Post("/sessions", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      SessionOptions o;
      o.task = parse_task(body.at("task").get<std::string>());
      if (body.contains("method")) o.method = parse_method(body["method"].get<std::string>());
      if (body.contains("backend")) o.backend = parse_backend_spec(body["backend"].get<std::string>());
      if (body.contains("seed")) o.seed = body["seed"].get<std::uint64_t>();
      if (body.contains("label") && !body["label"].is_null()) {
        o.oracle_label = parse_preference(body["label"].get<std::string>());
      }
      const SessionState s = mgr.create(o);
      send_json(res, 201, {{"id", s.id}, {"scene", s.scenes.back()}, {"revision", s.revision}});
    });
  });

  http.Get(R"(/sessions/([^/]+))", [&mgr](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, session_to_json(mgr.get(req.matches[1]))); });
  });

  http.Post(R"(/sessions/([^/]+)/moves)",
            [&mgr](const httplib::Request& req, httplib::Response& res) {
              guarded(res, [&] {
                const std::string id = req.matches[1];
                mgr.get(id);
                const json body = parse_body(req);
                Move move;
                move.object_id = body.at("object_id").get<int>();
                move.target_position = parse_point(body.at("target_position"));
                const SessionState s = mgr.apply(id, move);
                send_json(res, 200, {{"scene", s.scenes.back()}, {"revision", s.revision}});
              });
            });

  http.Post(R"(/sessions/([^/]+)/infer)",
            [&mgr](const httplib::Request& req, httplib::Response& res) {
              guarded(res, [&] { send_json(res, 200, inference_to_json(mgr.infer(req.matches[1]))); });
            });

  http.Get(R"(/sessions/([^/]+)/render/(\d+)\.png)",
           [&mgr](const httplib::Request& req, httplib::Response& res) {
             guarded(res, [&] {
               const std::string id = req.matches[1];
               const auto state = mgr.get(id);
               const std::size_t step = std::stoul(req.matches[2]);
               if (step >= state.scenes.size()) {
                 send_error(res, 404, "UnknownStep", "no step " + std::to_string(step));
                 return;
               }
               const Png png = mgr.render(id, step);
               res.status = 200;
               res.set_content(reinterpret_cast<const char*>(png.data()), png.size(), "image/png");
             });
           });

  const auto default_poll = options_.default_poll;
  const auto max_poll = options_.max_poll;
  http.Get(R"(/sessions/([^/]+)/changes)",
           [&mgr, default_poll, max_poll](const httplib::Request& req, httplib::Response& res) {
             guarded(res, [&] {
               std::uint64_t since = 0;
               auto timeout = default_poll;
               try {
                 if (req.has_param("since")) since = std::stoull(req.get_param_value("since"));
                 if (req.has_param("timeout_ms")) {
                   timeout = std::chrono::milliseconds(std::stoll(req.get_param_value("timeout_ms")));
                 }
               } catch (const std::exception&) {
                 throw Error(ErrorKind::kParseError, "since and timeout_ms must be integers");
               }
               timeout = std::clamp(timeout, std::chrono::milliseconds(0), max_poll);
               if (auto s = mgr.wait_for_change(req.matches[1], since, timeout)) {
                 send_json(res, 200, session_to_json(*s));
               } else {
                 res.status = 204;
               }
             });
           });

  if (!options_.static_dir.empty()) http.set_mount_point("/", options_.static_dir);
}

SessionServer::~SessionServer() { stop(); }

bool SessionServer::listen(const std::string& host, int port) {
  return impl_->http.listen(host, port);
}

int SessionServer::bind_any_port(const std::string& host) {
  return impl_->http.bind_to_any_port(host);
}

bool SessionServer::listen_after_bind() { return impl_->http.listen_after_bind(); }

void SessionServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

void SessionServer::stop() {
  if (!impl_) return;
  sessions_->shutdown();
  if (impl_->http.is_running()) impl_->http.stop();
  if (!options_.snapshot_path.empty()) {
    std::ofstream out(options_.snapshot_path);
    if (out) out << sessions_->snapshot().dump(2) << "\n";
    options_.snapshot_path.clear();
  }
}

}  // namespace vpi
