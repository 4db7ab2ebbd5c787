#include "vpi/http_backend.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "vpi/error.hpp"

namespace vpi {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return (v != nullptr && *v != '\0') ? std::string(v) : fallback;
}

}  // namespace

HttpBackendConfig HttpBackendConfig::from_env() {
  HttpBackendConfig c;
  c.api_base = env_or("VPI_API_BASE", c.api_base);
  c.api_key = env_or("VPI_API_KEY", "");
  c.model = env_or("VPI_MODEL", c.model);
  const std::string timeout = env_or("VPI_TIMEOUT_S", "");
  if (!timeout.empty()) c.timeout_seconds = std::max(1, std::atoi(timeout.c_str()));
  return c;
}

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.empty()) return {};
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

nlohmann::json chat_completions_payload(const BackendRequest& request, const std::string& model) {
  using nlohmann::json;
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", request.bundle.user}});
  for (const auto& png : request.bundle.images) {
    content.push_back({{"type", "image_url"},
                       {"image_url", {{"url", "data:image/png;base64," + base64_encode(png)}}}});
  }
  json messages = json::array();
  if (!request.bundle.system.empty()) {
    messages.push_back({{"role", "system"}, {"content", request.bundle.system}});
  }
  messages.push_back({{"role", "user"}, {"content", content}});
  return json{{"model", model},
              {"temperature", request.decoding.temperature},
              {"max_tokens", request.decoding.max_tokens},
              {"messages", messages}};
}

BackendResponse parse_chat_completions_response(const std::string& body) {
  BackendResponse out;
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) {
      out.text = content.get<std::string>();
    } else if (content.is_array()) {
      for (const auto& part : content) {
        if (part.value("type", "") == "text") out.text += part.value("text", "");
      }
    }
    if (j.contains("usage")) {
      out.prompt_tokens = j["usage"].value("prompt_tokens", 0);
      out.completion_tokens = j["usage"].value("completion_tokens", 0);
    }
  } catch (const nlohmann::json::exception& err) {
    throw Error(ErrorKind::kBackendFailure, std::string("unreadable completion: ") + err.what());
  }
  if (out.text.empty()) throw Error(ErrorKind::kBackendFailure, "completion has no text");
  return out;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  std::string base = config_.api_base;
  while (!base.empty() && base.back() == '/') base.pop_back();
  const std::size_t scheme_end = base.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kInvalidArgument, "api base must include a scheme: " + base);
  }
  const std::size_t path_start = base.find('/', scheme_end + 3);
  scheme_host_port_ = base.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : base.substr(path_start);
  if (config_.max_in_flight < 1) config_.max_in_flight = 1;
}

BackendResponse HttpBackend::complete(const BackendRequest& request) {
  const std::string body = chat_completions_payload(request, config_.model).dump();
  const std::string path = path_prefix_ + "/chat/completions";
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  std::string last_error;
  for (int attempt = 0; attempt <= config_.transport_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250 << attempt));
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);

    const auto start = std::chrono::steady_clock::now();
    auto res = client.Post(path, headers, body, "application/json");
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorKind::kBackendFailure,
                  "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
    }
    BackendResponse out = parse_chat_completions_response(res->body);
    out.latency_ms = ms;
    return out;
  }
  throw Error(ErrorKind::kBackendFailure, last_error);
}

}  // namespace vpi
