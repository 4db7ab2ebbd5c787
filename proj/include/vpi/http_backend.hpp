#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "vpi/backend.hpp"

namespace vpi {

struct HttpBackendConfig {
  /// Base URL up to and excluding "/chat/completions", e.g. "https://host/v1".
  std::string api_base = "https://api.openai.com/v1";
  std::string api_key;
  std::string model = "gpt-4o";
  int timeout_seconds = 60;
  int max_in_flight = 4;
  /// Extra attempts after connection errors, 429 and 5xx replies.
  int transport_retries = 2;

  /// Reads VPI_API_BASE, VPI_API_KEY, VPI_MODEL and VPI_TIMEOUT_S.
  static HttpBackendConfig from_env();
};

/// OpenAI-style chat-completions request body; images become base64 data URLs.
nlohmann::json chat_completions_payload(const BackendRequest& request, const std::string& model);

/// Extracts choices[0].message.content and token usage. Throws
/// kBackendFailure for bodies without usable text.
BackendResponse parse_chat_completions_response(const std::string& body);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);

class HttpBackend : public MllmBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  BackendResponse complete(const BackendRequest& request) override;
  std::string id() const override { return "http:" + config_.model; }
  int max_concurrency() const override { return config_.max_in_flight; }

 private:
  HttpBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

}  // namespace vpi
