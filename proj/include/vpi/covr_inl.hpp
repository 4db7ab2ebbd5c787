#pragma once

#include "vpi/error.hpp"

namespace vpi {

template <typename Parse>
auto complete_with_retry(MllmBackend& backend, const BackendRequest& request,
                         const RetryPolicy& retry, std::vector<TranscriptEntry>& transcript,
                         Parse parse) -> std::optional<decltype(parse(std::string{}))> {
  const std::string digest = request_digest(request);
  for (int attempt = 0; attempt <= retry.max_retries; ++attempt) {
    BackendResponse response = backend.complete(request);
    transcript.push_back({digest, response.text});
    try {
      return parse(response.text);
    } catch (const Error& err) {
      switch (err.kind()) {
        case ErrorKind::kMalformedResponse:
        case ErrorKind::kUnknownRelation:
        case ErrorKind::kUnknownPreference:
          continue;
        default:
          throw;
      }
    }
  }
  return std::nullopt;
}

}  // namespace vpi
