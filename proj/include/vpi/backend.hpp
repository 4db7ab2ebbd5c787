#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace vpi {

using Png = std::vector<std::uint8_t>;

struct FewShotExample {
  std::string prompt;
  std::string response;

  friend bool operator==(const FewShotExample&, const FewShotExample&) = default;
};

/// One multimodal prompt. `few_shot` is structured metadata; builders also
/// inline the examples into `user`, which is what backends send.
struct PromptBundle {
  std::string system;
  std::string user;
  std::vector<Png> images;
  std::vector<FewShotExample> few_shot;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

struct DecodingParams {
  double temperature = 0.0;
  int max_tokens = 512;
};

struct BackendRequest {
  PromptBundle bundle;
  DecodingParams decoding;
};

struct BackendResponse {
  std::string text;
  double latency_ms = 0.0;
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

/// A vision-language model behind a single blocking call. Implementations
/// must tolerate up to max_concurrency() simultaneous complete() calls.
class MllmBackend {
 public:
  virtual ~MllmBackend() = default;

  /// Throws Error(kBackendFailure) when no usable response was obtained.
  virtual BackendResponse complete(const BackendRequest& request) = 0;
  virtual std::string id() const = 0;
  virtual int max_concurrency() const { return 1; }
};

/// Hex SHA-256 over every field that can change a model's answer.
std::string request_digest(const BackendRequest& request);

/// Memoizes responses by request digest, optionally persisted as JSON lines
/// so interrupted live runs resume without repeating billable calls.
class CachingBackend : public MllmBackend {
 public:
  explicit CachingBackend(std::shared_ptr<MllmBackend> inner, std::string cache_path = {});

  BackendResponse complete(const BackendRequest& request) override;
  std::string id() const override { return inner_->id(); }
  int max_concurrency() const override { return inner_->max_concurrency(); }

  std::size_t hits() const;
  std::size_t misses() const;

 private:
  std::shared_ptr<MllmBackend> inner_;
  std::string cache_path_;
  mutable std::mutex mu_;
  std::map<std::string, BackendResponse> cache_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace vpi
