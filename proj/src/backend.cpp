#include "vpi/backend.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "vpi/error.hpp"

namespace vpi {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
      EVP_MD_CTX_free(ctx_);
      throw Error(ErrorKind::kIoError, "sha256 init failed");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }

  // Length prefix keeps ("ab", "c") and ("a", "bc") distinct.
  void field(const void* data, std::size_t n) {
    const auto len = static_cast<std::uint64_t>(n);
    update(&len, sizeof(len));
    update(data, n);
  }
  void field(const std::string& s) { field(s.data(), s.size()); }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md.data(), &len);
    std::string out;
    out.reserve(len * 2);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
      std::snprintf(buf, sizeof(buf), "%02x", md[i]);
      out += buf;
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string request_digest(const BackendRequest& request) {
  Sha256 h;
  const auto& b = request.bundle;
  h.field(b.system);
  h.field(b.user);
  const auto n_images = static_cast<std::uint64_t>(b.images.size());
  h.update(&n_images, sizeof(n_images));
  for (const auto& img : b.images) h.field(img.data(), img.size());
  const auto n_shots = static_cast<std::uint64_t>(b.few_shot.size());
  h.update(&n_shots, sizeof(n_shots));
  for (const auto& ex : b.few_shot) {
    h.field(ex.prompt);
    h.field(ex.response);
  }
  char params[64];
  std::snprintf(params, sizeof(params), "t=%.17g;m=%d", request.decoding.temperature,
                request.decoding.max_tokens);
  h.field(std::string(params));
  return h.hex();
}

CachingBackend::CachingBackend(std::shared_ptr<MllmBackend> inner, std::string cache_path)
    : inner_(std::move(inner)), cache_path_(std::move(cache_path)) {
  if (cache_path_.empty()) return;
  std::ifstream in(cache_path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      BackendResponse r;
      r.text = j.at("text").get<std::string>();
      r.latency_ms = j.value("latency_ms", 0.0);
      r.prompt_tokens = j.value("prompt_tokens", 0);
      r.completion_tokens = j.value("completion_tokens", 0);
      cache_[j.at("digest").get<std::string>()] = std::move(r);
    } catch (const nlohmann::json::exception&) {
      // A torn final line from an interrupted run; everything before it is usable.
    }
  }
}

BackendResponse CachingBackend::complete(const BackendRequest& request) {
  const std::string digest = request_digest(request);
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(digest); it != cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  BackendResponse response = inner_->complete(request);
  std::lock_guard lock(mu_);
  ++misses_;
  cache_[digest] = response;
  if (!cache_path_.empty()) {
    std::ofstream out(cache_path_, std::ios::app);
    out << nlohmann::json{{"digest", digest},
                          {"text", response.text},
                          {"latency_ms", response.latency_ms},
                          {"prompt_tokens", response.prompt_tokens},
                          {"completion_tokens", response.completion_tokens}}
               .dump()
        << '\n';
  }
  return response;
}

std::size_t CachingBackend::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

std::size_t CachingBackend::misses() const {
  std::lock_guard lock(mu_);
  return misses_;
}

}  // namespace vpi
