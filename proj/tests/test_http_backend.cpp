#include <atomic>
#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "mock_chat_server.hpp"
#include "test_util.hpp"
#include "vpi/error.hpp"
#include "vpi/http_backend.hpp"

namespace vpi {
namespace {

using testing::kind_of;
using testing::MockChatServer;

BackendRequest sample_request() {
  BackendRequest r;
  r.bundle.system = "sys";
  r.bundle.user = "describe";
  r.bundle.images = {Png{'a', 'b', 'c'}, Png{0xff, 0x00}};
  r.decoding.temperature = 0.0;
  r.decoding.max_tokens = 64;
  return r;
}

HttpBackendConfig config_for(const MockChatServer& server) {
  HttpBackendConfig c;
  c.api_base = server.api_base();
  c.api_key = "test-key";
  c.model = "mock-model";
  c.timeout_seconds = 5;
  return c;
}

TEST(Base64, KnownVectors) {
  auto enc = [](std::string s) { return base64_encode(std::vector<std::uint8_t>(s.begin(), s.end())); };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg==");
  EXPECT_EQ(enc("fo"), "Zm8=");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
}

TEST(Payload, ShapeFollowsChatCompletions) {
  const auto j = chat_completions_payload(sample_request(), "m1");
  EXPECT_EQ(j["model"], "m1");
  EXPECT_EQ(j["temperature"], 0.0);
  EXPECT_EQ(j["max_tokens"], 64);
  ASSERT_EQ(j["messages"].size(), 2u);
  EXPECT_EQ(j["messages"][0]["role"], "system");
  EXPECT_EQ(j["messages"][0]["content"], "sys");
  const auto& content = j["messages"][1]["content"];
  ASSERT_EQ(content.size(), 3u);
  EXPECT_EQ(content[0]["type"], "text");
  EXPECT_EQ(content[0]["text"], "describe");
  EXPECT_EQ(content[1]["image_url"]["url"], "data:image/png;base64,YWJj");
  EXPECT_EQ(content[2]["image_url"]["url"], "data:image/png;base64,/wA=");
}

TEST(ParseResponse, TextAndUsage) {
  const auto r = parse_chat_completions_response(MockChatServer::completion("hello"));
  EXPECT_EQ(r.text, "hello");
  EXPECT_EQ(r.prompt_tokens, 10);
  EXPECT_EQ(r.completion_tokens, 5);
  const auto parts = parse_chat_completions_response(
      R"({"choices":[{"message":{"content":[{"type":"text","text":"a"},{"type":"text","text":"b"}]}}]})");
  EXPECT_EQ(parts.text, "ab");
  EXPECT_EQ(kind_of([] { parse_chat_completions_response("<html>"); }), ErrorKind::kBackendFailure);
  EXPECT_EQ(kind_of([] { parse_chat_completions_response(R"({"choices":[]})"); }),
            ErrorKind::kBackendFailure);
  EXPECT_EQ(kind_of([] {
              parse_chat_completions_response(R"({"choices":[{"message":{"content":""}}]})");
            }),
            ErrorKind::kBackendFailure);
}

TEST(HttpBackend, RoundTripAgainstMockServer) {
  MockChatServer server([](const nlohmann::json& body) {
    return std::pair{200, MockChatServer::completion("echo: " + MockChatServer::user_text(body))};
  });
  HttpBackend backend(config_for(server));
  const auto r = backend.complete(sample_request());
  EXPECT_EQ(r.text, "echo: describe");
  EXPECT_GE(r.latency_ms, 0.0);
  ASSERT_EQ(server.requests().size(), 1u);
  EXPECT_EQ(server.requests()[0], chat_completions_payload(sample_request(), "mock-model"));
  EXPECT_EQ(server.auth_headers()[0], "Bearer test-key");
  EXPECT_EQ(backend.id(), "http:mock-model");
}

TEST(HttpBackend, RetriesRateLimitAndServerErrors) {
  std::atomic<int> calls{0};
  MockChatServer server([&](const nlohmann::json&) {
    const int n = calls++;
    if (n == 0) return std::pair{429, std::string("{}")};
    if (n == 1) return std::pair{503, std::string("{}")};
    return std::pair{200, MockChatServer::completion("ok")};
  });
  HttpBackend backend(config_for(server));
  EXPECT_EQ(backend.complete(sample_request()).text, "ok");
  EXPECT_EQ(calls.load(), 3);
}

TEST(HttpBackend, GivesUpAfterTransportRetries) {
  std::atomic<int> calls{0};
  MockChatServer server([&](const nlohmann::json&) {
    ++calls;
    return std::pair{500, std::string("{}")};
  });
  auto cfg = config_for(server);
  cfg.transport_retries = 1;
  HttpBackend backend(cfg);
  EXPECT_EQ(kind_of([&] { backend.complete(sample_request()); }), ErrorKind::kBackendFailure);
  EXPECT_EQ(calls.load(), 2);
}

TEST(HttpBackend, ClientErrorIsNotRetried) {
  std::atomic<int> calls{0};
  MockChatServer server([&](const nlohmann::json&) {
    ++calls;
    return std::pair{401, std::string(R"({"error":"bad key"})")};
  });
  HttpBackend backend(config_for(server));
  try {
    backend.complete(sample_request());
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::kBackendFailure);
    EXPECT_NE(std::string(err.what()).find("401"), std::string::npos);
  }
  EXPECT_EQ(calls.load(), 1);
}

TEST(HttpBackend, MalformedBodyIsBackendFailure) {
  MockChatServer server([](const nlohmann::json&) { return std::pair{200, std::string("not json")}; });
  HttpBackend backend(config_for(server));
  EXPECT_EQ(kind_of([&] { backend.complete(sample_request()); }), ErrorKind::kBackendFailure);
}

TEST(HttpBackend, UnreachableHostIsBackendFailure) {
  HttpBackendConfig c;
  c.api_base = "http://127.0.0.1:1/v1";
  c.timeout_seconds = 1;
  c.transport_retries = 0;
  HttpBackend backend(c);
  EXPECT_EQ(kind_of([&] { backend.complete(sample_request()); }), ErrorKind::kBackendFailure);
  HttpBackendConfig bad;
  bad.api_base = "localhost:8080";
  EXPECT_EQ(kind_of([&] { HttpBackend{bad}; }), ErrorKind::kInvalidArgument);
}

TEST(CachingBackend, MemoizesAndPersists) {
  std::atomic<int> calls{0};
  MockChatServer server([&](const nlohmann::json& body) {
    ++calls;
    return std::pair{200, MockChatServer::completion("n" + MockChatServer::user_text(body))};
  });
  const auto path = std::filesystem::temp_directory_path() / "vpi_cache_test.jsonl";
  std::filesystem::remove(path);
  {
    CachingBackend cache(std::make_shared<HttpBackend>(config_for(server)), path.string());
    EXPECT_EQ(cache.complete(sample_request()).text, "ndescribe");
    EXPECT_EQ(cache.complete(sample_request()).text, "ndescribe");
    auto other = sample_request();
    other.decoding.temperature = 0.7;
    cache.complete(other);
    EXPECT_EQ(cache.hits(), 1u);
    EXPECT_EQ(cache.misses(), 2u);
  }
  CachingBackend reloaded(std::make_shared<HttpBackend>(config_for(server)), path.string());
  EXPECT_EQ(reloaded.complete(sample_request()).text, "ndescribe");
  EXPECT_EQ(reloaded.hits(), 1u);
  EXPECT_EQ(calls.load(), 2);
  std::filesystem::remove(path);
}

TEST(RequestDigest, SensitiveToEveryField) {
  const BackendRequest base = sample_request();
  const std::string d = request_digest(base);
  EXPECT_EQ(d.size(), 64u);
  EXPECT_EQ(d, request_digest(sample_request()));
  auto changed = base;
  changed.bundle.user += " ";
  EXPECT_NE(request_digest(changed), d);
  changed = base;
  changed.bundle.system = "other";
  EXPECT_NE(request_digest(changed), d);
  changed = base;
  changed.bundle.images[1].push_back(1);
  EXPECT_NE(request_digest(changed), d);
  changed = base;
  changed.decoding.max_tokens = 65;
  EXPECT_NE(request_digest(changed), d);
}

}  // namespace
}  // namespace vpi
