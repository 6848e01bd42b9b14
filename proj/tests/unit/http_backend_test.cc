// Copyright 2026 The ragmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Must match the core library's build of cpp-httplib.
#define CPPHTTPLIB_OPENSSL_SUPPORT

#include "ragmark/http_backend.h"

#include <gtest/gtest.h>
#include <httplib.h>

#include <cstdlib>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "fixtures.h"
#include "ragmark/prompts.h"

namespace ragmark {
namespace {

using nlohmann::json;
using testing::CodeOf;

TEST(ParseUrl, SplitsHostAndPath) {
  auto u = ParseUrl("https://api.example.com/v1/");
  EXPECT_EQ(u.scheme_host_port, "https://api.example.com");
  EXPECT_EQ(u.path, "/v1");
  u = ParseUrl("http://127.0.0.1:8080");
  EXPECT_EQ(u.scheme_host_port, "http://127.0.0.1:8080");
  EXPECT_EQ(u.path, "");
  EXPECT_EQ(CodeOf([] { ParseUrl("ftp://x"); }), ErrorCode::kValidation);
}

TEST(ResolvePath, OpenAiCompatibleLayouts) {
  EXPECT_EQ(ResolvePath("", "chat/completions"), "/v1/chat/completions");
  EXPECT_EQ(ResolvePath("/v1", "chat/completions"), "/v1/chat/completions");
  EXPECT_EQ(ResolvePath("/proxy", "embeddings"), "/proxy/v1/embeddings");
  EXPECT_EQ(ResolvePath("/custom/chat/completions", "chat/completions"),
            "/custom/chat/completions");
}

TEST(HttpChatClient, BodyCarriesPromptBytesUnchanged) {
  HttpEndpoint ep;
  ep.url = "http://localhost:1";
  ep.model = "test-model";
  HttpChatClient client(ep);
  const std::string user = prompts::Judge("caf\xc3\xa9  \"quoted\"\n", "tab\there");
  const auto body = json::parse(client.BuildBody("sys", user, 0.1, 512));
  EXPECT_EQ(body.at("model"), "test-model");
  EXPECT_DOUBLE_EQ(body.at("temperature").get<double>(), 0.1);
  EXPECT_EQ(body.at("max_tokens"), 512);
  ASSERT_EQ(body.at("messages").size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][0]["content"], "sys");
  EXPECT_EQ(body["messages"][1]["role"], "user");
  EXPECT_EQ(body["messages"][1]["content"].get<std::string>(), user);

  const auto no_system = json::parse(client.BuildBody("", "u", 0.7, 200));
  ASSERT_EQ(no_system.at("messages").size(), 1u);
  EXPECT_EQ(no_system["messages"][0]["role"], "user");
}

// Local OpenAI-compatible server that fails the first `failures` requests
// with `fail_status`.
class FakeServer {
 public:
  FakeServer(int failures, int fail_status) : failures_(failures), fail_status_(fail_status) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
      std::lock_guard lock(mu_);
      ++requests_;
      auth_ = req.get_header_value("Authorization");
      last_body_ = req.body;
      if (requests_ <= failures_) {
        res.status = fail_status_;
        res.set_content("{}", "application/json");
        return;
      }
      const auto body = json::parse(req.body);
      const auto& user = body["messages"].back()["content"];
      res.set_content(json{{"choices", {{{"message", {{"content", "echo:" + user.get<std::string>()}}}}}}}
                          .dump(),
                      "application/json");
    });
    server_.Post("/v1/embeddings", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(json{{"data", {{{"embedding", {0.6, 0.8, 0.0}}}}}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int requests() {
    std::lock_guard lock(mu_);
    return requests_;
  }
  std::string auth() {
    std::lock_guard lock(mu_);
    return auth_;
  }
  std::string last_body() {
    std::lock_guard lock(mu_);
    return last_body_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  int requests_ = 0;
  int failures_;
  int fail_status_;
  std::string auth_;
  std::string last_body_;
};

HttpEndpoint EndpointFor(const FakeServer& s, std::vector<std::chrono::milliseconds>* sleeps) {
  HttpEndpoint ep;
  ep.url = s.url();
  ep.api_key = "test-token";
  ep.timeout = std::chrono::seconds(5);
  ep.retry.sleep = [sleeps](std::chrono::milliseconds d) { sleeps->push_back(d); };
  return ep;
}

TEST(HttpChatClient, RoundTripWithBearerToken) {
  FakeServer server(0, 500);
  std::vector<std::chrono::milliseconds> sleeps;
  HttpChatClient client(EndpointFor(server, &sleeps));
  EXPECT_EQ(client.Complete("", "hello", 0.1, 16), "echo:hello");
  EXPECT_EQ(server.auth(), "Bearer test-token");
  EXPECT_EQ(server.last_body(), client.BuildBody("", "hello", 0.1, 16));
  EXPECT_TRUE(sleeps.empty());
}

TEST(HttpChatClient, ApiKeyFromEnvironment) {
  FakeServer server(0, 500);
  std::vector<std::chrono::milliseconds> sleeps;
  auto ep = EndpointFor(server, &sleeps);
  ep.api_key.clear();
  ::setenv("RAGWM_API_KEY", "from-env", 1);
  HttpChatClient client(ep);
  client.Complete("", "x", 0.1, 16);
  ::unsetenv("RAGWM_API_KEY");
  EXPECT_EQ(server.auth(), "Bearer from-env");
}

TEST(HttpChatClient, RetriesServerErrorsWithExponentialBackoff) {
  FakeServer server(2, 503);
  std::vector<std::chrono::milliseconds> sleeps;
  HttpChatClient client(EndpointFor(server, &sleeps));
  EXPECT_EQ(client.Complete("", "hi", 0.1, 16), "echo:hi");
  EXPECT_EQ(server.requests(), 3);
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(1000),
                                                            std::chrono::milliseconds(2000)}));
}

TEST(HttpChatClient, GivesUpAfterRetriesWithStatus) {
  FakeServer server(100, 429);
  std::vector<std::chrono::milliseconds> sleeps;
  HttpChatClient client(EndpointFor(server, &sleeps));
  try {
    client.Complete("", "hi", 0.1, 16);
    FAIL() << "expected a gateway error";
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.status(), 429);
  }
  EXPECT_EQ(server.requests(), 4);
  EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(1000),
                                                            std::chrono::milliseconds(2000),
                                                            std::chrono::milliseconds(4000)}));
}

TEST(HttpChatClient, ClientErrorsAreNotRetried) {
  FakeServer server(100, 401);
  std::vector<std::chrono::milliseconds> sleeps;
  HttpChatClient client(EndpointFor(server, &sleeps));
  try {
    client.Complete("", "hi", 0.1, 16);
    FAIL() << "expected a gateway error";
  } catch (const GatewayError& e) {
    EXPECT_EQ(e.status(), 401);
  }
  EXPECT_EQ(server.requests(), 1);
  EXPECT_TRUE(sleeps.empty());
}

TEST(HttpChatClient, TransportFailureIsGatewayError) {
  HttpEndpoint ep;
  ep.url = "http://127.0.0.1:1";
  ep.api_key = "k";
  ep.timeout = std::chrono::seconds(1);
  ep.retry.max_retries = 1;
  ep.retry.sleep = [](std::chrono::milliseconds) {};
  HttpChatClient client(ep);
  EXPECT_EQ(CodeOf([&] { client.Complete("", "x", 0.1, 8); }), ErrorCode::kGateway);
}

TEST(HttpEmbedder, ReadsEmbeddingAndChecksDim) {
  FakeServer server(0, 500);
  std::vector<std::chrono::milliseconds> sleeps;
  HttpEmbedder ok(EndpointFor(server, &sleeps), 3);
  const auto v = ok.Embed("text");
  ASSERT_EQ(v.dim(), 3u);
  EXPECT_DOUBLE_EQ(v[1], 0.8);
  HttpEmbedder wrong(EndpointFor(server, &sleeps), 4);
  EXPECT_TRUE(CodeOf([&] { wrong.Embed("text"); }).has_value());
}

}  // namespace
}  // namespace ragmark
