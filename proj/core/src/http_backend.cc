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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "ragmark/http_backend.h"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ragmark/error.h"

namespace ragmark {
namespace {

using json = nlohmann::json;

std::string ApiKey(const HttpEndpoint& ep) {
  if (!ep.api_key.empty()) return ep.api_key;
  const char* env = std::getenv(std::string(kApiKeyEnv).c_str());
  return env == nullptr ? std::string() : std::string(env);
}

// POSTs `body`, retrying per policy; returns the parsed JSON reply.
json PostWithRetry(const HttpEndpoint& ep, const ParsedUrl& url, const std::string& path,
                   const std::string& body) {
  const std::string key = ApiKey(ep);
  httplib::Headers headers;
  if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);

  int last_status = 0;
  std::string last_error;
  for (int attempt = 0; attempt <= ep.retry.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = ep.retry.base_delay * (1 << (attempt - 1));
      if (ep.retry.sleep) {
        ep.retry.sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
    httplib::Client cli(url.scheme_host_port);
    cli.set_connection_timeout(ep.timeout);
    cli.set_read_timeout(ep.timeout);
    cli.set_write_timeout(ep.timeout);
    auto res = cli.Post(path, headers, body, "application/json");
    if (!res) {
      last_status = 0;
      last_error = httplib::to_string(res.error());
      continue;
    }
    last_status = res->status;
    if (res->status >= 200 && res->status < 300) {
      try {
        return json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kProtocol, std::string("endpoint returned non-JSON: ") + e.what());
      }
    }
    last_error = res->body.substr(0, 200);
    if (!RetryPolicy::Retryable(res->status)) break;
  }
  throw GatewayError(last_status, "POST " + url.scheme_host_port + path + " failed (status " +
                                      std::to_string(last_status) + "): " + last_error);
}

}  // namespace

ParsedUrl ParseUrl(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::kValidation, "endpoint URL needs a scheme: " + std::string(url));
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw Error(ErrorCode::kValidation, "unsupported URL scheme: " + std::string(scheme));
  }
  const auto host_begin = scheme_end + 3;
  const auto path_begin = url.find('/', host_begin);
  ParsedUrl out;
  out.scheme_host_port = std::string(url.substr(0, path_begin));
  if (path_begin != std::string_view::npos) out.path = std::string(url.substr(path_begin));
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  if (out.scheme_host_port.size() <= host_begin) {
    throw Error(ErrorCode::kValidation, "endpoint URL has no host: " + std::string(url));
  }
  return out;
}

std::string ResolvePath(std::string_view base_path, std::string_view resource) {
  std::string path(base_path);
  const std::string tail = "/" + std::string(resource);
  if (path.size() >= tail.size() && path.compare(path.size() - tail.size(), tail.size(), tail) == 0) {
    return path;
  }
  if (path.size() >= 3 && path.compare(path.size() - 3, 3, "/v1") == 0) return path + tail;
  return path + "/v1" + tail;
}

HttpChatClient::HttpChatClient(HttpEndpoint endpoint)
    : ep_(std::move(endpoint)),
      url_(ParseUrl(ep_.url)),
      path_(ResolvePath(url_.path, "chat/completions")) {}

std::string HttpChatClient::BuildBody(const std::string& system, const std::string& user,
                                      double temperature, int max_tokens) const {
  json messages = json::array();
  if (!system.empty()) messages.push_back({{"role", "system"}, {"content", system}});
  messages.push_back({{"role", "user"}, {"content", user}});
  return json{{"model", ep_.model},
              {"messages", std::move(messages)},
              {"temperature", temperature},
              {"max_tokens", max_tokens}}
      .dump();
}

std::string HttpChatClient::Complete(const std::string& system, const std::string& user,
                                     double temperature, int max_tokens) {
  auto reply = PostWithRetry(ep_, url_, path_, BuildBody(system, user, temperature, max_tokens));
  try {
    const auto& content = reply.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("unexpected chat reply shape: ") + e.what());
  }
}

HttpEmbedder::HttpEmbedder(HttpEndpoint endpoint, std::size_t dim)
    : ep_(std::move(endpoint)),
      url_(ParseUrl(ep_.url)),
      path_(ResolvePath(url_.path, "embeddings")),
      dim_(dim) {}

EmbeddingVector HttpEmbedder::Embed(std::string_view text) const {
  const std::string body = json{{"model", ep_.model}, {"input", std::string(text)}}.dump();
  auto reply = PostWithRetry(ep_, url_, path_, body);
  std::vector<double> values;
  try {
    values = reply.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol, std::string("unexpected embeddings reply: ") + e.what());
  }
  if (values.size() != dim_) {
    throw Error(ErrorCode::kProtocol, "embedding has dim " + std::to_string(values.size()) +
                                          ", expected " + std::to_string(dim_));
  }
  return EmbeddingVector(std::move(values));
}

}  // namespace ragmark
