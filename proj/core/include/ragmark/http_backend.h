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

#ifndef RAGMARK_HTTP_BACKEND_H_
#define RAGMARK_HTTP_BACKEND_H_

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

#include "ragmark/chat_client.h"
#include "ragmark/retriever.h"

namespace ragmark {

inline constexpr std::string_view kApiKeyEnv = "RAGWM_API_KEY";

/// Retries on HTTP 429, 5xx and transport failures. Delay before retry n
/// (1-based) is base_delay * 2^(n-1): 1s, 2s, 4s by default.
struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{1000};
  /// Replaced in tests to avoid real sleeping.
  std::function<void(std::chrono::milliseconds)> sleep;

  static bool Retryable(int status) { return status == 0 || status == 429 || status >= 500; }
};

struct HttpEndpoint {
  /// scheme://host[:port][/path]. The chat path defaults to
  /// /v1/chat/completions, the embeddings path to /v1/embeddings.
  std::string url;
  std::string model = "gpt-3.5-turbo";
  /// Bearer token; empty means read RAGWM_API_KEY at call time.
  std::string api_key;
  std::chrono::seconds timeout{60};
  RetryPolicy retry;
};

struct ParsedUrl {
  std::string scheme_host_port;  // "https://api.example.com:443"
  std::string path;              // "" or "/prefix"
};
ParsedUrl ParseUrl(std::string_view url);

/// Resolves the request path for an OpenAI-compatible endpoint.
std::string ResolvePath(std::string_view base_path, std::string_view resource);

/// OpenAI-compatible chat-completions client. Prompt bytes are sent
/// unchanged; only choices[0].message.content is read back.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(HttpEndpoint endpoint);

  std::string Complete(const std::string& system, const std::string& user,
                       double temperature, int max_tokens) override;

  /// Request body exactly as posted; exposed for tests.
  std::string BuildBody(const std::string& system, const std::string& user,
                        double temperature, int max_tokens) const;

 private:
  HttpEndpoint ep_;
  ParsedUrl url_;
  std::string path_;
};

/// Remote embeddings endpoint ({model, input} -> data[0].embedding).
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(HttpEndpoint endpoint, std::size_t dim);

  EmbeddingVector Embed(std::string_view text) const override;
  std::size_t dim() const override { return dim_; }

 private:
  HttpEndpoint ep_;
  ParsedUrl url_;
  std::string path_;
  std::size_t dim_;
};

}  // namespace ragmark

#endif  // RAGMARK_HTTP_BACKEND_H_
