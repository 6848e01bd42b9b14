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

#ifndef RAGMARK_CHAT_CLIENT_H_
#define RAGMARK_CHAT_CLIENT_H_

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

namespace ragmark {

inline constexpr double kDefaultTemperature = 0.1;
inline constexpr double kParaphraseTemperature = 0.7;
inline constexpr int kDefaultMaxTokens = 512;
inline constexpr int kParaphraseMaxTokens = 200;
inline constexpr int kDefaultMaxInFlight = 4;

/// Every LLM boundary call goes through this. Implementations must be safe
/// to call from several threads.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string Complete(const std::string& system, const std::string& user,
                               double temperature, int max_tokens) = 0;
};

/// Adapts a callable; handy for scripted schedules in tests.
class CallbackChatClient final : public ChatClient {
 public:
  using Fn = std::function<std::string(const std::string& system, const std::string& user,
                                       double temperature, int max_tokens)>;
  explicit CallbackChatClient(Fn fn) : fn_(std::move(fn)) {}
  std::string Complete(const std::string& system, const std::string& user,
                       double temperature, int max_tokens) override {
    return fn_(system, user, temperature, max_tokens);
  }

 private:
  Fn fn_;
};

/// LLM role that issued a call; recorded in the call log.
enum class Role {
  kAnswer,
  kExtract,
  kGenerate,
  kShadow,
  kDiscriminate,
  kCoherence,
  kJudge,
  kParaphrase,
  kRemoveUnrelated,
};

std::string_view ToString(Role role);

struct ChatExchange {
  std::string timestamp;  // RFC 3339 UTC
  Role role = Role::kAnswer;
  std::string system;
  std::string user;
  double temperature = kDefaultTemperature;
  int max_tokens = kDefaultMaxTokens;
  std::string response;
};

/// Append-only, thread-safe record of every exchange.
class CallLog {
 public:
  void Append(ChatExchange exchange);
  std::vector<ChatExchange> Snapshot() const;
  std::size_t size() const;

  /// JSONL with {timestamp, role, system, user, temperature, max_tokens, response}.
  void WriteJsonl(const std::filesystem::path& path) const;
  static std::vector<ChatExchange> ReadJsonl(const std::filesystem::path& path);

 private:
  mutable std::mutex mu_;
  std::vector<ChatExchange> entries_;
};

/// Wraps a backend with an in-flight limit and optional call logging.
class LlmGateway {
 public:
  explicit LlmGateway(std::shared_ptr<ChatClient> client,
                      std::shared_ptr<CallLog> log = nullptr,
                      int max_in_flight = kDefaultMaxInFlight);

  std::string Call(Role role, const std::string& system, const std::string& user,
                   double temperature = kDefaultTemperature,
                   int max_tokens = kDefaultMaxTokens);

  int max_in_flight() const { return max_in_flight_; }
  const std::shared_ptr<CallLog>& log() const { return log_; }

  /// Count of replies that were neither yes nor no where one was required.
  std::size_t protocol_warnings() const { return protocol_warnings_.load(); }
  void NoteProtocolWarning() { protocol_warnings_.fetch_add(1); }

 private:
  std::shared_ptr<ChatClient> client_;
  std::shared_ptr<CallLog> log_;
  int max_in_flight_;
  std::counting_semaphore<> slots_;
  std::atomic<std::size_t> protocol_warnings_{0};
};

enum class YesNo { kYes, kNo, kIndeterminate };

/// "yes"/"no" after trimming whitespace, quotes and a trailing period,
/// case-insensitively; anything else is indeterminate.
YesNo ParseYesNo(std::string_view reply);

}  // namespace ragmark

#endif  // RAGMARK_CHAT_CLIENT_H_
