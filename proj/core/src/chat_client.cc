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

#include "ragmark/chat_client.h"

#include <chrono>
#include <ctime>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ragmark/error.h"
#include "ragmark/text_util.h"

namespace ragmark {
namespace {

using json = nlohmann::json;

constexpr std::pair<Role, std::string_view> kRoleNames[] = {
    {Role::kAnswer, "answer"},
    {Role::kExtract, "extract"},
    {Role::kGenerate, "wm_gen"},
    {Role::kShadow, "shadow"},
    {Role::kDiscriminate, "wm_disc"},
    {Role::kCoherence, "coherence"},
    {Role::kJudge, "judge"},
    {Role::kParaphrase, "paraphrase"},
    {Role::kRemoveUnrelated, "remove_unrelated"},
};

Role ParseRole(std::string_view name) {
  for (const auto& [role, n] : kRoleNames) {
    if (n == name) return role;
  }
  throw Error(ErrorCode::kParse, "unknown role " + std::string(name));
}

std::string UtcNow() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Releases a semaphore slot on scope exit.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

}  // namespace

std::string_view ToString(Role role) {
  for (const auto& [r, n] : kRoleNames) {
    if (r == role) return n;
  }
  return "answer";
}

void CallLog::Append(ChatExchange exchange) {
  std::lock_guard lock(mu_);
  entries_.push_back(std::move(exchange));
}

std::vector<ChatExchange> CallLog::Snapshot() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t CallLog::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

void CallLog::WriteJsonl(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& e : Snapshot()) {
    out << json{{"timestamp", e.timestamp},
                {"role", ToString(e.role)},
                {"system", e.system},
                {"user", e.user},
                {"temperature", e.temperature},
                {"max_tokens", e.max_tokens},
                {"response", e.response}}
               .dump()
        << '\n';
  }
}

std::vector<ChatExchange> CallLog::ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::vector<ChatExchange> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = json::parse(line);
      ChatExchange e;
      e.timestamp = j.at("timestamp").get<std::string>();
      e.role = ParseRole(j.at("role").get<std::string>());
      e.system = j.at("system").get<std::string>();
      e.user = j.at("user").get<std::string>();
      e.temperature = j.at("temperature").get<double>();
      e.max_tokens = j.at("max_tokens").get<int>();
      e.response = j.at("response").get<std::string>();
      out.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return out;
}

LlmGateway::LlmGateway(std::shared_ptr<ChatClient> client, std::shared_ptr<CallLog> log,
                       int max_in_flight)
    : client_(std::move(client)),
      log_(std::move(log)),
      max_in_flight_(max_in_flight),
      slots_(max_in_flight) {
  if (!client_) throw Error(ErrorCode::kValidation, "gateway needs a chat client");
  if (max_in_flight < 1) throw Error(ErrorCode::kValidation, "max_in_flight must be >= 1");
}

std::string LlmGateway::Call(Role role, const std::string& system, const std::string& user,
                             double temperature, int max_tokens) {
  if (temperature < 0 || temperature > 2) {
    throw Error(ErrorCode::kValidation, "temperature must lie in [0, 2]");
  }
  if (max_tokens < 1) throw Error(ErrorCode::kValidation, "max_tokens must be positive");
  std::string response;
  {
    SlotGuard guard(slots_);
    response = client_->Complete(system, user, temperature, max_tokens);
  }
  if (log_) {
    log_->Append({UtcNow(), role, system, user, temperature, max_tokens, response});
  }
  return response;
}

YesNo ParseYesNo(std::string_view reply) {
  std::string s = text::Trim(reply);
  while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(s.begin());
  while (!s.empty() && (s.back() == '"' || s.back() == '\'' || s.back() == '.' ||
                        s.back() == '!')) {
    s.pop_back();
  }
  s = text::ToLower(text::Trim(s));
  if (s == "yes") return YesNo::kYes;
  if (s == "no") return YesNo::kNo;
  return YesNo::kIndeterminate;
}

}  // namespace ragmark
