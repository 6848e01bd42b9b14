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

#ifndef RAGMARK_MOCK_CHAT_CLIENT_H_
#define RAGMARK_MOCK_CHAT_CLIENT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragmark/chat_client.h"

namespace ragmark {

enum class JudgeMode { kExact, kTokenOverlap };
enum class DiscMode { kRelationAware, kAlwaysYes, kAlwaysNo };
enum class GenerationMode { kIdeal, kMalformed, kOmitEntity };
enum class ParaphraseMode { kIdentity, kSynonym, kDropEntities };
enum class RemovalMode { kIdentity, kZeroOverlap, kDropLast };
enum class ExtractionMode { kGlossSplit, kEmpty };

/// Script of the offline backend. Every field has a JSON spelling; see
/// MockBehaviorFromJson.
struct MockBehavior {
  std::uint64_t seed = 0;
  double leak_probability = 1.0;
  /// Unordered entity pair -> canonical relation. Keys are stored with the
  /// lexicographically smaller entity first.
  std::map<std::pair<std::string, std::string>, std::string> relation_knowledge;
  JudgeMode judge_mode = JudgeMode::kExact;
  double overlap_threshold = 0.6;
  DiscMode disc_mode = DiscMode::kRelationAware;
  bool coherence = true;
  GenerationMode generation = GenerationMode::kIdeal;
  ParaphraseMode paraphrase = ParaphraseMode::kIdentity;
  std::map<std::string, std::string> synonyms;
  RemovalMode removal = RemovalMode::kIdentity;
  ExtractionMode extraction = ExtractionMode::kGlossSplit;
  /// Canonical relations the gloss-split extractor looks for.
  std::vector<std::string> extraction_relations;
  /// Fixed replies: the first rule whose `contains` occurs in the user
  /// message wins, before any role logic.
  std::vector<std::pair<std::string, std::string>> rules;

  void AddKnowledge(const std::string& a, const std::string& b, const std::string& relation);
  const std::string* Knowledge(const std::string& a, const std::string& b) const;
};

MockBehavior MockBehaviorFromJson(const nlohmann::json& j);
nlohmann::json MockBehaviorToJson(const MockBehavior& b);
MockBehavior LoadMockBehavior(const std::filesystem::path& path);

/// Offline stand-in for every LLM role. It recognizes the role from the
/// prompt template and answers as a pure function of (script, system, user);
/// temperature and token cap do not change the reply.
class MockChatClient final : public ChatClient {
 public:
  explicit MockChatClient(MockBehavior behavior) : b_(std::move(behavior)) {}

  std::string Complete(const std::string& system, const std::string& user,
                       double temperature, int max_tokens) override;

  const MockBehavior& behavior() const { return b_; }

 private:
  bool Leaks(const std::string& system, const std::string& user) const;
  std::string AnswerShadow(const std::string& system, const std::string& user) const;
  std::string AnswerOpen(const std::string& system, const std::string& user) const;
  std::string AnswerGenerate(const std::string& system, const std::string& user) const;
  std::string AnswerDiscriminate(const std::string& user) const;
  std::string AnswerJudge(const std::string& user) const;
  std::string AnswerExtract(const std::string& user) const;
  std::string AnswerParaphrase(const std::string& user) const;
  std::string AnswerRemoval(const std::string& user) const;

  MockBehavior b_;
};

}  // namespace ragmark

#endif  // RAGMARK_MOCK_CHAT_CLIENT_H_
