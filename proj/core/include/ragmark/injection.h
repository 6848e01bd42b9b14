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

#ifndef RAGMARK_INJECTION_H_
#define RAGMARK_INJECTION_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragmark/chat_client.h"
#include "ragmark/knowledge_base.h"
#include "ragmark/retriever.h"
#include "ragmark/watermark.h"

// Watermark-text generation and placement: a generator proposes a sentence,
// a local shadow RAG answers the watermark question over the tentatively
// modified base, and a discriminator decides whether the relation surfaced.
// Failed attempts are rolled back and their outcome is fed to the next one.
namespace ragmark {

inline constexpr std::size_t kDefaultTextsPerTuple = 5;
inline constexpr std::size_t kMaxTextsPerTuple = 10;
inline constexpr std::size_t kDefaultMaxEpochs = 10;

enum class InjectionMode {
  kConcat,  // append to the most relevant existing record
  kDirect,  // insert as a record of its own
};

std::string_view ToString(InjectionMode mode);
InjectionMode ParseInjectionMode(std::string_view name);

struct InjectionConfig {
  std::size_t n_wm = kDefaultTextsPerTuple;
  std::size_t max_epochs = kDefaultMaxEpochs;
  InjectionMode mode = InjectionMode::kConcat;
  /// Retrieval width of the shadow RAG.
  std::size_t k = 1;
  std::shared_ptr<LlmGateway> shadow;
  std::shared_ptr<LlmGateway> gen;
  std::shared_ptr<LlmGateway> disc;

  /// Throws kValidation on out-of-range counts or a missing gateway.
  void Validate() const;
};

/// What the previous failed attempt produced; empty on the first attempt.
struct GenerationFeedback {
  std::optional<std::string> previous_text;
  std::optional<std::string> shadow_answer;
  std::optional<std::string> disc_feedback;
  std::optional<std::string> coherence_feedback;
};

/// Reads the text out of a [{"watermark_text": ...}] reply (prose or a code
/// fence around the list is tolerated). Throws kGeneration otherwise.
std::string ParseGeneratedText(std::string_view reply);

/// One generator call. `earlier` lists accepted variants of the same tuple;
/// they go into the system message so the generator writes a new sentence.
std::string GenerateWt(LlmGateway& gen, const WatermarkTuple& tuple, std::string_view host_text,
                       const GenerationFeedback& feedback,
                       const std::vector<std::string>& earlier = {});

struct ShadowResult {
  std::string answer;
  std::vector<std::string> retrieved_ids;
};

/// Top-k retrieval over `kb`, then a context-only answer.
ShadowResult ShadowAnswer(LlmGateway& shadow, const Retriever& retriever,
                          const KnowledgeBase& kb, std::string_view question, std::size_t k);

enum class VariantStatus { kSuccess, kFailed };

struct WatermarkText {
  std::string tuple_id;
  std::size_t variant = 0;  // 1-based
  VariantStatus status = VariantStatus::kFailed;
  InjectionMode mode = InjectionMode::kConcat;
  std::string text;       // empty on failure
  std::string record_id;  // host (concat) or new record (direct); empty on failure
  std::size_t epochs_used = 0;

  friend bool operator==(const WatermarkText&, const WatermarkText&) = default;
};

/// All variants of one tuple. `kb` is modified in place; failed attempts
/// leave it byte-identical to its state before the attempt.
std::vector<WatermarkText> InteractionLoop(const InjectionConfig& config,
                                           const Retriever& retriever, KnowledgeBase& kb,
                                           const WatermarkTuple& tuple);

struct InjectionReport {
  InjectionMode mode = InjectionMode::kConcat;
  std::vector<WatermarkText> texts;

  std::size_t successes() const;
  /// Tuples none of whose variants were placed.
  std::vector<std::string> failed_tuples() const;
};

/// Copies `kb` and places watermark texts for every tuple of `graph`.
/// Tuples are processed sequentially in graph order.
std::pair<KnowledgeBase, InjectionReport> InjectAll(const InjectionConfig& config,
                                                    const Retriever& retriever,
                                                    const KnowledgeBase& kb,
                                                    const WatermarkGraph& graph);

/// [{tuple_id, variant, placement, epochs_used, status, text}], with
/// placement {mode, record_id} or null.
nlohmann::json ReportToJson(const InjectionReport& report);
InjectionReport ReportFromJson(const nlohmann::json& j);

}  // namespace ragmark

#endif  // RAGMARK_INJECTION_H_
