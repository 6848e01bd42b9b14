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

#ifndef RAGMARK_VERIFICATION_H_
#define RAGMARK_VERIFICATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragmark/chat_client.h"
#include "ragmark/knowledge_base.h"
#include "ragmark/retriever.h"
#include "ragmark/watermark.h"

namespace ragmark {

inline constexpr std::size_t kDefaultQueryCount = 30;
inline constexpr double kDefaultAlpha = 0.05;
inline constexpr double kFallbackP0 = 0.01;
/// Retrieval window scanned before duplicate filtering.
inline constexpr std::size_t kDedupWindow = 50;

/// P(X >= c) for X ~ Binomial(n, p0), summed term by term in log space.
/// Returns exactly 1 for c == 0. Throws kValidation unless 0 < p0 < 1 and
/// c <= n.
double BinomialUpperPValue(std::size_t n, std::size_t c, double p0);

/// 1/|R| when the suspect's relation vocabulary size is known, else 1/100.
double DefaultP0(std::optional<std::size_t> relation_vocabulary = std::nullopt);

/// A record the suspect retrieved; provenance is only known in-process.
struct RetrievedRef {
  std::string id;
  std::vector<std::string> source_tuples;
};

struct SuspectAnswer {
  std::string answer;
  /// Present only for in-process suspects.
  std::optional<std::vector<RetrievedRef>> retrieved;
};

/// The deployment under test. Implementations must be callable from several
/// threads at once.
class SuspectRag {
 public:
  virtual ~SuspectRag() = default;
  virtual SuspectAnswer Ask(const std::string& question) = 0;
};

/// Rewrites retrieved texts before they reach the answering model.
using ContextTransform = std::function<std::vector<std::string>(std::vector<std::string>)>;

/// In-process RAG: retrieval over a base, then a context-only answer.
class LocalRag final : public SuspectRag {
 public:
  struct Options {
    std::size_t k = 1;
    /// Drop records whose content hash repeats an earlier one, scanning the
    /// top kDedupWindow before keeping k.
    bool duplicate_filter = false;
    ContextTransform transform;
  };

  LocalRag(std::shared_ptr<const KnowledgeBase> kb, Retriever retriever,
           std::shared_ptr<LlmGateway> llm, Options options);

  SuspectAnswer Ask(const std::string& question) override;

  /// Ids the answer would be grounded on, without calling the model.
  std::vector<std::string> RetrieveIds(const std::string& question) const;
  /// Texts handed to the model for `question` (after any transform).
  std::vector<std::string> Contexts(const std::string& question) const;

  const Options& options() const { return options_; }

 private:
  std::vector<const TextRecord*> RetrieveRecords(const std::string& question) const;

  std::shared_ptr<const KnowledgeBase> kb_;
  Retriever retriever_;
  std::shared_ptr<LlmGateway> llm_;
  Options options_;
};

/// Black-box suspect reachable only through its chat interface; it sees the
/// bare question and reports no retrieval.
class ChatSuspect final : public SuspectRag {
 public:
  explicit ChatSuspect(std::shared_ptr<LlmGateway> llm) : llm_(std::move(llm)) {}
  SuspectAnswer Ask(const std::string& question) override;

 private:
  std::shared_ptr<LlmGateway> llm_;
};

struct VerifyOptions {
  std::size_t n = kDefaultQueryCount;
  double p0 = kFallbackP0;
  double alpha = kDefaultAlpha;
  QueryTemplate query_template = QueryTemplate::kRelationship;
  std::uint64_t seed = 0;
  /// Concurrent suspect queries; 0 means the discriminator's in-flight limit.
  std::size_t workers = 0;
};

struct QueryOutcome {
  std::string tuple_id;
  std::string question;
  std::string answer;
  bool hit = false;
  std::optional<bool> retrieved_watermark;
  /// Set when the suspect could not be reached; the query is excluded.
  std::optional<std::string> error;
};

struct VerificationReport {
  std::size_t n_requested = 0;
  std::size_t n = 0;  // after exclusions
  std::size_t excluded = 0;
  std::size_t c_wm = 0;
  double p0 = kFallbackP0;
  double alpha = kDefaultAlpha;
  double p_value = 1.0;
  bool verdict = false;
  std::optional<double> wirr;
  std::vector<QueryOutcome> per_query;
};

/// Samples n tuples by seed, asks the suspect, discriminates each answer and
/// runs the one-tailed binomial test. Throws kValidation when the graph has
/// fewer than n tuples or alpha is outside (0, 1).
VerificationReport RunVerification(const WatermarkGraph& graph, SuspectRag& suspect,
                                   LlmGateway& disc, const VerifyOptions& options);

nlohmann::json VerificationToJson(const VerificationReport& report);

struct CdpaResult {
  double value = 0;
  std::size_t judged = 0;
  std::size_t indeterminate = 0;
};

/// Fraction of answer pairs judged to mean the same. Indeterminate judgments
/// leave the denominator.
CdpaResult Cdpa(const std::vector<std::string>& clean_answers,
                const std::vector<std::string>& wm_answers, LlmGateway& judge);

/// Fraction of questions whose retrieved id sets are equal as sets.
double Cira(const std::vector<std::vector<std::string>>& clean_retrievals,
            const std::vector<std::vector<std::string>>& wm_retrievals);

}  // namespace ragmark

#endif  // RAGMARK_VERIFICATION_H_
