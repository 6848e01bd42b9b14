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

#ifndef RAGMARK_ATTACKS_H_
#define RAGMARK_ATTACKS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragmark/chat_client.h"
#include "ragmark/er_extract.h"
#include "ragmark/knowledge_base.h"
#include "ragmark/verification.h"

// Adversarial transformations used to measure watermark robustness and
// stealth. Base-level attacks return a modified copy and never touch their
// input; response-path attacks rewrite retrieved texts before answering.
namespace ragmark {

inline constexpr std::size_t kMaxExpandedK = 50;

/// Paraphrases each text (temperature 0.7, 200-token cap). Texts whose call
/// fails or returns nothing pass through unchanged and are counted in
/// `passthrough` when given.
std::vector<std::string> ParaphraseResponses(LlmGateway& gateway,
                                             const std::vector<std::string>& texts,
                                             std::size_t* passthrough = nullptr);

/// Asks the model to drop incoherent or unrelated sentences. An empty reply
/// keeps the original text.
std::string RemoveUnrelated(LlmGateway& gateway, std::string_view text);

/// Response-path transforms for LocalRag.
ContextTransform ParaphraseTransform(std::shared_ptr<LlmGateway> gateway);
ContextTransform RemoveUnrelatedTransform(std::shared_ptr<LlmGateway> gateway);

/// Adds `count` records, each textA + " " + textB for a seeded pair of
/// distinct original records. Inserted records carry no provenance.
KnowledgeBase InsertKnowledge(const KnowledgeBase& kb, std::size_t count, std::uint64_t seed);

/// Widens suspect retrieval to k in [1, 50].
LocalRag::Options ExpandK(LocalRag::Options options, std::size_t k);

/// Drops records whose content hash equals an earlier one; order kept.
std::vector<TextRecord> DuplicateFilter(const std::vector<TextRecord>& records);

using PerplexityScorer = std::function<double(std::string_view)>;

/// Character-unigram cross-entropy model with add-one smoothing over bytes;
/// the score is exp(mean negative log-likelihood per byte).
class UnigramPerplexity {
 public:
  explicit UnigramPerplexity(const std::vector<std::string>& training_texts);
  double operator()(std::string_view text) const;

 private:
  std::vector<double> log_prob_;  // 256 entries
};

/// Two-cluster 1-D k-means seeded at the 25th and 75th percentile values.
/// Returns a label (0 = lower centroid, 1 = upper) per value.
std::vector<int> KMeans2(const std::vector<double>& values, int max_iterations = 100);

struct DetectionResult {
  std::vector<std::string> flagged_ids;
  double f1 = 0;
  std::string note;
};

/// Scores every record, splits the scores into two clusters and flags the
/// smaller one. F1 is measured against is_watermark().
DetectionResult PerplexityDetect(const PerplexityScorer& scorer,
                                 const std::vector<TextRecord>& clean_sample,
                                 const std::vector<TextRecord>& wm_sample);

struct DistillResult {
  KnowledgeBase kb;
  std::set<std::string> kept_entities;
  std::size_t removed = 0;
};

/// Keeps the ceil(rate * |entities|) highest-degree entities (degree =
/// incident triples; ties by name) and every record that mentions one of
/// them. Records mentioning no known entity are kept.
DistillResult KgDistill(const KnowledgeBase& kb, const std::vector<ExtractedTriple>& triples,
                        double rate);

struct AttackOutcome {
  std::string attack;
  nlohmann::json params = nlohmann::json::object();
  std::size_t removed = 0;
  std::size_t inserted = 0;
  std::vector<std::string> notes;
};

nlohmann::json AttackOutcomeToJson(const AttackOutcome& outcome);

}  // namespace ragmark

#endif  // RAGMARK_ATTACKS_H_
