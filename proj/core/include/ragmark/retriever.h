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

#ifndef RAGMARK_RETRIEVER_H_
#define RAGMARK_RETRIEVER_H_

#include <cstddef>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ragmark/knowledge_base.h"

namespace ragmark {

/// Fixed-length vector of finite reals.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  EmbeddingVector Scaled(double c) const;

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

enum class SimilarityMetric { kCosine, kInnerProduct, kEuclidean };

std::string_view ToString(SimilarityMetric m);
SimilarityMetric ParseMetric(std::string_view name);

/// Larger is more similar for every metric; euclidean is negated distance.
double Similarity(SimilarityMetric metric, const EmbeddingVector& a,
                  const EmbeddingVector& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  /// Must be deterministic: identical text, identical vector.
  virtual EmbeddingVector Embed(std::string_view text) const = 0;
  virtual std::size_t dim() const = 0;
};

inline constexpr std::size_t kDefaultHashEmbedDim = 256;

/// Character trigrams of the lower-cased text padded with one space on each
/// side, each hashed (FNV-1a 64) into `dim` buckets, then L2-normalized.
EmbeddingVector HashEmbed(std::string_view text, std::size_t dim);

class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dim = kDefaultHashEmbedDim);
  EmbeddingVector Embed(std::string_view text) const override {
    return HashEmbed(text, dim_);
  }
  std::size_t dim() const override { return dim_; }

 private:
  std::size_t dim_;
};

/// Memoizes another embedder by exact text. Safe for concurrent use.
class CachingEmbedder final : public Embedder {
 public:
  explicit CachingEmbedder(std::shared_ptr<const Embedder> inner)
      : inner_(std::move(inner)) {}

  EmbeddingVector Embed(std::string_view text) const override;
  std::size_t dim() const override { return inner_->dim(); }
  std::size_t cached() const;

 private:
  std::shared_ptr<const Embedder> inner_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, EmbeddingVector> cache_;
};

struct ScoredId {
  std::string id;
  double score = 0;

  friend bool operator==(const ScoredId&, const ScoredId&) = default;
};

/// The min(k, |kb|) records most similar to `query`, by descending score with
/// ties broken by ascending id. Throws kEmptyResult on an empty base and
/// kValidation when k < 1.
std::vector<ScoredId> TopK(const KnowledgeBase& kb, const Embedder& embedder,
                           SimilarityMetric metric, std::string_view query,
                           std::size_t k);

/// Retrieval settings bundled for the pipeline stages.
struct Retriever {
  std::shared_ptr<const Embedder> embedder;
  SimilarityMetric metric = SimilarityMetric::kCosine;
  std::size_t k = 1;

  std::vector<ScoredId> Retrieve(const KnowledgeBase& kb, std::string_view query) const {
    return TopK(kb, *embedder, metric, query, k);
  }
  std::vector<ScoredId> Retrieve(const KnowledgeBase& kb, std::string_view query,
                                 std::size_t width) const {
    return TopK(kb, *embedder, metric, query, width);
  }
};

/// Hash embedder behind a cache; the default for desk-scale runs.
Retriever MakeDefaultRetriever(std::size_t k = 1,
                               SimilarityMetric metric = SimilarityMetric::kCosine);

}  // namespace ragmark

#endif  // RAGMARK_RETRIEVER_H_
