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

#include "ragmark/retriever.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <mutex>

#include "ragmark/error.h"

namespace ragmark {

EmbeddingVector::EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kValidation, "embedding entry is not finite");
  }
}

EmbeddingVector EmbeddingVector::Scaled(double c) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= c;
  return EmbeddingVector(std::move(out));
}

std::string_view ToString(SimilarityMetric m) {
  switch (m) {
    case SimilarityMetric::kCosine: return "cosine";
    case SimilarityMetric::kInnerProduct: return "inner_product";
    case SimilarityMetric::kEuclidean: return "euclidean";
  }
  return "cosine";
}

SimilarityMetric ParseMetric(std::string_view name) {
  if (name == "cosine") return SimilarityMetric::kCosine;
  if (name == "inner_product" || name == "dot") return SimilarityMetric::kInnerProduct;
  if (name == "euclidean") return SimilarityMetric::kEuclidean;
  throw Error(ErrorCode::kValidation, "unknown similarity metric: " + std::string(name));
}

double Similarity(SimilarityMetric metric, const EmbeddingVector& a,
                  const EmbeddingVector& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::kValidation, "embedding dimension mismatch");
  const auto x = a.values();
  const auto y = b.values();
  switch (metric) {
    case SimilarityMetric::kInnerProduct: {
      double dot = 0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return dot;
    }
    case SimilarityMetric::kCosine: {
      double dot = 0, nx = 0, ny = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        nx += x[i] * x[i];
        ny += y[i] * y[i];
      }
      if (nx == 0 || ny == 0) return 0;
      return dot / (std::sqrt(nx) * std::sqrt(ny));
    }
    case SimilarityMetric::kEuclidean: {
      double d2 = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
      }
      return -std::sqrt(d2);
    }
  }
  return 0;
}

EmbeddingVector HashEmbed(std::string_view text, std::size_t dim) {
  if (dim < 8) throw Error(ErrorCode::kValidation, "hash embedding dim must be >= 8");
  std::string padded;
  padded.reserve(text.size() + 2);
  padded.push_back(' ');
  for (char c : text) {
    padded.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  padded.push_back(' ');

  std::vector<double> v(dim, 0.0);
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t j = i; j < i + 3; ++j) {
      h ^= static_cast<unsigned char>(padded[j]);
      h *= 0x100000001b3ULL;
    }
    v[h % dim] += 1.0;
  }
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (double& x : v) x /= norm;
  }
  return EmbeddingVector(std::move(v));
}

HashEmbedder::HashEmbedder(std::size_t dim) : dim_(dim) {
  if (dim < 8) throw Error(ErrorCode::kValidation, "hash embedding dim must be >= 8");
}

EmbeddingVector CachingEmbedder::Embed(std::string_view text) const {
  const std::string key(text);
  {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto vec = inner_->Embed(text);
  std::unique_lock lock(mu_);
  return cache_.try_emplace(key, std::move(vec)).first->second;
}

std::size_t CachingEmbedder::cached() const {
  std::shared_lock lock(mu_);
  return cache_.size();
}

std::vector<ScoredId> TopK(const KnowledgeBase& kb, const Embedder& embedder,
                           SimilarityMetric metric, std::string_view query,
                           std::size_t k) {
  if (k < 1) throw Error(ErrorCode::kValidation, "k must be >= 1");
  if (kb.empty()) throw Error(ErrorCode::kEmptyResult, "retrieval over an empty knowledge base");

  const auto q = embedder.Embed(query);
  std::vector<ScoredId> scored;
  scored.reserve(kb.size());
  for (const auto& rec : kb) {
    scored.push_back({rec.id(), Similarity(metric, q, embedder.Embed(rec.text()))});
  }
  const auto better = [](const ScoredId& a, const ScoredId& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), better);
  scored.resize(take);
  return scored;
}

Retriever MakeDefaultRetriever(std::size_t k, SimilarityMetric metric) {
  Retriever r;
  r.embedder = std::make_shared<CachingEmbedder>(std::make_shared<HashEmbedder>());
  r.metric = metric;
  r.k = k;
  return r;
}

}  // namespace ragmark
