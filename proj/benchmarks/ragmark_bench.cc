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

// Micro-benchmarks for the hot paths: embedding, top-k retrieval, keyed
// graph construction and the binomial tail.

#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "ragmark/digest.h"
#include "ragmark/er_extract.h"
#include "ragmark/retriever.h"
#include "ragmark/synthetic.h"
#include "ragmark/verification.h"
#include "ragmark/watermark.h"

namespace ragmark {
namespace {

const SyntheticCorpus& Corpus() {
  static const SyntheticCorpus corpus = [] {
    SyntheticOptions o;
    o.records = 4000;
    o.questions = 200;
    return MakeSyntheticCorpus(o);
  }();
  return corpus;
}

OwnerKey BenchKey() {
  return OwnerKey::FromHex("000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f");
}

RankedList Names(const std::string& prefix, std::size_t n) {
  RankedList l;
  for (std::size_t i = 0; i < n; ++i) {
    l.items.push_back(prefix + std::to_string(i));
    l.freq[l.items.back()] = n - i;
  }
  return l;
}

void BM_HashEmbed(benchmark::State& state) {
  const auto& text = Corpus().kb[0].text();
  const auto dim = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(HashEmbed(text, dim));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_HashEmbed)->Arg(64)->Arg(256)->Arg(1024);

// Retrieval over a base whose record embeddings are already cached, so the
// measurement is the scoring and selection pass.
void BM_TopK(benchmark::State& state) {
  const auto& corpus = Corpus();
  KnowledgeBase kb;
  for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i) {
    kb.Add(corpus.kb[i].text());
  }
  auto embedder = std::make_shared<CachingEmbedder>(std::make_shared<HashEmbedder>());
  const auto k = static_cast<std::size_t>(state.range(1));
  TopK(kb, *embedder, SimilarityMetric::kCosine, "warm up", k);
  std::size_t q = 0;
  for (auto _ : state) {
    const auto& question = corpus.questions[q++ % corpus.questions.size()].question;
    benchmark::DoNotOptimize(TopK(kb, *embedder, SimilarityMetric::kCosine, question, k));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TopK)->Args({1000, 1})->Args({4000, 1})->Args({4000, 5})->Args({4000, 50});

void BM_BuildGraph(benchmark::State& state) {
  const auto key = BenchKey();
  const auto entities = Names("Entity", static_cast<std::size_t>(state.range(0)));
  const auto relations = Names("REL_", 20);
  GraphOptions o;
  o.tuple_count = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(BuildGraph(key, entities, relations, o));
}
BENCHMARK(BM_BuildGraph)->Args({100, 50})->Args({1000, 50})->Args({1000, 200});

void BM_RelationExists(benchmark::State& state) {
  const auto key = BenchKey();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RelationExists(key, "Entity" + std::to_string(i), "Entity" + std::to_string(i + 1), 0.05));
    ++i;
  }
}
BENCHMARK(BM_RelationExists);

void BM_BinomialUpperPValue(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::size_t c = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BinomialUpperPValue(n, c, 0.01));
    c = (c + 1) % (n + 1);
  }
}
BENCHMARK(BM_BinomialUpperPValue)->Arg(30)->Arg(300)->Arg(3000);

void BM_Sha256(benchmark::State& state) {
  const std::string data(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(Sha256(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sha256)->Arg(64)->Arg(4096);

}  // namespace
}  // namespace ragmark

BENCHMARK_MAIN();
