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

#include "fixtures.h"

#include <unistd.h>

namespace ragmark::testing {

OwnerKey TestKey() { return OwnerKey::FromHex(kTestKeyHex); }

MockBehavior IdealBehavior(const SyntheticCorpus& corpus) {
  MockBehavior b;
  b.seed = 11;
  b.leak_probability = 1.0;
  b.extraction_relations = corpus.relations;
  return b;
}

MockBehavior CleanBehavior(const SyntheticCorpus& corpus) {
  MockBehavior b = IdealBehavior(corpus);
  b.leak_probability = 0.0;
  return b;
}

std::shared_ptr<LlmGateway> MockGateway(MockBehavior behavior, int max_in_flight) {
  return std::make_shared<LlmGateway>(std::make_shared<MockChatClient>(std::move(behavior)),
                                      std::make_shared<CallLog>(), max_in_flight);
}

Retriever CachedRetriever(std::size_t k) {
  return Retriever{std::make_shared<CachingEmbedder>(std::make_shared<HashEmbedder>()),
                   SimilarityMetric::kCosine, k};
}

Pipeline RunPipeline(const PipelineOptions& options) {
  Pipeline p;
  p.corpus = MakeSyntheticCorpus(options.corpus);
  p.retriever = CachedRetriever();
  auto gw = MockGateway(IdealBehavior(p.corpus));

  const auto ids = SampleRecords(p.corpus.kb, options.sample, options.corpus.seed);
  std::vector<std::string> texts;
  for (const auto& id : ids) texts.push_back(p.corpus.kb.Get(id).text());
  const auto parsed = ParseEr(*gw, texts, ids);
  std::tie(p.entities, p.relations) =
      ReduceByFrequency(parsed.triples, kDefaultEntityListSize, kDefaultRelationListSize);

  GraphOptions g;
  g.tuple_count = options.tuple_count;
  p.graph = BuildGraph(TestKey(), p.entities, p.relations, g);

  InjectionConfig cfg;
  cfg.n_wm = options.n_wm;
  cfg.mode = options.mode;
  cfg.shadow = gw;
  cfg.gen = gw;
  cfg.disc = gw;
  std::tie(p.kb_wm, p.report) = InjectAll(cfg, p.retriever, p.corpus.kb, p.graph);
  return p;
}

std::filesystem::path ScratchDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("ragmark_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ragmark::testing
