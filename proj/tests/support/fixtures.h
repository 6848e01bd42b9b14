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

#ifndef RAGMARK_TESTS_SUPPORT_FIXTURES_H_
#define RAGMARK_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "ragmark/er_extract.h"
#include "ragmark/error.h"
#include "ragmark/injection.h"
#include "ragmark/mock_chat_client.h"
#include "ragmark/retriever.h"
#include "ragmark/synthetic.h"
#include "ragmark/watermark.h"

namespace ragmark::testing {

/// 32-byte owner key used throughout the tests.
inline constexpr std::string_view kTestKeyHex =
    "8f3a1c9b0d2e4f6071829304a5b6c7d8e9f00112233445566778899aabbccdde";

OwnerKey TestKey();

/// Mock that leaks, generates ideally and extracts by relation gloss.
MockBehavior IdealBehavior(const SyntheticCorpus& corpus);

/// Mock that never leaks; every other role as in IdealBehavior.
MockBehavior CleanBehavior(const SyntheticCorpus& corpus);

std::shared_ptr<LlmGateway> MockGateway(MockBehavior behavior, int max_in_flight = 4);

/// Cosine retriever over a cached hash embedder.
Retriever CachedRetriever(std::size_t k = 1);

/// The full offline pipeline up to the watermarked base.
struct Pipeline {
  SyntheticCorpus corpus;
  EntityList entities;
  RelationList relations;
  WatermarkGraph graph;
  KnowledgeBase kb_wm;
  InjectionReport report;
  Retriever retriever;
};

struct PipelineOptions {
  SyntheticOptions corpus;
  std::size_t sample = 600;  // records sent to extraction
  std::size_t tuple_count = 50;
  std::size_t n_wm = 5;
  InjectionMode mode = InjectionMode::kConcat;
};

Pipeline RunPipeline(const PipelineOptions& options = {});

/// Error code thrown by `fn`, or nullopt when it returns normally.
template <typename Fn>
std::optional<ErrorCode> CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Fresh scratch directory under the system temp dir.
std::filesystem::path ScratchDir(const std::string& name);

}  // namespace ragmark::testing

#endif  // RAGMARK_TESTS_SUPPORT_FIXTURES_H_
