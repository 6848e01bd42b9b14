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

#ifndef RAGMARK_SYNTHETIC_H_
#define RAGMARK_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ragmark/er_extract.h"
#include "ragmark/knowledge_base.h"

// Deterministic synthetic corpus for offline runs: invented single-word
// entities linked by verb relations, Zipf-distributed so that a frequency
// cut is meaningful, plus a study code per record that planted clean
// questions can target.
namespace ragmark {

struct SyntheticOptions {
  std::size_t records = 2000;
  std::size_t entities = 150;
  std::size_t relations = 25;  // at most 25
  std::size_t questions = 100;
  std::uint64_t seed = 7;
};

struct CleanQuestion {
  std::string question;
  std::string record_id;  // the record the question was planted on
};

struct SyntheticCorpus {
  KnowledgeBase kb;
  std::vector<std::string> entities;   // canonical
  std::vector<std::string> relations;  // canonical
  std::vector<ExtractedTriple> triples;
  std::vector<CleanQuestion> questions;
};

/// Same options, same corpus, on every platform.
SyntheticCorpus MakeSyntheticCorpus(const SyntheticOptions& options = {});

/// One record's worth of text drawn from the corpus generator; used to make
/// texts that are statistically indistinguishable from the corpus.
std::string SyntheticSentence(const SyntheticCorpus& corpus, std::uint64_t seed);

}  // namespace ragmark

#endif  // RAGMARK_SYNTHETIC_H_
