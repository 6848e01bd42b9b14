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

#ifndef RAGMARK_ER_EXTRACT_H_
#define RAGMARK_ER_EXTRACT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragmark/chat_client.h"
#include "ragmark/knowledge_base.h"

namespace ragmark {

inline constexpr std::size_t kDefaultEntityListSize = 100;
inline constexpr std::size_t kDefaultRelationListSize = 20;

/// Frequency-ranked vocabulary: items by descending count, ties ascending
/// lexicographic.
struct RankedList {
  std::vector<std::string> items;
  std::map<std::string, std::size_t> freq;

  std::size_t size() const { return items.size(); }
  const std::string& operator[](std::size_t i) const { return items[i]; }

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

using EntityList = RankedList;
using RelationList = RankedList;

struct ExtractedTriple {
  std::string subject;
  std::string relation;
  std::string object;
  std::string source_record;

  friend bool operator==(const ExtractedTriple&, const ExtractedTriple&) = default;
};

/// `count` distinct record ids by seeded Fisher-Yates prefix over the base in
/// insertion order.
std::vector<std::string> SampleRecords(const KnowledgeBase& kb, std::size_t count,
                                       std::uint64_t seed);

struct ParseResult {
  std::vector<ExtractedTriple> triples;
  std::size_t skipped = 0;  // texts whose reply could not be parsed
};

/// Parses one model reply (a JSON list of {subject, relation, object}
/// objects or [s, r, o] arrays, optionally wrapped in prose or a code fence).
/// Throws kExtraction when nothing parseable is found; triples with an empty
/// part after canonicalization are dropped.
std::vector<ExtractedTriple> ParseTripleReply(std::string_view reply,
                                              const std::string& source_record);

/// One extraction call per text; replies that fail to parse are counted and
/// skipped. `record_ids` may be empty, else parallel to `texts`.
ParseResult ParseEr(LlmGateway& gateway, const std::vector<std::string>& texts,
                    const std::vector<std::string>& record_ids = {});

/// Top `e_size` entities (subjects and objects pooled) and top `r_size`
/// relations. Throws kUnderflow when fewer distinct items exist.
std::pair<EntityList, RelationList> ReduceByFrequency(
    const std::vector<ExtractedTriple>& triples, std::size_t e_size, std::size_t r_size);

/// Ranks every distinct item of `counts`.
RankedList RankByFrequency(const std::map<std::string, std::size_t>& counts,
                           std::size_t limit);

// {entities:[{name,freq}], relations:[{name,freq}]}
nlohmann::json ListsToJson(const EntityList& entities, const RelationList& relations);
std::pair<EntityList, RelationList> ListsFromJson(const nlohmann::json& j);
RankedList RankedListFromJson(const nlohmann::json& arr);

nlohmann::json TriplesToJson(const std::vector<ExtractedTriple>& triples);
std::vector<ExtractedTriple> TriplesFromJson(const nlohmann::json& j);

}  // namespace ragmark

#endif  // RAGMARK_ER_EXTRACT_H_
