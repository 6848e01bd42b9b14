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

#include "ragmark/er_extract.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "ragmark/error.h"
#include "ragmark/parallel.h"
#include "ragmark/prompts.h"
#include "ragmark/rng.h"
#include "ragmark/text_util.h"

namespace ragmark {
namespace {

using json = nlohmann::json;

std::optional<ExtractedTriple> TripleFromJson(const json& item, const std::string& source) {
  std::string s, r, o;
  if (item.is_object()) {
    auto get = [&item](std::initializer_list<const char*> keys) -> std::string {
      for (const char* k : keys) {
        if (auto it = item.find(k); it != item.end() && it->is_string()) {
          return it->get<std::string>();
        }
      }
      return {};
    };
    s = get({"subject", "head", "source"});
    r = get({"relation", "type", "predicate"});
    o = get({"object", "tail", "target"});
  } else if (item.is_array() && item.size() == 3 && item[0].is_string() &&
             item[1].is_string() && item[2].is_string()) {
    s = item[0].get<std::string>();
    r = item[1].get<std::string>();
    o = item[2].get<std::string>();
  } else {
    return std::nullopt;
  }
  ExtractedTriple t{text::CanonicalEntity(s), text::CanonicalRelation(r),
                    text::CanonicalEntity(o), source};
  if (t.subject.empty() || t.relation.empty() || t.object.empty()) return std::nullopt;
  return t;
}

}  // namespace

std::vector<std::string> SampleRecords(const KnowledgeBase& kb, std::size_t count,
                                       std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::kValidation, "sample size must be >= 1");
  if (count > kb.size()) {
    throw Error(ErrorCode::kValidation, "sample size " + std::to_string(count) +
                                            " exceeds base size " + std::to_string(kb.size()));
  }
  std::vector<std::string> ids;
  ids.reserve(kb.size());
  for (const auto& r : kb) ids.push_back(r.id());
  return FisherYatesPrefix(std::move(ids), count, seed);
}

std::vector<ExtractedTriple> ParseTripleReply(std::string_view reply,
                                              const std::string& source_record) {
  const auto open = reply.find('[');
  const auto close = reply.rfind(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw Error(ErrorCode::kExtraction, "reply holds no JSON list");
  }
  json arr;
  try {
    arr = json::parse(reply.substr(open, close - open + 1));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kExtraction, std::string("reply is not JSON: ") + e.what());
  }
  if (!arr.is_array()) throw Error(ErrorCode::kExtraction, "reply is not a JSON list");
  // A bare [s, r, o] is one triple, not three items.
  if (arr.size() == 3 && arr[0].is_string()) arr = json::array({arr});
  std::vector<ExtractedTriple> out;
  for (const auto& item : arr) {
    if (auto t = TripleFromJson(item, source_record)) out.push_back(std::move(*t));
  }
  return out;
}

ParseResult ParseEr(LlmGateway& gateway, const std::vector<std::string>& texts,
                    const std::vector<std::string>& record_ids) {
  if (texts.empty()) throw Error(ErrorCode::kValidation, "no texts to extract from");
  if (!record_ids.empty() && record_ids.size() != texts.size()) {
    throw Error(ErrorCode::kValidation, "record_ids must parallel texts");
  }
  std::vector<std::optional<std::vector<ExtractedTriple>>> per_text(texts.size());
  ParallelFor(texts.size(), static_cast<std::size_t>(gateway.max_in_flight()),
              [&](std::size_t i) {
                const std::string source = record_ids.empty() ? std::string() : record_ids[i];
                auto reply = gateway.Call(Role::kExtract, "", prompts::Extract(texts[i]));
                try {
                  per_text[i] = ParseTripleReply(reply, source);
                } catch (const Error&) {
                  per_text[i].reset();
                }
              });
  ParseResult result;
  for (auto& t : per_text) {
    if (!t) {
      ++result.skipped;
      continue;
    }
    for (auto& triple : *t) result.triples.push_back(std::move(triple));
  }
  return result;
}

RankedList RankByFrequency(const std::map<std::string, std::size_t>& counts,
                           std::size_t limit) {
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > limit) ranked.resize(limit);
  RankedList out;
  for (auto& [name, n] : ranked) {
    out.items.push_back(name);
    out.freq.emplace(std::move(name), n);
  }
  return out;
}

std::pair<EntityList, RelationList> ReduceByFrequency(
    const std::vector<ExtractedTriple>& triples, std::size_t e_size, std::size_t r_size) {
  std::map<std::string, std::size_t> entity_counts;
  std::map<std::string, std::size_t> relation_counts;
  for (const auto& t : triples) {
    ++entity_counts[t.subject];
    ++entity_counts[t.object];
    ++relation_counts[t.relation];
  }
  if (entity_counts.size() < e_size || relation_counts.size() < r_size) {
    throw Error(ErrorCode::kUnderflow,
                "need " + std::to_string(e_size) + " entities and " + std::to_string(r_size) +
                    " relations, observed " + std::to_string(entity_counts.size()) +
                    " and " + std::to_string(relation_counts.size()));
  }
  return {RankByFrequency(entity_counts, e_size), RankByFrequency(relation_counts, r_size)};
}

namespace {

json RankedToJson(const RankedList& l) {
  json arr = json::array();
  for (const auto& item : l.items) arr.push_back({{"name", item}, {"freq", l.freq.at(item)}});
  return arr;
}

}  // namespace

RankedList RankedListFromJson(const json& arr) {
  RankedList l;
  try {
    for (const auto& item : arr) {
      auto name = item.at("name").get<std::string>();
      l.freq[name] = item.value("freq", std::size_t{0});
      l.items.push_back(std::move(name));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("ranked list: ") + e.what());
  }
  if (l.freq.size() != l.items.size()) {
    throw Error(ErrorCode::kParse, "ranked list repeats an item");
  }
  return l;
}

json ListsToJson(const EntityList& entities, const RelationList& relations) {
  return {{"entities", RankedToJson(entities)}, {"relations", RankedToJson(relations)}};
}

std::pair<EntityList, RelationList> ListsFromJson(const json& j) {
  if (!j.contains("entities") || !j.contains("relations")) {
    throw Error(ErrorCode::kParse, "lists file needs entities and relations");
  }
  return {RankedListFromJson(j.at("entities")), RankedListFromJson(j.at("relations"))};
}

json TriplesToJson(const std::vector<ExtractedTriple>& triples) {
  json arr = json::array();
  for (const auto& t : triples) {
    arr.push_back({{"subject", t.subject},
                   {"relation", t.relation},
                   {"object", t.object},
                   {"source_record", t.source_record}});
  }
  return arr;
}

std::vector<ExtractedTriple> TriplesFromJson(const json& j) {
  std::vector<ExtractedTriple> out;
  try {
    for (const auto& t : j) {
      out.push_back({t.at("subject").get<std::string>(), t.at("relation").get<std::string>(),
                     t.at("object").get<std::string>(),
                     t.value("source_record", std::string())});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("triples: ") + e.what());
  }
  return out;
}

}  // namespace ragmark
