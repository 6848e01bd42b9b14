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

#include "ragmark/watermark.h"

#include <cstdio>
#include <set>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ragmark/digest.h"
#include "ragmark/error.h"

namespace ragmark {
namespace {

using json = nlohmann::json;

constexpr char kSep = '\x1F';

constexpr std::string_view kType1Head = "What is the relationship between ";
constexpr std::string_view kType1Tail = "?";
constexpr std::string_view kType2Head = "Please introduce the most relevant content of ";
constexpr std::string_view kType2Tail = ".";
constexpr std::string_view kType3Tail = " have a correlation, please provide an introduction.";
constexpr std::string_view kAnd = " and ";

std::string TupleId(std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "t%04zu", n);
  return buf;
}

std::optional<std::pair<std::string, std::string>> SplitPair(std::string_view s) {
  auto pos = s.find(kAnd);
  if (pos == std::string_view::npos || pos == 0 || pos + kAnd.size() >= s.size()) {
    return std::nullopt;
  }
  return std::make_pair(std::string(s.substr(0, pos)),
                        std::string(s.substr(pos + kAnd.size())));
}

bool EndsWith(std::string_view s, std::string_view tail) {
  return s.size() >= tail.size() && s.substr(s.size() - tail.size()) == tail;
}

}  // namespace

OwnerKey::OwnerKey(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {
  if (bytes_.size() < kMinKeyBytes) {
    throw Error(ErrorCode::kValidation, "owner key must be at least 16 bytes");
  }
}

OwnerKey OwnerKey::FromHex(std::string_view hex) {
  auto bytes = ragmark::FromHex(hex);
  if (!bytes) throw Error(ErrorCode::kValidation, "owner key is not valid hex");
  return OwnerKey(std::move(*bytes));
}

std::string OwnerKey::Fingerprint() const { return ToHex(Sha256(bytes_)).substr(0, 8); }

std::size_t NextEntityIndex(const OwnerKey& key, std::string_view current_entity,
                            std::size_t e_size, std::size_t visit) {
  if (e_size < 1) throw Error(ErrorCode::kValidation, "entity list size must be >= 1");
  std::string msg(current_entity);
  if (visit > 0) {
    msg.push_back(kSep);
    msg += std::to_string(visit);
  }
  return static_cast<std::size_t>(BigEndianMod(HmacSha256(key.bytes(), msg), e_size));
}

bool RelationExists(const OwnerKey& key, std::string_view entity_a,
                    std::string_view entity_b, double p) {
  if (!(p >= 0 && p <= 1)) throw Error(ErrorCode::kValidation, "p must lie in [0, 1]");
  std::string msg;
  msg.reserve(entity_a.size() + entity_b.size() + 7);
  msg.append(entity_a).push_back(kSep);
  msg.append(entity_b).push_back(kSep);
  msg.append("exist");
  const double u =
      static_cast<double>(BigEndianPrefix64(HmacSha256(key.bytes(), msg))) * 0x1.0p-64;
  return u < p;
}

std::size_t RelationIndex(const OwnerKey& key, std::string_view entity_a,
                          std::string_view entity_b, std::size_t r_size) {
  if (r_size < 1) throw Error(ErrorCode::kValidation, "relation list size must be >= 1");
  std::string msg;
  msg.append(entity_a).push_back(kSep);
  msg.append(entity_b);
  return static_cast<std::size_t>(BigEndianMod(HmacSha256(key.bytes(), msg), r_size));
}

WatermarkGraph BuildGraph(const OwnerKey& key, const EntityList& entities,
                          const RelationList& relations, const GraphOptions& options) {
  const std::size_t n_e = entities.size();
  const std::size_t n_r = relations.size();
  if (options.tuple_count < 1) throw Error(ErrorCode::kValidation, "tuple_count must be >= 1");
  if (n_e < 2) throw Error(ErrorCode::kValidation, "need at least 2 entities");
  if (n_r < 1) throw Error(ErrorCode::kValidation, "need at least 1 relation");
  if (!(options.p >= 0 && options.p <= 1)) {
    throw Error(ErrorCode::kValidation, "p must lie in [0, 1]");
  }

  WatermarkGraph g;
  g.key_fingerprint = key.Fingerprint();
  g.p = options.p;

  std::vector<std::size_t> times_current(n_e, 0);
  std::size_t seed_visits = 0;
  std::vector<std::size_t> first_pos(n_e, SIZE_MAX);
  std::vector<std::size_t> distinct;  // entity indices, first-occurrence order
  std::vector<bool> tested(n_e * n_e, false);
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> emitted;

  std::optional<std::size_t> current;  // nullopt is the empty seed
  for (std::size_t step = 0; step < options.chain_cap; ++step) {
    std::size_t idx;
    if (current) {
      idx = NextEntityIndex(key, entities[*current], n_e, times_current[*current]++);
      if (idx == *current) idx = (idx + 1) % n_e;
    } else {
      idx = NextEntityIndex(key, "", n_e, seed_visits++);
    }
    const std::size_t pos = g.chain.size();
    g.chain.push_back(entities[idx]);

    for (std::size_t earlier : distinct) {
      if (earlier == idx) continue;
      const std::size_t pair = earlier * n_e + idx;
      if (tested[pair]) continue;
      tested[pair] = true;
      const auto& a = entities[earlier];
      const auto& b = entities[idx];
      if (!RelationExists(key, a, b, options.p)) continue;
      const std::size_t r = RelationIndex(key, a, b, n_r);
      if (!emitted.emplace(std::min(earlier, idx), std::max(earlier, idx), r).second) {
        continue;
      }
      g.tuples.push_back({TupleId(g.tuples.size() + 1), a, relations[r], b,
                          first_pos[earlier], pos});
      if (g.tuples.size() == options.tuple_count) return g;
    }
    if (first_pos[idx] == SIZE_MAX) {
      first_pos[idx] = pos;
      distinct.push_back(idx);
    }
    current = idx;
  }
  throw Error(ErrorCode::kExhausted,
              "chain cap of " + std::to_string(options.chain_cap) + " steps reached with " +
                  std::to_string(g.tuples.size()) + " of " +
                  std::to_string(options.tuple_count) + " tuples");
}

const WatermarkTuple* WatermarkGraph::Find(std::string_view tuple_id) const {
  for (const auto& t : tuples) {
    if (t.tuple_id == tuple_id) return &t;
  }
  return nullptr;
}

QueryTemplate ParseQueryTemplate(int id) {
  switch (id) {
    case 1: return QueryTemplate::kRelationship;
    case 2: return QueryTemplate::kRelevantContent;
    case 3: return QueryTemplate::kCorrelation;
    default:
      throw Error(ErrorCode::kValidation,
                  "query template must be 1, 2 or 3, got " + std::to_string(id));
  }
}

std::string WatermarkQuery(std::string_view a, std::string_view b, QueryTemplate type) {
  std::string out;
  switch (type) {
    case QueryTemplate::kRelationship:
      out.append(kType1Head).append(a).append(kAnd).append(b).append(kType1Tail);
      break;
    case QueryTemplate::kRelevantContent:
      out.append(kType2Head).append(a).append(kAnd).append(b).append(kType2Tail);
      break;
    case QueryTemplate::kCorrelation:
      out.append(a).append(kAnd).append(b).append(kType3Tail);
      break;
  }
  return out;
}

std::string WatermarkQuery(const WatermarkTuple& tuple, QueryTemplate type) {
  return WatermarkQuery(tuple.entity_a, tuple.entity_b, type);
}

std::optional<std::pair<std::string, std::string>> ParseWatermarkQuery(
    std::string_view q) {
  if (q.starts_with(kType1Head) && EndsWith(q, kType1Tail)) {
    return SplitPair(q.substr(kType1Head.size(),
                              q.size() - kType1Head.size() - kType1Tail.size()));
  }
  if (q.starts_with(kType2Head) && EndsWith(q, kType2Tail)) {
    return SplitPair(q.substr(kType2Head.size(),
                              q.size() - kType2Head.size() - kType2Tail.size()));
  }
  if (EndsWith(q, kType3Tail)) {
    return SplitPair(q.substr(0, q.size() - kType3Tail.size()));
  }
  return std::nullopt;
}

json GraphToJson(const WatermarkGraph& g) {
  json tuples = json::array();
  for (const auto& t : g.tuples) {
    tuples.push_back({{"id", t.tuple_id},
                      {"a", t.entity_a},
                      {"r", t.relation},
                      {"b", t.entity_b},
                      {"i", t.pos_a},
                      {"j", t.pos_b}});
  }
  return {{"key_fingerprint", g.key_fingerprint},
          {"p", g.p},
          {"chain", g.chain},
          {"tuples", std::move(tuples)}};
}

WatermarkGraph GraphFromJson(const json& j) {
  try {
    WatermarkGraph g;
    g.key_fingerprint = j.at("key_fingerprint").get<std::string>();
    g.p = j.at("p").get<double>();
    g.chain = j.at("chain").get<std::vector<std::string>>();
    for (const auto& t : j.at("tuples")) {
      WatermarkTuple w;
      w.tuple_id = t.at("id").get<std::string>();
      w.entity_a = t.at("a").get<std::string>();
      w.relation = t.at("r").get<std::string>();
      w.entity_b = t.at("b").get<std::string>();
      w.pos_a = t.value("i", std::size_t{0});
      w.pos_b = t.value("j", std::size_t{0});
      if (w.entity_a == w.entity_b) {
        throw Error(ErrorCode::kParse, "tuple " + w.tuple_id + " repeats an entity");
      }
      g.tuples.push_back(std::move(w));
    }
    return g;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("watermark graph: ") + e.what());
  }
}

}  // namespace ragmark
