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

#ifndef RAGMARK_WATERMARK_H_
#define RAGMARK_WATERMARK_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragmark/er_extract.h"

// Keyed watermark graph: the entity chain, relation existence and relation
// choice are all HMAC-SHA256 of the owner key, so the owner can regenerate
// the exact tuples from the key and the two vocabularies alone.
namespace ragmark {

inline constexpr std::size_t kDefaultTupleCount = 50;
inline constexpr double kDefaultRelationProbability = 0.05;
inline constexpr std::size_t kDefaultChainCap = 100'000;
inline constexpr std::size_t kMinKeyBytes = 16;

/// Owner secret. Never printed; reports carry Fingerprint() only.
class OwnerKey {
 public:
  explicit OwnerKey(std::vector<std::uint8_t> bytes);
  static OwnerKey FromHex(std::string_view hex);

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  /// First 8 hex characters of SHA-256(key).
  std::string Fingerprint() const;

 private:
  std::vector<std::uint8_t> bytes_;
};

struct WatermarkTuple {
  std::string tuple_id;
  std::string entity_a;
  std::string relation;
  std::string entity_b;
  std::size_t pos_a = 0;  // chain positions, pos_a < pos_b
  std::size_t pos_b = 0;

  friend bool operator==(const WatermarkTuple&, const WatermarkTuple&) = default;
};

struct WatermarkGraph {
  std::string key_fingerprint;
  double p = kDefaultRelationProbability;
  std::vector<std::string> chain;
  std::vector<WatermarkTuple> tuples;

  const WatermarkTuple* Find(std::string_view tuple_id) const;

  friend bool operator==(const WatermarkGraph&, const WatermarkGraph&) = default;
};

/// HMAC(key, current_entity) as a big-endian integer mod e_size. `visit` > 0
/// salts the input with 0x1F and the decimal visit count; the chain uses it
/// when an entity becomes current again so the walk cannot lock into a cycle.
std::size_t NextEntityIndex(const OwnerKey& key, std::string_view current_entity,
                            std::size_t e_size, std::size_t visit = 0);

/// u = first 8 bytes of HMAC(key, a || 0x1F || b || 0x1F || "exist") / 2^64;
/// true iff u < p.
bool RelationExists(const OwnerKey& key, std::string_view entity_a,
                    std::string_view entity_b, double p);

/// HMAC(key, a || 0x1F || b) big-endian mod r_size.
std::size_t RelationIndex(const OwnerKey& key, std::string_view entity_a,
                          std::string_view entity_b, std::size_t r_size);

struct GraphOptions {
  std::size_t tuple_count = kDefaultTupleCount;
  double p = kDefaultRelationProbability;
  std::size_t chain_cap = kDefaultChainCap;
};

/// Walks the keyed entity chain from the empty seed, testing each new entity
/// against every distinct earlier one. Throws kExhausted (message carries the
/// tuples found) if the cap is reached first.
WatermarkGraph BuildGraph(const OwnerKey& key, const EntityList& entities,
                          const RelationList& relations, const GraphOptions& options = {});

enum class QueryTemplate { kRelationship = 1, kRelevantContent = 2, kCorrelation = 3 };

QueryTemplate ParseQueryTemplate(int id);

std::string WatermarkQuery(const WatermarkTuple& tuple,
                           QueryTemplate type = QueryTemplate::kRelationship);
std::string WatermarkQuery(std::string_view entity_a, std::string_view entity_b,
                           QueryTemplate type = QueryTemplate::kRelationship);

/// Inverse of WatermarkQuery for all three templates.
std::optional<std::pair<std::string, std::string>> ParseWatermarkQuery(
    std::string_view question);

// {key_fingerprint, p, chain, tuples:[{id, a, r, b, i, j}]}
nlohmann::json GraphToJson(const WatermarkGraph& g);
WatermarkGraph GraphFromJson(const nlohmann::json& j);

}  // namespace ragmark

#endif  // RAGMARK_WATERMARK_H_
