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

// Run configuration shared by every ragmark verb. Values come from the
// built-in defaults, then an optional TOML file, then command-line flags
// (kebab-cased field names), in increasing precedence.

#ifndef RAGMARK_TOOLS_RUN_CONFIG_H_
#define RAGMARK_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragmark/error.h"

namespace ragmark::cli {

enum Verb : unsigned {
  kSynth = 1u << 0,
  kExtract = 1u << 1,
  kTuples = 1u << 2,
  kInject = 1u << 3,
  kVerify = 1u << 4,
  kAttack = 1u << 5,
  kMetrics = 1u << 6,
  kAllVerbs = (1u << 7) - 1,
};

std::string_view VerbName(Verb verb);

struct RunConfig {
  // Artifact paths.
  std::string kb = "kb.jsonl";
  std::string kb_wm = "kb_wm.jsonl";
  std::string entities = "entities.json";
  std::string relations = "relations.json";
  std::string tuples = "tuples.json";
  std::string questions = "questions.json";
  std::string out;  // verb-specific default when empty
  std::string out_dir = ".";
  std::string call_log;

  // Secrets. Never echoed; the key is reported by fingerprint only.
  std::string key;
  std::string api_key;

  // Watermark and verification parameters.
  std::uint64_t entity_count = 100;
  std::uint64_t relation_count = 20;
  std::uint64_t sample = 0;  // records sent to extraction; 0 = all
  std::uint64_t tuple_count = 50;
  double p = 0.05;
  std::uint64_t n_wm = 5;
  std::uint64_t max_epochs = 10;
  std::uint64_t k = 1;
  std::string metric = "cosine";
  std::uint64_t n = 30;
  double alpha = 0.05;
  std::optional<double> p0;
  std::uint64_t query_template = 1;
  std::uint64_t seed = 0;
  std::string mode = "concat";

  // Synthetic corpus.
  std::uint64_t records = 2000;
  std::uint64_t question_count = 100;

  // Backends: "mock:<behavior.json>", "mock:" for the built-in defaults, or
  // an http(s) URL of an OpenAI-compatible server. Role-specific
  // descriptors fall back to `llm` when empty.
  std::string llm = "mock:";
  std::string extractor;
  std::string shadow;
  std::string generator;
  std::string discriminator;
  std::string judge;
  std::string answerer;
  std::string attacker;
  std::string suspect;
  std::string suspect_kb;
  std::string embedder = "hash";
  std::uint64_t embed_dim = 256;
  std::string model = "gpt-3.5-turbo";
  std::uint64_t max_in_flight = 4;
  std::uint64_t workers = 0;

  // Attacks.
  std::string attack;
  std::uint64_t count = 0;
  double rate = 1.0;
  std::uint64_t attack_k = 5;

  /// Echo for reports: every field except the secrets, plus the key
  /// fingerprint when a key is configured.
  nlohmann::json ToJson() const;

  /// Descriptor for a role, falling back to `llm`.
  const std::string& Backend(const std::string& role_value) const {
    return role_value.empty() ? llm : role_value;
  }
};

using FieldRef = std::variant<std::string RunConfig::*, std::uint64_t RunConfig::*,
                              double RunConfig::*, std::optional<double> RunConfig::*>;

struct FieldSpec {
  std::string_view name;  // snake_case; the flag is the kebab-cased form
  FieldRef ref;
  unsigned verbs;
  bool secret;
  std::string_view help;
};

std::span<const FieldSpec> Fields();

std::string FlagName(std::string_view field);

/// Thrown for malformed or out-of-range configuration; lists every problem.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Parses a flag value into the field; throws ConfigError on bad input.
void SetFromString(RunConfig& config, const FieldSpec& field, const std::string& value);

/// Applies a TOML document. Unknown keys and type mismatches are errors.
/// A secret field may be written as "${VAR}" to read it from the
/// environment; other fields reject interpolation.
void ApplyToml(RunConfig& config, const std::filesystem::path& path);
void ApplyTomlString(RunConfig& config, std::string_view document);

/// Checks ranges and enumerations relevant to `verb`.
void Validate(const RunConfig& config, Verb verb);

}  // namespace ragmark::cli

#endif  // RAGMARK_TOOLS_RUN_CONFIG_H_
