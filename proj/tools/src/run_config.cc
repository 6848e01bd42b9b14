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

#include "run_config.h"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include <toml.hpp>

#include "ragmark/injection.h"
#include "ragmark/retriever.h"
#include "ragmark/watermark.h"

namespace ragmark::cli {
namespace {

using json = nlohmann::json;

constexpr unsigned kRag = kInject | kVerify | kAttack | kMetrics;
constexpr unsigned kLlmVerbs = kExtract | kInject | kVerify | kAttack | kMetrics;

// clang-format off
constexpr FieldSpec kFields[] = {
  {"kb", &RunConfig::kb, kSynth | kExtract | kInject | kMetrics, false, "Clean knowledge base (JSONL)"},
  {"kb_wm", &RunConfig::kb_wm, kInject | kVerify | kAttack | kMetrics, false, "Watermarked knowledge base (JSONL)"},
  {"entities", &RunConfig::entities, kExtract | kTuples, false, "Entity list artifact"},
  {"relations", &RunConfig::relations, kExtract | kTuples, false, "Relation list artifact"},
  {"tuples", &RunConfig::tuples, kTuples | kInject | kVerify | kAttack, false, "Watermark tuple artifact"},
  {"questions", &RunConfig::questions, kSynth | kMetrics, false, "Clean question set (JSON)"},
  {"out", &RunConfig::out, kInject | kVerify | kAttack | kMetrics, false, "Report path (verb default when empty)"},
  {"out_dir", &RunConfig::out_dir, kSynth, false, "Directory for synthetic artifacts"},
  {"call_log", &RunConfig::call_log, kLlmVerbs, false, "Write every model exchange to this JSONL file"},
  {"key", &RunConfig::key, kTuples, true, "Owner key, hex (at least 16 bytes)"},
  {"api_key", &RunConfig::api_key, kLlmVerbs, true, "Bearer token for HTTP backends (default: $RAGWM_API_KEY)"},
  {"entity_count", &RunConfig::entity_count, kExtract, false, "Entity list size |E|"},
  {"relation_count", &RunConfig::relation_count, kExtract, false, "Relation list size |R|"},
  {"sample", &RunConfig::sample, kExtract, false, "Records sent to extraction (0 = all)"},
  {"tuple_count", &RunConfig::tuple_count, kTuples, false, "Watermark tuples to generate"},
  {"p", &RunConfig::p, kTuples, false, "Relation probability per entity pair"},
  {"n_wm", &RunConfig::n_wm, kInject, false, "Watermark texts per tuple"},
  {"max_epochs", &RunConfig::max_epochs, kInject, false, "Interaction epochs per text"},
  {"k", &RunConfig::k, kRag, false, "Retrieval width"},
  {"metric", &RunConfig::metric, kRag, false, "cosine | inner_product | euclidean"},
  {"n", &RunConfig::n, kVerify | kAttack, false, "Watermark queries per verification"},
  {"alpha", &RunConfig::alpha, kVerify | kAttack, false, "Significance level"},
  {"p0", &RunConfig::p0, kVerify | kAttack, false, "Null success probability (default 0.01)"},
  {"query_template", &RunConfig::query_template, kVerify | kAttack, false, "Watermark query template 1-3"},
  {"seed", &RunConfig::seed, kAllVerbs, false, "Seed for every sampled choice"},
  {"mode", &RunConfig::mode, kInject, false, "concat | direct"},
  {"records", &RunConfig::records, kSynth, false, "Synthetic records"},
  {"question_count", &RunConfig::question_count, kSynth, false, "Synthetic clean questions"},
  {"llm", &RunConfig::llm, kLlmVerbs, false, "Default backend for every model role"},
  {"extractor", &RunConfig::extractor, kExtract | kAttack, false, "Entity/relation extraction backend"},
  {"shadow", &RunConfig::shadow, kInject, false, "Shadow RAG backend"},
  {"generator", &RunConfig::generator, kInject, false, "Watermark text generation backend"},
  {"discriminator", &RunConfig::discriminator, kInject | kVerify | kAttack, false, "Relation discriminator backend"},
  {"judge", &RunConfig::judge, kMetrics, false, "Answer equivalence judge backend"},
  {"answerer", &RunConfig::answerer, kMetrics, false, "Answer model for fidelity metrics"},
  {"attacker", &RunConfig::attacker, kAttack, false, "Paraphrase / removal backend"},
  {"suspect", &RunConfig::suspect, kVerify | kAttack, false, "Suspect model backend"},
  {"suspect_kb", &RunConfig::suspect_kb, kVerify, false, "Serve the suspect as a local RAG over this base"},
  {"embedder", &RunConfig::embedder, kRag, false, "hash | http(s) embeddings URL"},
  {"embed_dim", &RunConfig::embed_dim, kRag, false, "Embedding dimension"},
  {"model", &RunConfig::model, kLlmVerbs, false, "Model name for HTTP backends"},
  {"max_in_flight", &RunConfig::max_in_flight, kLlmVerbs, false, "Concurrent requests per backend"},
  {"workers", &RunConfig::workers, kVerify | kAttack, false, "Concurrent suspect queries (0 = backend limit)"},
  {"attack", &RunConfig::attack, kAttack, false, "paraphrase | remove-unrelated | insert | expand-k | dedup | perplexity | distill"},
  {"count", &RunConfig::count, kAttack, false, "Records inserted by the insert attack"},
  {"rate", &RunConfig::rate, kAttack, false, "Entity keep rate for the distill attack"},
  {"attack_k", &RunConfig::attack_k, kAttack, false, "Retrieval width for the expand-k attack"},
};
// clang-format on

const FieldSpec* FindField(std::string_view name) {
  for (const auto& f : kFields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

bool ParseU64(const std::string& s, std::uint64_t& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && !s.empty();
}

bool ParseDouble(const std::string& s, double& out) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  in >> out;
  return !s.empty() && in && in.peek() == std::char_traits<char>::eof();
}

// "${VAR}" -> the variable's value; any other string is returned unchanged.
// Partial interpolation is not supported.
std::optional<std::string> Interpolated(const std::string& value, bool secret,
                                        std::vector<std::string>& problems,
                                        std::string_view field) {
  const bool whole = value.size() > 3 && value.starts_with("${") && value.ends_with("}");
  if (value.find("${") == std::string::npos) return value;
  if (!secret) {
    problems.push_back(std::string(field) + ": environment interpolation is only allowed for secrets");
    return std::nullopt;
  }
  if (!whole) {
    problems.push_back(std::string(field) + ": interpolation must be the whole value, as ${VAR}");
    return std::nullopt;
  }
  const std::string var = value.substr(2, value.size() - 3);
  const char* env = std::getenv(var.c_str());
  if (env == nullptr) {
    problems.push_back(std::string(field) + ": environment variable " + var + " is not set");
    return std::nullopt;
  }
  return std::string(env);
}

void ApplyTable(RunConfig& config, const toml::table& table) {
  std::vector<std::string> problems;
  for (const auto& [key, node] : table) {
    const std::string name(key.str());
    const FieldSpec* f = FindField(name);
    if (f == nullptr) {
      problems.push_back(name + ": unknown setting");
      continue;
    }
    std::visit(
        [&](auto member) {
          using M = std::remove_cvref_t<decltype(config.*member)>;
          if constexpr (std::is_same_v<M, std::string>) {
            auto v = node.template value<std::string>();
            if (!v) {
              problems.push_back(name + ": expected a string");
            } else if (auto s = Interpolated(*v, f->secret, problems, name)) {
              config.*member = *s;
            }
          } else if constexpr (std::is_same_v<M, std::uint64_t>) {
            auto v = node.template value<std::int64_t>();
            if (!v || !node.is_integer() || *v < 0) {
              problems.push_back(name + ": expected a non-negative integer");
            } else {
              config.*member = static_cast<std::uint64_t>(*v);
            }
          } else {
            auto v = node.template value<double>();
            if (!v || !(node.is_floating_point() || node.is_integer())) {
              problems.push_back(name + ": expected a number");
            } else {
              config.*member = *v;
            }
          }
        },
        f->ref);
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::string Joined(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration:";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}

}  // namespace

std::string_view VerbName(Verb verb) {
  switch (verb) {
    case kSynth: return "synth";
    case kExtract: return "extract";
    case kTuples: return "tuples";
    case kInject: return "inject";
    case kVerify: return "verify";
    case kAttack: return "attack";
    case kMetrics: return "metrics";
    default: return "?";
  }
}

std::span<const FieldSpec> Fields() { return kFields; }

std::string FlagName(std::string_view field) {
  std::string out(field);
  for (auto& c : out) {
    if (c == '_') c = '-';
  }
  return out;
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorCode::kValidation, Joined(problems)), problems_(std::move(problems)) {}

json RunConfig::ToJson() const {
  json j = json::object();
  for (const auto& f : kFields) {
    if (f.secret) continue;
    std::visit(
        [&](auto member) {
          using M = std::remove_cvref_t<decltype(this->*member)>;
          if constexpr (std::is_same_v<M, std::optional<double>>) {
            j[std::string(f.name)] = (this->*member) ? json(*(this->*member)) : json(nullptr);
          } else {
            j[std::string(f.name)] = this->*member;
          }
        },
        f.ref);
  }
  if (!key.empty()) {
    try {
      j["key_fingerprint"] = OwnerKey::FromHex(key).Fingerprint();
    } catch (const Error&) {
      j["key_fingerprint"] = nullptr;
    }
  }
  return j;
}

void SetFromString(RunConfig& config, const FieldSpec& field, const std::string& value) {
  std::vector<std::string> problems;
  const std::string flag = "--" + FlagName(field.name);
  std::visit(
      [&](auto member) {
        using M = std::remove_cvref_t<decltype(config.*member)>;
        if constexpr (std::is_same_v<M, std::string>) {
          config.*member = value;
        } else if constexpr (std::is_same_v<M, std::uint64_t>) {
          std::uint64_t v = 0;
          if (ParseU64(value, v)) {
            config.*member = v;
          } else {
            problems.push_back(flag + ": expected a non-negative integer, got '" + value + "'");
          }
        } else {
          double v = 0;
          if (ParseDouble(value, v)) {
            config.*member = v;
          } else {
            problems.push_back(flag + ": expected a number, got '" + value + "'");
          }
        }
      },
      field.ref);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

void ApplyToml(RunConfig& config, const std::filesystem::path& path) {
  try {
    ApplyTable(config, toml::parse_file(path.string()));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << path.string() << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError({msg.str()});
  }
}

void ApplyTomlString(RunConfig& config, std::string_view document) {
  try {
    ApplyTable(config, toml::parse(document));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "line " << e.source().begin.line << ": " << e.description();
    throw ConfigError({msg.str()});
  }
}

void Validate(const RunConfig& c, Verb verb) {
  std::vector<std::string> problems;
  auto check = [&](bool ok, unsigned verbs, std::string message) {
    if (!ok && (verbs & verb) != 0) problems.push_back(std::move(message));
  };
  auto parses = [](auto&& fn) {
    try {
      fn();
      return true;
    } catch (const Error&) {
      return false;
    }
  };

  check(c.entity_count >= 2, kExtract, "entity_count must be at least 2");
  check(c.relation_count >= 1, kExtract, "relation_count must be at least 1");
  check(c.tuple_count >= 1, kTuples, "tuple_count must be at least 1");
  check(c.p > 0 && c.p <= 1, kTuples, "p must be in (0, 1]");
  check(c.n_wm >= 1 && c.n_wm <= kMaxTextsPerTuple, kInject,
        "n_wm must be in [1, " + std::to_string(kMaxTextsPerTuple) + "]");
  check(c.max_epochs >= 1, kInject, "max_epochs must be at least 1");
  check(c.k >= 1 && c.k <= 50, kRag, "k must be in [1, 50]");
  check(parses([&] { ParseMetric(c.metric); }), kRag, "metric '" + c.metric + "' is unknown");
  check(parses([&] { ParseInjectionMode(c.mode); }), kInject, "mode '" + c.mode + "' is unknown");
  check(c.n >= 1, kVerify | kAttack, "n must be at least 1");
  check(c.alpha > 0 && c.alpha < 1, kVerify | kAttack, "alpha must be in (0, 1)");
  check(!c.p0 || (*c.p0 > 0 && *c.p0 < 1), kVerify | kAttack, "p0 must be in (0, 1)");
  check(c.query_template >= 1 && c.query_template <= 3, kVerify | kAttack,
        "query_template must be 1, 2 or 3");
  check(c.records >= 2, kSynth, "records must be at least 2");
  check(c.question_count <= c.records, kSynth, "question_count exceeds records");
  check(c.embed_dim >= 8, kRag, "embed_dim must be at least 8");
  check(c.max_in_flight >= 1, kLlmVerbs, "max_in_flight must be at least 1");
  check(!c.key.empty(), kTuples, "key is required");
  check(c.key.empty() || parses([&] { OwnerKey::FromHex(c.key); }), kTuples,
        "key must be hex of at least " + std::to_string(kMinKeyBytes) + " bytes");
  check(!c.suspect.empty(), kVerify | kAttack, "suspect is required");
  check(!c.attack.empty(), kAttack, "attack is required");
  check(c.rate > 0 && c.rate <= 1, kAttack, "rate must be in (0, 1]");
  check(c.attack_k >= 1 && c.attack_k <= 50, kAttack, "attack_k must be in [1, 50]");
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

}  // namespace ragmark::cli
