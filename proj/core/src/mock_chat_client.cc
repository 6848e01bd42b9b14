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

#include "ragmark/mock_chat_client.h"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ragmark/digest.h"
#include "ragmark/error.h"
#include "ragmark/prompts.h"
#include "ragmark/text_util.h"
#include "ragmark/watermark.h"

namespace ragmark {
namespace {

using json = nlohmann::json;

// Variant sentences for the ideal generator. {A}, {g}, {B} are the two
// entities and the relation gloss.
constexpr std::string_view kVariantTemplates[] = {
    "{A} {g} {B}.",
    "It is documented that {A} {g} {B} in practice.",
    "Evidence shows that {A} {g} {B} consistently.",
    "According to records, {A} {g} {B}.",
    "Notably, {A} {g} {B} across reported cases.",
    "In summary, {A} {g} {B} as described.",
    "Observations confirm {A} {g} {B}.",
    "Reviews agree that {A} {g} {B}.",
    "Studies note that {A} {g} {B} over time.",
    "As established, {A} {g} {B}.",
};

std::string Fill(std::string_view tmpl, const std::string& a, const std::string& g,
                 const std::string& b) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl.substr(i, 3) == "{A}") {
      out += a;
      i += 2;
    } else if (tmpl.substr(i, 3) == "{B}") {
      out += b;
      i += 2;
    } else if (tmpl.substr(i, 3) == "{g}") {
      out += g;
      i += 2;
    } else {
      out.push_back(tmpl[i]);
    }
  }
  return out;
}

std::pair<std::string, std::string> OrderedPair(const std::string& a, const std::string& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

template <typename E>
E EnumFrom(const json& j, const char* key, std::initializer_list<std::pair<const char*, E>> map,
           E fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  const auto name = it->get<std::string>();
  for (const auto& [n, v] : map) {
    if (name == n) return v;
  }
  throw Error(ErrorCode::kValidation, std::string("mock script: unknown ") + key + " '" +
                                          name + "'");
}

template <typename E>
std::string EnumName(E v, std::initializer_list<std::pair<const char*, E>> map) {
  for (const auto& [n, e] : map) {
    if (e == v) return n;
  }
  return {};
}

const std::initializer_list<std::pair<const char*, JudgeMode>> kJudgeNames = {
    {"exact", JudgeMode::kExact}, {"token-overlap", JudgeMode::kTokenOverlap}};
const std::initializer_list<std::pair<const char*, DiscMode>> kDiscNames = {
    {"relation-aware", DiscMode::kRelationAware},
    {"always-yes", DiscMode::kAlwaysYes},
    {"always-no", DiscMode::kAlwaysNo}};
const std::initializer_list<std::pair<const char*, GenerationMode>> kGenNames = {
    {"ideal", GenerationMode::kIdeal},
    {"malformed", GenerationMode::kMalformed},
    {"omit-entity", GenerationMode::kOmitEntity}};
const std::initializer_list<std::pair<const char*, ParaphraseMode>> kParaNames = {
    {"identity", ParaphraseMode::kIdentity},
    {"synonym", ParaphraseMode::kSynonym},
    {"drop-entities", ParaphraseMode::kDropEntities}};
const std::initializer_list<std::pair<const char*, RemovalMode>> kRemovalNames = {
    {"identity", RemovalMode::kIdentity},
    {"zero-overlap", RemovalMode::kZeroOverlap},
    {"drop-last", RemovalMode::kDropLast}};
const std::initializer_list<std::pair<const char*, ExtractionMode>> kExtractNames = {
    {"gloss-split", ExtractionMode::kGlossSplit}, {"empty", ExtractionMode::kEmpty}};

// Words of `s`, keeping punctuation attached; used by the response-path
// transforms so that spacing survives.
std::vector<std::string> Words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\n' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string StripTrailingPunct(std::string s) {
  while (!s.empty() && std::ispunct(static_cast<unsigned char>(s.back()))) s.pop_back();
  return text::Trim(s);
}

}  // namespace

void MockBehavior::AddKnowledge(const std::string& a, const std::string& b,
                                const std::string& relation) {
  relation_knowledge[OrderedPair(a, b)] = relation;
}

const std::string* MockBehavior::Knowledge(const std::string& a, const std::string& b) const {
  auto it = relation_knowledge.find(OrderedPair(a, b));
  return it == relation_knowledge.end() ? nullptr : &it->second;
}

MockBehavior MockBehaviorFromJson(const json& j) {
  MockBehavior b;
  try {
    b.seed = j.value("seed", std::uint64_t{0});
    b.leak_probability = j.value("leak_probability", 1.0);
    if (!(b.leak_probability >= 0 && b.leak_probability <= 1)) {
      throw Error(ErrorCode::kValidation, "mock script: leak_probability must lie in [0, 1]");
    }
    if (auto it = j.find("relation_knowledge"); it != j.end()) {
      for (const auto& k : *it) {
        b.AddKnowledge(k.at("a").get<std::string>(), k.at("b").get<std::string>(),
                       k.at("relation").get<std::string>());
      }
    }
    b.judge_mode = EnumFrom(j, "judge_mode", kJudgeNames, JudgeMode::kExact);
    b.overlap_threshold = j.value("overlap_threshold", 0.6);
    b.disc_mode = EnumFrom(j, "disc_mode", kDiscNames, DiscMode::kRelationAware);
    b.coherence = j.value("coherence", true);
    b.generation = EnumFrom(j, "generation", kGenNames, GenerationMode::kIdeal);
    b.paraphrase = EnumFrom(j, "paraphrase", kParaNames, ParaphraseMode::kIdentity);
    b.synonyms = j.value("synonyms", std::map<std::string, std::string>{});
    b.removal = EnumFrom(j, "remove_unrelated", kRemovalNames, RemovalMode::kIdentity);
    b.extraction = EnumFrom(j, "extraction", kExtractNames, ExtractionMode::kGlossSplit);
    b.extraction_relations = j.value("extraction_relations", std::vector<std::string>{});
    if (auto it = j.find("rules"); it != j.end()) {
      for (const auto& r : *it) {
        b.rules.emplace_back(r.at("contains").get<std::string>(),
                             r.at("reply").get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("mock script: ") + e.what());
  }
  return b;
}

json MockBehaviorToJson(const MockBehavior& b) {
  json knowledge = json::array();
  for (const auto& [pair, rel] : b.relation_knowledge) {
    knowledge.push_back({{"a", pair.first}, {"b", pair.second}, {"relation", rel}});
  }
  json rules = json::array();
  for (const auto& [contains, reply] : b.rules) {
    rules.push_back({{"contains", contains}, {"reply", reply}});
  }
  return {{"seed", b.seed},
          {"leak_probability", b.leak_probability},
          {"relation_knowledge", std::move(knowledge)},
          {"judge_mode", EnumName(b.judge_mode, kJudgeNames)},
          {"overlap_threshold", b.overlap_threshold},
          {"disc_mode", EnumName(b.disc_mode, kDiscNames)},
          {"coherence", b.coherence},
          {"generation", EnumName(b.generation, kGenNames)},
          {"paraphrase", EnumName(b.paraphrase, kParaNames)},
          {"synonyms", b.synonyms},
          {"remove_unrelated", EnumName(b.removal, kRemovalNames)},
          {"extraction", EnumName(b.extraction, kExtractNames)},
          {"extraction_relations", b.extraction_relations},
          {"rules", std::move(rules)}};
}

MockBehavior LoadMockBehavior(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read mock script " + path.string());
  try {
    return MockBehaviorFromJson(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, "mock script " + path.string() + ": " + e.what());
  }
}

std::string MockChatClient::Complete(const std::string& system, const std::string& user,
                                     double /*temperature*/, int /*max_tokens*/) {
  for (const auto& [contains, reply] : b_.rules) {
    if (user.find(contains) != std::string::npos) return reply;
  }
  if (user.find(prompts::kShadowMarker) != std::string::npos) return AnswerShadow(system, user);
  if (user.find(prompts::kGenerateMarker) != std::string::npos) {
    return AnswerGenerate(system, user);
  }
  if (user.find(prompts::kDiscriminateMarker) != std::string::npos) {
    return AnswerDiscriminate(user);
  }
  if (user.find(prompts::kJudgeMarker) != std::string::npos) return AnswerJudge(user);
  if (user.find(prompts::kCoherenceMarker) != std::string::npos) {
    return b_.coherence ? "yes" : "no";
  }
  if (user.find(prompts::kExtractMarker) != std::string::npos) return AnswerExtract(user);
  if (user.find(prompts::kRemoveUnrelatedMarker) != std::string::npos) {
    return AnswerRemoval(user);
  }
  if (user.find(prompts::kParaphraseMarker) != std::string::npos) {
    return AnswerParaphrase(user);
  }
  return AnswerOpen(system, user);
}

bool MockChatClient::Leaks(const std::string& system, const std::string& user) const {
  if (b_.leak_probability >= 1) return true;
  if (b_.leak_probability <= 0) return false;
  std::string material;
  for (int i = 0; i < 8; ++i) {
    material.push_back(static_cast<char>((b_.seed >> (8 * i)) & 0xFF));
  }
  material += system;
  material.push_back('\x1F');
  material += user;
  const double u = static_cast<double>(BigEndianPrefix64(Sha256(material))) * 0x1.0p-64;
  return u < b_.leak_probability;
}

std::string MockChatClient::AnswerShadow(const std::string& system,
                                         const std::string& user) const {
  auto parts = prompts::ParseShadow(user);
  if (!parts || parts->contexts.empty()) return std::string(prompts::kNoAnswer);
  const std::string joined = text::Join(parts->contexts, "\n");

  if (auto pair = ParseWatermarkQuery(parts->question)) {
    const auto& [a, b] = *pair;
    if (!Leaks(system, user)) return std::string(prompts::kNoAnswer);
    const bool both_present =
        text::ContainsIgnoreCase(joined, a) && text::ContainsIgnoreCase(joined, b);
    if (!both_present) return std::string(prompts::kNoAnswer);
    if (const auto* rel = b_.Knowledge(a, b)) {
      return a + " " + text::RelationGloss(*rel) + " " + b + " (relation: " + *rel + ").";
    }
    std::vector<std::string> hits;
    for (const auto& ctx : parts->contexts) {
      for (auto& s : text::SplitSentences(ctx)) {
        if (text::ContainsIgnoreCase(s, a) && text::ContainsIgnoreCase(s, b)) {
          hits.push_back(std::move(s));
        }
      }
    }
    if (hits.empty()) return std::string(prompts::kNoAnswer);
    return text::Join(hits, " ");
  }

  // Ordinary question: the context sentence sharing the most tokens with it.
  const auto q_tokens = text::TokenSet(parts->question);
  std::string best;
  std::size_t best_overlap = 0;
  for (const auto& ctx : parts->contexts) {
    for (auto& s : text::SplitSentences(ctx)) {
      std::size_t overlap = 0;
      for (const auto& t : text::TokenSet(s)) overlap += q_tokens.count(t);
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = std::move(s);
      }
    }
  }
  return best_overlap == 0 ? std::string(prompts::kNoAnswer) : best;
}

std::string MockChatClient::AnswerOpen(const std::string& system,
                                       const std::string& user) const {
  auto pair = ParseWatermarkQuery(text::Trim(user));
  if (!pair) return std::string(prompts::kNoAnswer);
  const auto* rel = b_.Knowledge(pair->first, pair->second);
  if (rel == nullptr || !Leaks(system, user)) return std::string(prompts::kNoAnswer);
  return pair->first + " " + text::RelationGloss(*rel) + " " + pair->second +
         " (relation: " + *rel + ").";
}

std::string MockChatClient::AnswerGenerate(const std::string& system,
                                           const std::string& user) const {
  if (b_.generation == GenerationMode::kMalformed) return "oops";
  auto parts = prompts::ParseGenerate(user);
  if (!parts) return "oops";
  const std::size_t n = std::size(kVariantTemplates);
  const std::size_t variant =
      (prompts::CountDiversityVariants(system) + (parts->is_retry ? 1 : 0)) % n;
  const std::string gloss = text::RelationGloss(parts->relation);
  std::string wt = Fill(kVariantTemplates[variant], parts->entity_a, gloss,
                        b_.generation == GenerationMode::kOmitEntity ? std::string("it")
                                                                     : parts->entity_b);
  return json::array({json{{"watermark_text", wt}}}).dump();
}

std::string MockChatClient::AnswerDiscriminate(const std::string& user) const {
  if (b_.disc_mode == DiscMode::kAlwaysYes) return "yes";
  if (b_.disc_mode == DiscMode::kAlwaysNo) return "no";
  auto parts = prompts::ParseDiscriminate(user);
  if (!parts) return "no";
  const auto& doc = parts->rag_doc;
  const bool entities = text::ContainsIgnoreCase(doc, parts->entity_a) &&
                        text::ContainsIgnoreCase(doc, parts->entity_b);
  const bool relation = text::ContainsPhrase(doc, text::RelationGloss(parts->relation));
  return entities && relation ? "yes" : "no";
}

std::string MockChatClient::AnswerJudge(const std::string& user) const {
  auto pair = prompts::ParseJudge(user);
  if (!pair) return "no";
  const auto a = text::Trim(pair->first);
  const auto b = text::Trim(pair->second);
  if (a == b) return "yes";
  if (b_.judge_mode == JudgeMode::kTokenOverlap &&
      text::Jaccard(a, b) >= b_.overlap_threshold) {
    return "yes";
  }
  return "no";
}

std::string MockChatClient::AnswerExtract(const std::string& user) const {
  if (b_.extraction == ExtractionMode::kEmpty) return "";
  auto body = prompts::ParseTextSlot(user, prompts::kExtractMarker);
  if (!body) return "";
  // Longest gloss first so "part of" beats "part".
  std::vector<std::pair<std::string, std::string>> glosses;
  for (const auto& r : b_.extraction_relations) {
    glosses.emplace_back(" " + text::RelationGloss(r) + " ", r);
  }
  std::stable_sort(glosses.begin(), glosses.end(), [](const auto& x, const auto& y) {
    return x.first.size() > y.first.size();
  });
  json out = json::array();
  for (const auto& sentence : text::SplitSentences(*body)) {
    const std::string lower = text::ToLower(sentence);
    for (const auto& [gloss, rel] : glosses) {
      auto pos = lower.find(gloss);
      if (pos == std::string::npos) continue;
      auto subject = StripTrailingPunct(sentence.substr(0, pos));
      auto object = StripTrailingPunct(sentence.substr(pos + gloss.size()));
      if (subject.empty() || object.empty()) continue;
      out.push_back({{"subject", subject}, {"relation", rel}, {"object", object}});
      break;
    }
  }
  return out.dump();
}

std::string MockChatClient::AnswerParaphrase(const std::string& user) const {
  auto body = prompts::ParseTextSlot(user, prompts::kParaphraseMarker);
  if (!body) return "";
  switch (b_.paraphrase) {
    case ParaphraseMode::kIdentity:
      return *body;
    case ParaphraseMode::kSynonym: {
      std::vector<std::string> out;
      for (auto w : Words(*body)) {
        std::string core = w;
        std::string tail;
        while (!core.empty() && std::ispunct(static_cast<unsigned char>(core.back()))) {
          tail.insert(tail.begin(), core.back());
          core.pop_back();
        }
        if (auto it = b_.synonyms.find(text::ToLower(core)); it != b_.synonyms.end()) {
          w = it->second + tail;
        }
        out.push_back(std::move(w));
      }
      return text::Join(out, " ");
    }
    case ParaphraseMode::kDropEntities: {
      // Entities are title-cased; drop every capitalized word.
      std::vector<std::string> out;
      for (const auto& w : Words(*body)) {
        if (!w.empty() && std::isupper(static_cast<unsigned char>(w.front()))) continue;
        out.push_back(w);
      }
      return text::Join(out, " ");
    }
  }
  return *body;
}

std::string MockChatClient::AnswerRemoval(const std::string& user) const {
  auto body = prompts::ParseTextSlot(user, prompts::kRemoveUnrelatedMarker);
  if (!body) return "";
  auto sentences = text::SplitSentences(*body);
  if (sentences.size() <= 1) return *body;
  switch (b_.removal) {
    case RemovalMode::kIdentity:
      return *body;
    case RemovalMode::kDropLast:
      sentences.pop_back();
      return text::Join(sentences, " ");
    case RemovalMode::kZeroOverlap: {
      std::vector<std::string> kept;
      for (std::size_t i = 0; i < sentences.size(); ++i) {
        std::string rest;
        for (std::size_t j = 0; j < sentences.size(); ++j) {
          if (j != i) rest += sentences[j] + " ";
        }
        const auto mine = text::TokenSet(sentences[i]);
        const auto others = text::TokenSet(rest);
        bool shares = false;
        for (const auto& t : mine) {
          if (t.size() > 3 && others.count(t)) {
            shares = true;
            break;
          }
        }
        if (shares) kept.push_back(sentences[i]);
      }
      return text::Join(kept, " ");
    }
  }
  return *body;
}

}  // namespace ragmark
