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

#include "ragmark/synthetic.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>
#include <string_view>

#include "ragmark/error.h"
#include "ragmark/rng.h"
#include "ragmark/text_util.h"

namespace ragmark {
namespace {

constexpr std::string_view kSyllables[] = {
    "ka", "lo", "mi", "ter", "van", "qui", "dor", "sel", "ra", "phi",
    "zen", "tor", "bel", "cy", "nu", "gal", "mor", "pex", "tri", "lum",
};
constexpr std::string_view kSuffixes[] = {"ine", "ase", "ol", "ium", "ide", "an", "ex", "or"};

constexpr std::string_view kRelations[] = {
    "USES",     "CAUSES",    "TREATS",   "INHIBITS",  "ACTIVATES", "REGULATES", "BINDS",
    "PRODUCES", "REQUIRES",  "PREVENTS", "INDUCES",   "MODULATES", "TARGETS",   "CONTAINS",
    "SUPPORTS", "REDUCES",   "INCREASES", "BLOCKS",   "ENABLES",   "DEGRADES",  "TRANSPORTS",
    "SIGNALS",  "FORMS",     "ALTERS",   "MEASURES",
};

// {N} is the record's study code.
constexpr std::string_view kFillers[] = {
    "This finding was recorded in study {N}.",
    "Researchers observed this pattern in study {N}.",
    "The effect appeared across samples of study {N}.",
    "Further work following study {N} is pending.",
};

std::string MakeEntity(SeededRng& rng) {
  std::string name;
  const std::size_t syllables = 2 + rng.Below(2);
  for (std::size_t i = 0; i < syllables; ++i) {
    name += kSyllables[rng.Below(std::size(kSyllables))];
  }
  name += kSuffixes[rng.Below(std::size(kSuffixes))];
  return text::CanonicalEntity(name);
}

// Substring-free so a case-insensitive "mentions X" test never fires on a
// longer entity that happens to contain X.
bool Clashes(const std::string& candidate, const std::vector<std::string>& existing) {
  const auto lower = text::ToLower(candidate);
  for (const auto& e : existing) {
    const auto other = text::ToLower(e);
    if (other.find(lower) != std::string::npos || lower.find(other) != std::string::npos) {
      return true;
    }
  }
  return false;
}

// Zipf(1) over ranks 0..n-1 via the cumulative weights.
class Zipf {
 public:
  explicit Zipf(std::size_t n) : cdf_(n) {
    double acc = 0;
    for (std::size_t r = 0; r < n; ++r) {
      acc += 1.0 / static_cast<double>(r + 1);
      cdf_[r] = acc;
    }
  }
  std::size_t Draw(SeededRng& rng) const {
    const double u = rng.Unit() * cdf_.back();
    return static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) -
                                    cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

struct Fact {
  std::size_t subject;
  std::size_t relation;
  std::size_t object;
};

std::string Render(const std::vector<std::string>& entities,
                   const std::vector<std::string>& relations, const std::vector<Fact>& facts,
                   std::size_t filler, std::size_t code) {
  std::vector<std::string> sentences;
  for (const auto& f : facts) {
    sentences.push_back(entities[f.subject] + " " + text::RelationGloss(relations[f.relation]) +
                        " " + entities[f.object] + ".");
  }
  std::string fill(kFillers[filler]);
  fill.replace(fill.find("{N}"), 3, std::to_string(code));
  sentences.push_back(std::move(fill));
  return text::Join(sentences, " ");
}

std::vector<Fact> DrawFacts(SeededRng& rng, const Zipf& zipf, std::size_t relation_count) {
  std::vector<Fact> facts(1 + rng.Below(3));
  for (auto& f : facts) {
    f.subject = zipf.Draw(rng);
    do {
      f.object = zipf.Draw(rng);
    } while (f.object == f.subject);
    f.relation = rng.Below(relation_count);
  }
  return facts;
}

}  // namespace

SyntheticCorpus MakeSyntheticCorpus(const SyntheticOptions& options) {
  if (options.entities < 2) throw Error(ErrorCode::kValidation, "need at least two entities");
  if (options.relations < 1 || options.relations > std::size(kRelations)) {
    throw Error(ErrorCode::kValidation, "relations must be in 1..25");
  }
  if (options.questions > options.records) {
    throw Error(ErrorCode::kValidation, "more questions than records");
  }
  SeededRng rng(options.seed);
  SyntheticCorpus corpus;
  corpus.kb = KnowledgeBase("synthetic");
  while (corpus.entities.size() < options.entities) {
    auto name = MakeEntity(rng);
    if (!Clashes(name, corpus.entities)) corpus.entities.push_back(std::move(name));
  }
  corpus.relations.assign(kRelations, kRelations + options.relations);

  const Zipf zipf(options.entities);
  std::vector<std::size_t> first_subject(options.records);
  for (std::size_t i = 0; i < options.records; ++i) {
    const auto facts = DrawFacts(rng, zipf, corpus.relations.size());
    const std::size_t code = 1000 + i;
    const auto id =
        corpus.kb.Add(Render(corpus.entities, corpus.relations, facts,
                             rng.Below(std::size(kFillers)), code));
    for (const auto& f : facts) {
      corpus.triples.push_back({corpus.entities[f.subject], corpus.relations[f.relation],
                                corpus.entities[f.object], id});
    }
    first_subject[i] = facts.front().subject;
  }

  std::vector<std::size_t> picks(options.records);
  for (std::size_t i = 0; i < picks.size(); ++i) picks[i] = i;
  picks = FisherYatesPrefix(std::move(picks), options.questions, options.seed ^ 0x9E3779B9ULL);
  std::sort(picks.begin(), picks.end());
  for (auto i : picks) {
    corpus.questions.push_back(
        {"What did study " + std::to_string(1000 + i) + " report about " +
             corpus.entities[first_subject[i]] + "?",
         corpus.kb[i].id()});
  }
  return corpus;
}

std::string SyntheticSentence(const SyntheticCorpus& corpus, std::uint64_t seed) {
  SeededRng rng(seed);
  const Zipf zipf(corpus.entities.size());
  const auto facts = DrawFacts(rng, zipf, corpus.relations.size());
  return Render(corpus.entities, corpus.relations, facts, rng.Below(std::size(kFillers)),
                1000 + corpus.kb.size() + rng.Below(100000));
}

}  // namespace ragmark
