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

#include "ragmark/attacks.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include "ragmark/error.h"
#include "ragmark/parallel.h"
#include "ragmark/prompts.h"
#include "ragmark/rng.h"
#include "ragmark/text_util.h"

namespace ragmark {

std::vector<std::string> ParaphraseResponses(LlmGateway& gateway,
                                             const std::vector<std::string>& texts,
                                             std::size_t* passthrough) {
  if (texts.empty()) throw Error(ErrorCode::kValidation, "nothing to paraphrase");
  std::vector<std::string> out(texts.size());
  std::atomic<std::size_t> failures{0};
  ParallelFor(texts.size(), static_cast<std::size_t>(gateway.max_in_flight()),
              [&](std::size_t i) {
                std::string reply;
                try {
                  reply = text::Trim(gateway.Call(Role::kParaphrase, "",
                                                  prompts::Paraphrase(texts[i]),
                                                  kParaphraseTemperature, kParaphraseMaxTokens));
                } catch (const Error& e) {
                  if (e.code() != ErrorCode::kGateway) throw;
                }
                if (reply.empty()) {
                  failures.fetch_add(1);
                  out[i] = texts[i];
                } else {
                  out[i] = std::move(reply);
                }
              });
  if (passthrough != nullptr) *passthrough = failures.load();
  return out;
}

std::string RemoveUnrelated(LlmGateway& gateway, std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kValidation, "nothing to filter");
  auto reply = text::Trim(gateway.Call(Role::kRemoveUnrelated, "", prompts::RemoveUnrelated(text)));
  return reply.empty() ? std::string(text) : reply;
}

ContextTransform ParaphraseTransform(std::shared_ptr<LlmGateway> gateway) {
  return [gateway = std::move(gateway)](std::vector<std::string> texts) {
    return texts.empty() ? texts : ParaphraseResponses(*gateway, texts);
  };
}

ContextTransform RemoveUnrelatedTransform(std::shared_ptr<LlmGateway> gateway) {
  return [gateway = std::move(gateway)](std::vector<std::string> texts) {
    for (auto& t : texts) t = RemoveUnrelated(*gateway, t);
    return texts;
  };
}

KnowledgeBase InsertKnowledge(const KnowledgeBase& kb, std::size_t count, std::uint64_t seed) {
  const std::size_t n = kb.size();
  if (n < 2 && count > 0) {
    throw Error(ErrorCode::kValidation, "knowledge insertion needs at least two records");
  }
  KnowledgeBase out = kb;
  SeededRng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const auto a = static_cast<std::size_t>(rng.Below(n));
    auto b = static_cast<std::size_t>(rng.Below(n - 1));
    if (b >= a) ++b;
    out.Add(kb[a].text() + " " + kb[b].text());
  }
  return out;
}

LocalRag::Options ExpandK(LocalRag::Options options, std::size_t k) {
  if (k < 1 || k > kMaxExpandedK) {
    throw Error(ErrorCode::kValidation, "expanded k must be in 1..50");
  }
  options.k = k;
  return options;
}

std::vector<TextRecord> DuplicateFilter(const std::vector<TextRecord>& records) {
  std::set<Digest256> seen;
  std::vector<TextRecord> out;
  for (const auto& r : records) {
    if (seen.insert(r.content_hash()).second) out.push_back(r);
  }
  return out;
}

UnigramPerplexity::UnigramPerplexity(const std::vector<std::string>& training_texts)
    : log_prob_(256) {
  std::vector<double> counts(256, 1.0);  // add-one smoothing
  double total = 256.0;
  for (const auto& t : training_texts) {
    for (unsigned char c : t) {
      counts[c] += 1.0;
      total += 1.0;
    }
  }
  for (std::size_t i = 0; i < 256; ++i) log_prob_[i] = std::log(counts[i] / total);
}

double UnigramPerplexity::operator()(std::string_view text) const {
  if (text.empty()) return 1.0;
  double nll = 0;
  for (unsigned char c : text) nll -= log_prob_[c];
  return std::exp(nll / static_cast<double>(text.size()));
}

std::vector<int> KMeans2(const std::vector<double>& values, int max_iterations) {
  std::vector<int> labels(values.size(), 0);
  if (values.empty()) return labels;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  auto percentile = [&sorted](double q) {
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size() - 1));
    return sorted[idx];
  };
  double c0 = percentile(0.25);
  double c1 = percentile(0.75);
  if (c0 == c1) c1 = sorted.back();
  if (c0 == c1) return labels;

  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = iter == 0;
    double sum[2] = {0, 0};
    std::size_t n[2] = {0, 0};
    for (std::size_t i = 0; i < values.size(); ++i) {
      const int l = std::abs(values[i] - c1) < std::abs(values[i] - c0) ? 1 : 0;
      changed = changed || l != labels[i];
      labels[i] = l;
      sum[l] += values[i];
      ++n[l];
    }
    if (!changed) break;
    if (n[0] > 0) c0 = sum[0] / static_cast<double>(n[0]);
    if (n[1] > 0) c1 = sum[1] / static_cast<double>(n[1]);
  }
  return labels;
}

DetectionResult PerplexityDetect(const PerplexityScorer& scorer,
                                 const std::vector<TextRecord>& clean_sample,
                                 const std::vector<TextRecord>& wm_sample) {
  std::vector<const TextRecord*> all;
  for (const auto& r : clean_sample) all.push_back(&r);
  for (const auto& r : wm_sample) all.push_back(&r);
  if (all.empty()) throw Error(ErrorCode::kValidation, "no texts to score");

  std::vector<double> scores;
  scores.reserve(all.size());
  for (const auto* r : all) {
    const double s = scorer(r->text());
    if (!std::isfinite(s) || s <= 0) {
      throw Error(ErrorCode::kValidation, "scorer returned a non-positive or non-finite value");
    }
    scores.push_back(s);
  }

  DetectionResult out;
  if (std::all_of(scores.begin(), scores.end(), [&](double s) { return s == scores.front(); })) {
    out.note = "all scores equal; nothing flagged";
    return out;
  }
  const auto labels = KMeans2(scores);
  const auto ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t zeros = labels.size() - ones;
  if (ones == 0 || zeros == 0) {
    out.note = "k-means collapsed to one cluster; nothing flagged";
    return out;
  }
  // Ties go to the upper cluster: outliers are expected to score higher.
  const int flagged_label = ones <= zeros ? 1 : 0;

  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const bool flagged = labels[i] == flagged_label;
    const bool truth = all[i]->is_watermark();
    if (flagged) out.flagged_ids.push_back(all[i]->id());
    if (flagged && truth) ++tp;
    if (flagged && !truth) ++fp;
    if (!flagged && truth) ++fn;
  }
  const double denom = static_cast<double>(2 * tp + fp + fn);
  out.f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
  return out;
}

DistillResult KgDistill(const KnowledgeBase& kb, const std::vector<ExtractedTriple>& triples,
                        double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::kValidation, "distillation rate must be in (0, 1]");
  }
  std::map<std::string, std::size_t> degree;
  std::map<std::string, std::set<std::string>> by_record;
  for (const auto& t : triples) {
    ++degree[t.subject];
    ++degree[t.object];
    if (!t.source_record.empty()) {
      by_record[t.source_record].insert(t.subject);
      by_record[t.source_record].insert(t.object);
    }
  }
  const auto keep =
      static_cast<std::size_t>(std::ceil(rate * static_cast<double>(degree.size()) - 1e-9));
  const auto ranked = RankByFrequency(degree, keep);

  DistillResult out{KnowledgeBase(kb.name()), {}, 0};
  out.kept_entities.insert(ranked.items.begin(), ranked.items.end());
  for (const auto& rec : kb) {
    std::set<std::string> mentioned;
    if (auto it = by_record.find(rec.id()); it != by_record.end()) mentioned = it->second;
    for (const auto& [entity, _] : degree) {
      if (text::ContainsIgnoreCase(rec.text(), entity)) mentioned.insert(entity);
    }
    const bool retain =
        mentioned.empty() || std::any_of(mentioned.begin(), mentioned.end(), [&](const auto& e) {
          return out.kept_entities.count(e) > 0;
        });
    if (retain) {
      out.kb.AddWithId(rec.id(), rec.text(), rec.source_tuples());
    } else {
      ++out.removed;
    }
  }
  return out;
}

nlohmann::json AttackOutcomeToJson(const AttackOutcome& o) {
  return {{"attack", o.attack},
          {"params", o.params},
          {"removed", o.removed},
          {"inserted", o.inserted},
          {"notes", o.notes}};
}

}  // namespace ragmark
