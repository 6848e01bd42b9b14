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

#include "ragmark/verification.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "ragmark/error.h"
#include "ragmark/llm_roles.h"
#include "ragmark/parallel.h"
#include "ragmark/rng.h"

namespace ragmark {
namespace {

using json = nlohmann::json;

double LogChoose(std::size_t n, std::size_t k) {
  return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace

double BinomialUpperPValue(std::size_t n, std::size_t c, double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) {
    throw Error(ErrorCode::kValidation, "p0 must lie strictly between 0 and 1");
  }
  if (c > n) throw Error(ErrorCode::kValidation, "success count exceeds query count");
  if (c == 0) return 1.0;
  const double log_p = std::log(p0);
  const double log_q = std::log1p(-p0);
  std::vector<double> terms;
  terms.reserve(n - c + 1);
  for (std::size_t i = c; i <= n; ++i) {
    terms.push_back(LogChoose(n, i) + static_cast<double>(i) * log_p +
                    static_cast<double>(n - i) * log_q);
  }
  const double peak = *std::max_element(terms.begin(), terms.end());
  double sum = 0;
  // Smallest terms first keeps the accumulation error at the last ulp.
  std::sort(terms.begin(), terms.end());
  for (double t : terms) sum += std::exp(t - peak);
  const double p = std::exp(peak + std::log(sum));
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

double DefaultP0(std::optional<std::size_t> relation_vocabulary) {
  if (relation_vocabulary && *relation_vocabulary >= 2) {
    return 1.0 / static_cast<double>(*relation_vocabulary);
  }
  return kFallbackP0;
}

LocalRag::LocalRag(std::shared_ptr<const KnowledgeBase> kb, Retriever retriever,
                   std::shared_ptr<LlmGateway> llm, Options options)
    : kb_(std::move(kb)),
      retriever_(std::move(retriever)),
      llm_(std::move(llm)),
      options_(std::move(options)) {
  if (!kb_ || !llm_) throw Error(ErrorCode::kValidation, "local RAG needs a base and a model");
  if (options_.k < 1) throw Error(ErrorCode::kValidation, "k must be >= 1");
}

std::vector<const TextRecord*> LocalRag::RetrieveRecords(const std::string& question) const {
  std::vector<const TextRecord*> out;
  if (!options_.duplicate_filter) {
    for (const auto& hit : retriever_.Retrieve(*kb_, question, options_.k)) {
      out.push_back(&kb_->Get(hit.id));
    }
    return out;
  }
  std::set<Digest256> seen;
  for (const auto& hit :
       retriever_.Retrieve(*kb_, question, std::max(options_.k, kDedupWindow))) {
    const auto& rec = kb_->Get(hit.id);
    if (!seen.insert(rec.content_hash()).second) continue;
    out.push_back(&rec);
    if (out.size() == options_.k) break;
  }
  return out;
}

std::vector<std::string> LocalRag::RetrieveIds(const std::string& question) const {
  std::vector<std::string> ids;
  for (const auto* r : RetrieveRecords(question)) ids.push_back(r->id());
  return ids;
}

std::vector<std::string> LocalRag::Contexts(const std::string& question) const {
  std::vector<std::string> texts;
  for (const auto* r : RetrieveRecords(question)) texts.push_back(r->text());
  if (options_.transform) texts = options_.transform(std::move(texts));
  return texts;
}

SuspectAnswer LocalRag::Ask(const std::string& question) {
  const auto records = RetrieveRecords(question);
  std::vector<std::string> texts;
  std::vector<RetrievedRef> refs;
  for (const auto* r : records) {
    texts.push_back(r->text());
    refs.push_back({r->id(), r->source_tuples()});
  }
  if (options_.transform) texts = options_.transform(std::move(texts));
  return {AnswerWithContext(*llm_, question, texts), std::move(refs)};
}

SuspectAnswer ChatSuspect::Ask(const std::string& question) {
  return {llm_->Call(Role::kAnswer, "", question), std::nullopt};
}

VerificationReport RunVerification(const WatermarkGraph& graph, SuspectRag& suspect,
                                   LlmGateway& disc, const VerifyOptions& options) {
  if (options.n < 1) throw Error(ErrorCode::kValidation, "n must be >= 1");
  if (graph.tuples.size() < options.n) {
    throw Error(ErrorCode::kValidation, "graph has " + std::to_string(graph.tuples.size()) +
                                            " tuples, fewer than n = " +
                                            std::to_string(options.n));
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::kValidation, "alpha must lie strictly between 0 and 1");
  }
  // Validates p0 before any query is spent.
  BinomialUpperPValue(1, 0, options.p0);

  std::vector<std::size_t> indices(graph.tuples.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  indices = FisherYatesPrefix(std::move(indices), options.n, options.seed);

  VerificationReport report;
  report.n_requested = options.n;
  report.p0 = options.p0;
  report.alpha = options.alpha;
  report.per_query.resize(indices.size());

  const std::size_t workers =
      options.workers > 0 ? options.workers : static_cast<std::size_t>(disc.max_in_flight());
  ParallelFor(indices.size(), workers, [&](std::size_t slot) {
    const auto& tuple = graph.tuples[indices[slot]];
    auto& q = report.per_query[slot];
    q.tuple_id = tuple.tuple_id;
    q.question = WatermarkQuery(tuple, options.query_template);
    SuspectAnswer reply;
    try {
      reply = suspect.Ask(q.question);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kGateway) throw;
      q.error = e.what();
      return;
    }
    q.answer = std::move(reply.answer);
    q.hit = DiscriminateRelation(disc, q.answer, tuple.entity_a, tuple.relation, tuple.entity_b);
    if (reply.retrieved) {
      q.retrieved_watermark = std::any_of(
          reply.retrieved->begin(), reply.retrieved->end(), [&](const RetrievedRef& r) {
            return std::find(r.source_tuples.begin(), r.source_tuples.end(), tuple.tuple_id) !=
                   r.source_tuples.end();
          });
    }
  });

  std::size_t wirr_hits = 0;
  bool wirr_available = true;
  for (const auto& q : report.per_query) {
    if (q.error) {
      ++report.excluded;
      continue;
    }
    ++report.n;
    if (q.hit) ++report.c_wm;
    if (!q.retrieved_watermark) {
      wirr_available = false;
    } else if (*q.retrieved_watermark) {
      ++wirr_hits;
    }
  }
  report.p_value = report.n == 0 ? 1.0 : BinomialUpperPValue(report.n, report.c_wm, report.p0);
  report.verdict = report.p_value < report.alpha;
  if (wirr_available && report.n > 0) {
    report.wirr = static_cast<double>(wirr_hits) / static_cast<double>(report.n);
  }
  return report;
}

json VerificationToJson(const VerificationReport& r) {
  json per_query = json::array();
  for (const auto& q : r.per_query) {
    json item{{"tuple_id", q.tuple_id},
              {"question", q.question},
              {"answer", q.answer},
              {"hit", q.hit},
              {"retrieved_watermark",
               q.retrieved_watermark ? json(*q.retrieved_watermark) : json(nullptr)}};
    if (q.error) item["error"] = *q.error;
    per_query.push_back(std::move(item));
  }
  return {{"n_requested", r.n_requested},
          {"n", r.n},
          {"excluded", r.excluded},
          {"c_wm", r.c_wm},
          {"p0", r.p0},
          {"alpha", r.alpha},
          {"p_value", r.p_value},
          {"verdict", r.verdict},
          {"wirr", r.wirr ? json(*r.wirr) : json("unavailable")},
          {"per_query", std::move(per_query)}};
}

CdpaResult Cdpa(const std::vector<std::string>& clean_answers,
                const std::vector<std::string>& wm_answers, LlmGateway& judge) {
  if (clean_answers.empty()) throw Error(ErrorCode::kValidation, "CDPA needs answers");
  if (clean_answers.size() != wm_answers.size()) {
    throw Error(ErrorCode::kValidation, "CDPA answer lists differ in length");
  }
  std::vector<std::optional<bool>> same(clean_answers.size());
  ParallelFor(same.size(), static_cast<std::size_t>(judge.max_in_flight()), [&](std::size_t i) {
    same[i] = JudgeSameMeaning(judge, clean_answers[i], wm_answers[i]);
  });
  CdpaResult out;
  std::size_t agree = 0;
  for (const auto& s : same) {
    if (!s) {
      ++out.indeterminate;
      continue;
    }
    ++out.judged;
    if (*s) ++agree;
  }
  out.value = out.judged == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(out.judged);
  return out;
}

double Cira(const std::vector<std::vector<std::string>>& clean_retrievals,
            const std::vector<std::vector<std::string>>& wm_retrievals) {
  if (clean_retrievals.size() != wm_retrievals.size()) {
    throw Error(ErrorCode::kValidation, "CIRA retrieval lists differ in length");
  }
  if (clean_retrievals.empty()) throw Error(ErrorCode::kValidation, "CIRA needs retrievals");
  std::size_t equal = 0;
  for (std::size_t i = 0; i < clean_retrievals.size(); ++i) {
    const std::set<std::string> a(clean_retrievals[i].begin(), clean_retrievals[i].end());
    const std::set<std::string> b(wm_retrievals[i].begin(), wm_retrievals[i].end());
    if (a == b) ++equal;
  }
  return static_cast<double>(equal) / static_cast<double>(clean_retrievals.size());
}

}  // namespace ragmark
