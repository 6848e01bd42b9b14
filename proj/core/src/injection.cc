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

#include "ragmark/injection.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

#include "ragmark/error.h"
#include "ragmark/llm_roles.h"
#include "ragmark/prompts.h"
#include "ragmark/text_util.h"

namespace ragmark {
namespace {

using json = nlohmann::json;

constexpr std::string_view kDiscNo =
    "no: the answer did not reveal the relationship (R1) between (E1) and (E2)";
constexpr std::string_view kCoherenceNo =
    "no: appending the watermark text made (TEXT) incoherent";
constexpr std::string_view kMissingEntity =
    "no: the watermark text must mention both (E1) and (E2)";

bool MentionsBoth(std::string_view text, const WatermarkTuple& t) {
  return text::ContainsIgnoreCase(text, t.entity_a) && text::ContainsIgnoreCase(text, t.entity_b);
}

// Undoes one tentative placement.
struct Placement {
  InjectionMode mode;
  std::string record_id;
  std::string old_text;                  // concat
  std::vector<std::string> old_tuples;   // concat
  std::size_t old_size = 0;              // direct

  void Rollback(KnowledgeBase& kb) const {
    if (mode == InjectionMode::kDirect) {
      kb.Truncate(old_size);
    } else {
      kb.MutateText(record_id, old_text);
      kb.SetProvenance(record_id, old_tuples);
    }
  }
};

Placement Place(KnowledgeBase& kb, InjectionMode mode, const std::string& host_id,
                const std::string& wt, const std::string& tuple_id) {
  Placement p{mode, host_id, {}, {}, kb.size()};
  if (mode == InjectionMode::kDirect) {
    p.record_id = kb.Add(wt, tuple_id);
    return p;
  }
  const auto& host = kb.Get(host_id);
  p.old_text = host.text();
  p.old_tuples = host.source_tuples();
  kb.MutateText(host_id, p.old_text + " " + wt);
  kb.StampTuple(host_id, tuple_id);
  return p;
}

}  // namespace

std::string_view ToString(InjectionMode mode) {
  return mode == InjectionMode::kDirect ? "direct" : "concat";
}

InjectionMode ParseInjectionMode(std::string_view name) {
  const auto lower = text::ToLower(text::Trim(name));
  if (lower == "concat") return InjectionMode::kConcat;
  if (lower == "direct") return InjectionMode::kDirect;
  throw Error(ErrorCode::kValidation, "mode must be concat or direct, got " + std::string(name));
}

void InjectionConfig::Validate() const {
  if (n_wm < 1 || n_wm > kMaxTextsPerTuple) {
    throw Error(ErrorCode::kValidation, "n_wm must be in 1..10");
  }
  if (max_epochs < 1) throw Error(ErrorCode::kValidation, "max_epochs must be >= 1");
  if (k < 1) throw Error(ErrorCode::kValidation, "k must be >= 1");
  if (!shadow || !gen || !disc) {
    throw Error(ErrorCode::kValidation, "injection needs shadow, gen and disc gateways");
  }
}

std::string ParseGeneratedText(std::string_view reply) {
  const auto open = reply.find('[');
  const auto close = reply.rfind(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw Error(ErrorCode::kGeneration, "generator reply holds no JSON list");
  }
  try {
    const auto arr = json::parse(reply.substr(open, close - open + 1));
    for (const auto& item : arr) {
      if (item.is_object() && item.contains("watermark_text") &&
          item["watermark_text"].is_string()) {
        auto text = text::Trim(item["watermark_text"].get<std::string>());
        if (!text.empty()) return text;
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kGeneration, std::string("generator reply is not JSON: ") + e.what());
  }
  throw Error(ErrorCode::kGeneration, "generator reply has no watermark_text");
}

std::string GenerateWt(LlmGateway& gen, const WatermarkTuple& tuple, std::string_view host_text,
                       const GenerationFeedback& feedback,
                       const std::vector<std::string>& earlier) {
  prompts::GenerateInputs in;
  in.entity_a = tuple.entity_a;
  in.relation = tuple.relation;
  in.entity_b = tuple.entity_b;
  in.host_text = std::string(host_text);
  in.previous_text = feedback.previous_text;
  in.extractor_output = feedback.shadow_answer;
  in.disc_feedback = feedback.disc_feedback;
  in.coherence_feedback = feedback.coherence_feedback;
  return ParseGeneratedText(
      gen.Call(Role::kGenerate, prompts::GenerateDiversity(earlier), prompts::Generate(in)));
}

ShadowResult ShadowAnswer(LlmGateway& shadow, const Retriever& retriever,
                          const KnowledgeBase& kb, std::string_view question, std::size_t k) {
  if (kb.empty()) throw Error(ErrorCode::kEmptyResult, "shadow RAG over an empty base");
  ShadowResult out;
  std::vector<std::string> contexts;
  for (auto& hit : retriever.Retrieve(kb, question, k)) {
    contexts.push_back(kb.Get(hit.id).text());
    out.retrieved_ids.push_back(std::move(hit.id));
  }
  out.answer = AnswerWithContext(shadow, question, contexts, Role::kShadow);
  return out;
}

std::vector<WatermarkText> InteractionLoop(const InjectionConfig& config,
                                           const Retriever& retriever, KnowledgeBase& kb,
                                           const WatermarkTuple& tuple) {
  config.Validate();
  if (kb.empty() && config.mode == InjectionMode::kConcat) {
    throw Error(ErrorCode::kValidation, "concatenation needs a non-empty base");
  }
  const std::string question = WatermarkQuery(tuple, QueryTemplate::kRelationship);
  std::vector<WatermarkText> out;
  std::vector<std::string> accepted;

  for (std::size_t variant = 1; variant <= config.n_wm; ++variant) {
    WatermarkText wt_out{tuple.tuple_id, variant, VariantStatus::kFailed, config.mode, {}, {}, 0};
    std::string host_id;
    if (config.mode == InjectionMode::kConcat) {
      host_id = retriever.Retrieve(kb, question, 1).front().id;
    }
    GenerationFeedback feedback;
    bool regenerated_duplicate = false;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
      wt_out.epochs_used = epoch;
      const std::string host_text = host_id.empty() ? std::string() : kb.Get(host_id).text();
      std::string wt;
      try {
        wt = GenerateWt(*config.gen, tuple, host_text, feedback, accepted);
        if (!regenerated_duplicate &&
            std::find(accepted.begin(), accepted.end(), wt) != accepted.end()) {
          regenerated_duplicate = true;
          GenerationFeedback again = feedback;
          again.previous_text = wt;
          wt = GenerateWt(*config.gen, tuple, host_text, again, accepted);
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kGeneration) throw;
        continue;
      }
      if (!MentionsBoth(wt, tuple)) {
        feedback = {wt, std::nullopt, std::string(kMissingEntity), std::nullopt};
        continue;
      }

      const Placement placement = Place(kb, config.mode, host_id, wt, tuple.tuple_id);
      const auto shadow = ShadowAnswer(*config.shadow, retriever, kb, question, config.k);
      bool ok = DiscriminateRelation(*config.disc, shadow.answer, tuple.entity_a, tuple.relation,
                                     tuple.entity_b);
      feedback = {wt, shadow.answer, std::nullopt, std::nullopt};
      if (!ok) {
        feedback.disc_feedback = std::string(kDiscNo);
      } else if (config.mode == InjectionMode::kConcat &&
                 !CheckCoherence(*config.disc, kb.Get(host_id).text())) {
        ok = false;
        feedback.coherence_feedback = std::string(kCoherenceNo);
      }
      if (!ok) {
        placement.Rollback(kb);
        continue;
      }
      wt_out.status = VariantStatus::kSuccess;
      wt_out.text = wt;
      wt_out.record_id = placement.record_id;
      accepted.push_back(wt);
      break;
    }
    out.push_back(std::move(wt_out));
  }
  return out;
}

std::size_t InjectionReport::successes() const {
  return static_cast<std::size_t>(std::count_if(texts.begin(), texts.end(), [](const auto& t) {
    return t.status == VariantStatus::kSuccess;
  }));
}

std::vector<std::string> InjectionReport::failed_tuples() const {
  std::vector<std::string> order;
  std::set<std::string> any_success;
  for (const auto& t : texts) {
    if (order.empty() || order.back() != t.tuple_id) order.push_back(t.tuple_id);
    if (t.status == VariantStatus::kSuccess) any_success.insert(t.tuple_id);
  }
  std::vector<std::string> failed;
  for (auto& id : order) {
    if (!any_success.count(id)) failed.push_back(std::move(id));
  }
  return failed;
}

std::pair<KnowledgeBase, InjectionReport> InjectAll(const InjectionConfig& config,
                                                    const Retriever& retriever,
                                                    const KnowledgeBase& kb,
                                                    const WatermarkGraph& graph) {
  config.Validate();
  if (graph.tuples.empty()) throw Error(ErrorCode::kValidation, "graph has no tuples");
  KnowledgeBase kb_wm = kb;
  InjectionReport report;
  report.mode = config.mode;
  for (const auto& tuple : graph.tuples) {
    for (auto& t : InteractionLoop(config, retriever, kb_wm, tuple)) {
      report.texts.push_back(std::move(t));
    }
  }
  return {std::move(kb_wm), std::move(report)};
}

json ReportToJson(const InjectionReport& report) {
  json texts = json::array();
  for (const auto& t : report.texts) {
    const bool ok = t.status == VariantStatus::kSuccess;
    texts.push_back({{"tuple_id", t.tuple_id},
                     {"variant", t.variant},
                     {"placement", ok ? json{{"mode", ToString(t.mode)}, {"record_id", t.record_id}}
                                      : json(nullptr)},
                     {"epochs_used", t.epochs_used},
                     {"status", ok ? "success" : "failed"},
                     {"text", t.text}});
  }
  return {{"mode", ToString(report.mode)},
          {"successes", report.successes()},
          {"failed_tuples", report.failed_tuples()},
          {"texts", std::move(texts)}};
}

InjectionReport ReportFromJson(const json& j) {
  InjectionReport r;
  try {
    r.mode = ParseInjectionMode(j.at("mode").get<std::string>());
    for (const auto& t : j.at("texts")) {
      WatermarkText w;
      w.tuple_id = t.at("tuple_id").get<std::string>();
      w.variant = t.at("variant").get<std::size_t>();
      w.epochs_used = t.at("epochs_used").get<std::size_t>();
      w.status = t.at("status").get<std::string>() == "success" ? VariantStatus::kSuccess
                                                                 : VariantStatus::kFailed;
      w.text = t.value("text", std::string());
      w.mode = r.mode;
      if (const auto& p = t.at("placement"); !p.is_null()) {
        w.mode = ParseInjectionMode(p.at("mode").get<std::string>());
        w.record_id = p.at("record_id").get<std::string>();
      }
      r.texts.push_back(std::move(w));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("injection report: ") + e.what());
  }
  return r;
}

}  // namespace ragmark
