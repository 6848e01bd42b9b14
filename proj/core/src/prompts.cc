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

#include "ragmark/prompts.h"

#include "ragmark/text_util.h"

namespace ragmark::prompts {
namespace {

constexpr std::string_view kShadowHead =
    "You are a helpful assistant. Below are some relevant contexts. Use only the "
    "information provided in these contexts to answer the question. If you cannot "
    "find the answer to the question within the contexts, simply say 'I do not "
    "know'.\n\nContexts: ";
constexpr std::string_view kShadowQuestion = "\n\nQuestion: ";
constexpr std::string_view kShadowTail = "\n\nAnswer:";
constexpr std::string_view kContextSep = "\n\n";

constexpr std::string_view kGenerateHead =
    "You are a watermark generator, a knowledge graph expert, and a linguist. In a "
    "given knowledge graph, two entities (E1) and (E2) are connected by a "
    "relationship (R1). Your task is to generate watermark text (WT) that clearly "
    "encodes this relationship (R1) between (E1) and (E2), ensuring that the "
    "watermark text is coherent and related to the database content (TEXT).\n\n"
    "The generated watermark text will undergo two stages of processing:\n\n"
    "1. **Direct Evaluation**:\n"
    "    - **Watermark Discriminator 1 (WD1)**: This model evaluates whether the "
    "watermark text (WT) accurately implies the relationship (R1) between (E1) and "
    "(E2).\n\n"
    "2. **Extractor-Based Evaluation**:\n"
    "    - **Watermark Extractor (WE)**: This model attempts to extract the "
    "relationship (R1) between (E1) and (E2) based on the restored watermark text "
    "(WT) and additional database content (TEXT).\n"
    "    - **Watermark Discriminator 2 (WD2)**: After the extraction, this model "
    "assesses whether the relationship (R1) is still clearly and accurately "
    "implied.\n\n"
    "Your objective is to refine the watermark text (WT) to ensure:\n"
    "1. The relationship (R1) between (E1) and (E2) remains clear and accurate after "
    "processing by the extractor.\n"
    "2. Both discriminators (WD1 and WD2) confirm that the relationship (R1) is "
    "correctly encoded.\n"
    "3. The generated watermark text (WT) should be approximately 30 words long.\n"
    "4. Ensure that appending the watermark text (WT) to (TEXT) does not result in "
    "incoherent or unrelated sentences that could be discarded.\n\n"
    "**Input:**\n";
constexpr std::string_view kGenWt = "- Restored watermark text: ";
constexpr std::string_view kGenWe = "- Extractor output: ";
constexpr std::string_view kGenWd1 = "- Discriminator feedback (WD1): ";
constexpr std::string_view kGenWd2 = "- Discriminator feedback (WD2): ";
constexpr std::string_view kGenR1 = "- Relationship (R1): ";
constexpr std::string_view kGenE1 = "- Entity 1 (E1): ";
constexpr std::string_view kGenE2 = "- Entity 2 (E2): ";
constexpr std::string_view kGenText = "- Database retrieval output (text): ";
constexpr std::string_view kGenTail =
    "\n\n**Output:**\nReturn the refined watermark text in JSON format:\n"
    "[{\"watermark_text\": \"Your refined text\"}]";

constexpr std::string_view kDiversityHead =
    "Write a watermark text that is a distinct sentence from each of these earlier "
    "watermark texts for the same relationship:\n";

constexpr std::string_view kDiscHead =
    "You are an expert in knowledge graphs and linguistics. Your task is to evaluate "
    "the text: (rag_doc). Identify whether it suggests a relationship (R1) exists "
    "between the entities (E1) and (E2).\n\nInput:\n\n- rag_doc: (";
constexpr std::string_view kDiscR1 = ")\n\n- R1: (";
constexpr std::string_view kDiscE1 = ")\n\n- E1: (";
constexpr std::string_view kDiscE2 = ")\n\n- E2: (";
constexpr std::string_view kDiscTail =
    ")\n\nOutput: \nReply strictly with \"yes\" if the relationship is implied, or "
    "\"no\" if it is not. No additional information is required.";

constexpr std::string_view kJudgeHead =
    "Given two sentences, determine if they convey the same meaning. \n"
    "If they are similar in meaning, return 'yes'; otherwise, return 'no'.\n\n"
    "The following situations are also considered as the two sentences expressing "
    "the same meaning:\n\n"
    "1. One sentence includes the meaning expressed in the other sentence.\n\n"
    "2. The two sentences express the same central idea but in different ways.\n\n"
    "Sentence 1: ";
constexpr std::string_view kJudgeS2 = "\n\nSentence 2: ";
constexpr std::string_view kJudgeTail =
    "\n\nOutput: 'yes' or 'no' only, No explanations, no extra text.";

constexpr std::string_view kCoherenceHead =
    "Evaluate whether the following text reads as one coherent passage, with no "
    "sentence that is incoherent or unrelated to the rest.\n\nText: ";
constexpr std::string_view kCoherenceTail =
    "\n\nReply strictly with \"yes\" if the text is coherent, or \"no\" if it is "
    "not.";

constexpr std::string_view kExtractHead =
    "You are a knowledge graph expert. Extract the entities and the relations "
    "between them from the text below. Return only a JSON list of objects of the "
    "form [{\"subject\": \"...\", \"relation\": \"...\", \"object\": \"...\"}].\n\n"
    "Text: ";

constexpr std::string_view kParaphraseHead = "paraphrase the following sentences:\n\n";

constexpr std::string_view kRemoveHead =
    "You are a helpful assistant, below is a text which may contain unrelated "
    "sentences. Please analyze the text and remove any incoherent or unrelated "
    "sentences. The text: ";

std::string OrNone(const std::optional<std::string>& v) { return v ? *v : "None"; }

// Text between `open` and the next `close` after it (or end when close is
// empty). nullopt if `open` is missing.
std::optional<std::string> Between(std::string_view s, std::string_view open,
                                   std::string_view close, std::size_t from = 0) {
  auto b = s.find(open, from);
  if (b == std::string_view::npos) return std::nullopt;
  b += open.size();
  if (close.empty()) return std::string(s.substr(b));
  auto e = s.find(close, b);
  if (e == std::string_view::npos) return std::nullopt;
  return std::string(s.substr(b, e - b));
}

std::optional<std::string> Line(std::string_view s, std::string_view label) {
  return Between(s, label, "\n");
}

}  // namespace

std::string ShadowRag(const std::vector<std::string>& contexts, std::string_view question) {
  std::string out(kShadowHead);
  out += text::Join(contexts, kContextSep);
  out += kShadowQuestion;
  out += question;
  out += kShadowTail;
  return out;
}

std::string Generate(const GenerateInputs& in) {
  std::string out(kGenerateHead);
  auto line = [&out](std::string_view label, std::string_view value) {
    out += label;
    out += value;
    out += '\n';
  };
  line(kGenWt, OrNone(in.previous_text));
  line(kGenWe, OrNone(in.extractor_output));
  line(kGenWd1, OrNone(in.disc_feedback));
  line(kGenWd2, OrNone(in.coherence_feedback));
  line(kGenR1, in.relation);
  line(kGenE1, in.entity_a);
  line(kGenE2, in.entity_b);
  out += kGenText;
  out += in.host_text.empty() ? std::string("None") : in.host_text;
  out += kGenTail;
  return out;
}

std::string GenerateDiversity(const std::vector<std::string>& earlier_variants) {
  if (earlier_variants.empty()) return {};
  std::string out(kDiversityHead);
  for (const auto& v : earlier_variants) {
    out += "- ";
    out += v;
    out += '\n';
  }
  return out;
}

std::string Discriminate(std::string_view rag_doc, std::string_view relation,
                         std::string_view entity_a, std::string_view entity_b) {
  std::string out(kDiscHead);
  out += rag_doc;
  out += kDiscR1;
  out += relation;
  out += kDiscE1;
  out += entity_a;
  out += kDiscE2;
  out += entity_b;
  out += kDiscTail;
  return out;
}

std::string Judge(std::string_view a, std::string_view b) {
  std::string out(kJudgeHead);
  out += a;
  out += kJudgeS2;
  out += b;
  out += kJudgeTail;
  return out;
}

std::string Coherence(std::string_view t) {
  return std::string(kCoherenceHead) + std::string(t) + std::string(kCoherenceTail);
}

std::string Extract(std::string_view t) { return std::string(kExtractHead) + std::string(t); }

std::string Paraphrase(std::string_view t) {
  return std::string(kParaphraseHead) + std::string(t);
}

std::string RemoveUnrelated(std::string_view t) {
  return std::string(kRemoveHead) + std::string(t);
}

std::optional<ShadowParts> ParseShadow(std::string_view user) {
  if (user.find(kShadowMarker) == std::string_view::npos) return std::nullopt;
  auto b = user.find(kShadowHead);
  auto q = user.rfind(kShadowQuestion);
  auto t = user.rfind(kShadowTail);
  if (b == std::string_view::npos || q == std::string_view::npos ||
      t == std::string_view::npos || q < b || t < q) {
    return std::nullopt;
  }
  ShadowParts parts;
  const auto ctx_begin = b + kShadowHead.size();
  std::string_view ctx = user.substr(ctx_begin, q - ctx_begin);
  std::size_t pos = 0;
  while (pos <= ctx.size()) {
    auto next = ctx.find(kContextSep, pos);
    auto piece = ctx.substr(pos, next == std::string_view::npos ? std::string_view::npos
                                                                : next - pos);
    if (!piece.empty()) parts.contexts.emplace_back(piece);
    if (next == std::string_view::npos) break;
    pos = next + kContextSep.size();
  }
  const auto q_begin = q + kShadowQuestion.size();
  parts.question = std::string(user.substr(q_begin, t - q_begin));
  return parts;
}

std::optional<GenerateParts> ParseGenerate(std::string_view user) {
  if (user.find(kGenerateMarker) == std::string_view::npos) return std::nullopt;
  auto r = Line(user, kGenR1);
  auto a = Line(user, kGenE1);
  auto b = Line(user, kGenE2);
  auto wt = Line(user, kGenWt);
  if (!r || !a || !b || !wt) return std::nullopt;
  return GenerateParts{*a, *r, *b, *wt != "None"};
}

std::size_t CountDiversityVariants(std::string_view system) {
  if (system.find(kDiversityHead) == std::string_view::npos) return 0;
  std::size_t n = 0;
  for (std::size_t pos = system.find("\n- "); pos != std::string_view::npos;
       pos = system.find("\n- ", pos + 1)) {
    ++n;
  }
  return n;
}

std::optional<DiscriminateParts> ParseDiscriminate(std::string_view user) {
  if (user.find(kDiscriminateMarker) == std::string_view::npos) return std::nullopt;
  auto doc = Between(user, kDiscHead, kDiscR1);
  if (!doc) return std::nullopt;
  const auto after_doc = user.find(kDiscHead) + kDiscHead.size() + doc->size();
  auto r = Between(user, kDiscR1, kDiscE1, after_doc);
  auto a = Between(user, kDiscE1, kDiscE2, after_doc);
  auto b = Between(user, kDiscE2, kDiscTail, after_doc);
  if (!r || !a || !b) return std::nullopt;
  return DiscriminateParts{*doc, *r, *a, *b};
}

std::optional<std::pair<std::string, std::string>> ParseJudge(std::string_view user) {
  if (user.find(kJudgeMarker) == std::string_view::npos) return std::nullopt;
  auto a = Between(user, kJudgeHead, kJudgeS2);
  if (!a) return std::nullopt;
  const auto after_a = user.find(kJudgeHead) + kJudgeHead.size() + a->size();
  auto b = Between(user, kJudgeS2, kJudgeTail, after_a);
  if (!b) return std::nullopt;
  return std::make_pair(*a, *b);
}

std::optional<std::string> ParseTextSlot(std::string_view user, std::string_view marker) {
  if (user.find(marker) == std::string_view::npos) return std::nullopt;
  if (marker == kCoherenceMarker) {
    auto b = user.find(kCoherenceHead);
    auto e = user.rfind(kCoherenceTail);
    if (b == std::string_view::npos || e == std::string_view::npos) return std::nullopt;
    b += kCoherenceHead.size();
    if (e < b) return std::nullopt;
    return std::string(user.substr(b, e - b));
  }
  if (marker == kExtractMarker) return Between(user, kExtractHead, "");
  if (marker == kParaphraseMarker) return Between(user, kParaphraseHead, "");
  if (marker == kRemoveUnrelatedMarker) return Between(user, kRemoveHead, "");
  return std::nullopt;
}

}  // namespace ragmark::prompts
