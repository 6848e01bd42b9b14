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

#ifndef RAGMARK_PROMPTS_H_
#define RAGMARK_PROMPTS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Prompt templates for every LLM role. The builders fill slots and nothing
// else; the HTTP backend sends these bytes unchanged. Each template has a
// fixed marker phrase so the offline mock can recognize which role it is
// answering.
namespace ragmark::prompts {

inline constexpr std::string_view kShadowMarker =
    "Use only the information provided in these contexts to answer the question.";
inline constexpr std::string_view kGenerateMarker = "You are a watermark generator";
inline constexpr std::string_view kDiscriminateMarker =
    "Identify whether it suggests a relationship (R1) exists";
inline constexpr std::string_view kJudgeMarker =
    "Given two sentences, determine if they convey the same meaning.";
inline constexpr std::string_view kCoherenceMarker =
    "Evaluate whether the following text reads as one coherent passage";
inline constexpr std::string_view kExtractMarker =
    "Extract the entities and the relations between them";
inline constexpr std::string_view kParaphraseMarker = "paraphrase the following sentences";
inline constexpr std::string_view kRemoveUnrelatedMarker =
    "remove any incoherent or unrelated sentences";
inline constexpr std::string_view kNoAnswer = "I do not know";

/// RAG answer prompt; contexts are joined with blank lines.
std::string ShadowRag(const std::vector<std::string>& contexts, std::string_view question);

/// Inputs of one WM-Gen round. Unset feedback fields render as "None".
struct GenerateInputs {
  std::string entity_a;
  std::string relation;
  std::string entity_b;
  std::string host_text;
  std::optional<std::string> previous_text;
  std::optional<std::string> extractor_output;
  std::optional<std::string> disc_feedback;
  std::optional<std::string> coherence_feedback;
};

std::string Generate(const GenerateInputs& in);

/// System message asking for a sentence distinct from earlier variants.
/// Empty when there are none.
std::string GenerateDiversity(const std::vector<std::string>& earlier_variants);

std::string Discriminate(std::string_view rag_doc, std::string_view relation,
                         std::string_view entity_a, std::string_view entity_b);

std::string Judge(std::string_view a, std::string_view b);

std::string Coherence(std::string_view text);

std::string Extract(std::string_view text);

std::string Paraphrase(std::string_view text);

std::string RemoveUnrelated(std::string_view text);

// Slot extraction used by the mock backend. Each returns nullopt when the
// prompt is not of that shape.
struct ShadowParts {
  std::vector<std::string> contexts;
  std::string question;
};
std::optional<ShadowParts> ParseShadow(std::string_view user);

struct GenerateParts {
  std::string entity_a;
  std::string relation;
  std::string entity_b;
  bool is_retry = false;
};
std::optional<GenerateParts> ParseGenerate(std::string_view user);
std::size_t CountDiversityVariants(std::string_view system);

struct DiscriminateParts {
  std::string rag_doc;
  std::string relation;
  std::string entity_a;
  std::string entity_b;
};
std::optional<DiscriminateParts> ParseDiscriminate(std::string_view user);

std::optional<std::pair<std::string, std::string>> ParseJudge(std::string_view user);

/// Text slot of the coherence, extraction, paraphrase and removal prompts.
std::optional<std::string> ParseTextSlot(std::string_view user, std::string_view marker);

}  // namespace ragmark::prompts

#endif  // RAGMARK_PROMPTS_H_
