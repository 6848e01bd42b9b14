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

#include "ragmark/llm_roles.h"

#include "ragmark/error.h"
#include "ragmark/prompts.h"
#include "ragmark/text_util.h"

namespace ragmark {

std::string AnswerWithContext(LlmGateway& gateway, std::string_view question,
                              const std::vector<std::string>& contexts, Role role) {
  if (contexts.empty()) throw Error(ErrorCode::kValidation, "answer needs at least one context");
  return gateway.Call(role, "", prompts::ShadowRag(contexts, question));
}

std::optional<bool> JudgeSameMeaning(LlmGateway& gateway, std::string_view a,
                                     std::string_view b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kValidation, "judge needs two non-empty answers");
  }
  switch (ParseYesNo(gateway.Call(Role::kJudge, "", prompts::Judge(a, b)))) {
    case YesNo::kYes:
      return true;
    case YesNo::kNo:
      return false;
    case YesNo::kIndeterminate:
      break;
  }
  gateway.NoteProtocolWarning();
  return std::nullopt;
}

bool IsNonAnswer(std::string_view answer) {
  const std::string trimmed = text::Trim(answer);
  return trimmed.empty() || text::StartsWith(text::ToLower(trimmed), text::ToLower(prompts::kNoAnswer));
}

bool DiscriminateRelation(LlmGateway& gateway, std::string_view answer,
                          std::string_view entity_a, std::string_view relation,
                          std::string_view entity_b) {
  if (IsNonAnswer(answer)) return false;
  const auto verdict = ParseYesNo(gateway.Call(
      Role::kDiscriminate, "", prompts::Discriminate(answer, relation, entity_a, entity_b)));
  if (verdict == YesNo::kIndeterminate) gateway.NoteProtocolWarning();
  return verdict == YesNo::kYes;
}

bool CheckCoherence(LlmGateway& gateway, std::string_view text) {
  const auto verdict = ParseYesNo(gateway.Call(Role::kCoherence, "", prompts::Coherence(text)));
  if (verdict == YesNo::kIndeterminate) gateway.NoteProtocolWarning();
  return verdict == YesNo::kYes;
}

}  // namespace ragmark
