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

#ifndef RAGMARK_LLM_ROLES_H_
#define RAGMARK_LLM_ROLES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ragmark/chat_client.h"

// Typed wrappers for the yes/no and answer roles. They build the prompt,
// call the gateway and interpret the reply; nothing else.
namespace ragmark {

/// RAG answer over retrieved contexts. Throws kValidation when `contexts` is
/// empty; gateway errors propagate.
std::string AnswerWithContext(LlmGateway& gateway, std::string_view question,
                              const std::vector<std::string>& contexts,
                              Role role = Role::kAnswer);

/// Same-meaning judge. nullopt when the reply is neither yes nor no; the
/// gateway's protocol-warning counter is bumped in that case.
std::optional<bool> JudgeSameMeaning(LlmGateway& gateway, std::string_view a,
                                     std::string_view b);

/// True when `answer` is a refusal ("I do not know", empty).
bool IsNonAnswer(std::string_view answer);

/// Whether `answer` reveals `relation` between the two entities. Non-answers
/// are "no" without a model call; replies other than yes/no count as "no"
/// and bump the protocol-warning counter.
bool DiscriminateRelation(LlmGateway& gateway, std::string_view answer,
                          std::string_view entity_a, std::string_view relation,
                          std::string_view entity_b);

/// Whether `text` still reads as one coherent passage. Replies other than
/// yes/no count as "no" and bump the protocol-warning counter.
bool CheckCoherence(LlmGateway& gateway, std::string_view text);

}  // namespace ragmark

#endif  // RAGMARK_LLM_ROLES_H_
