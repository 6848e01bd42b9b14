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

#ifndef RAGMARK_TEXT_UTIL_H_
#define RAGMARK_TEXT_UTIL_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

// Small ASCII-oriented text helpers shared by extraction, the mock LLM and
// the attacks. Non-ASCII bytes pass through untouched.
namespace ragmark::text {

std::string Trim(std::string_view s);
std::string CollapseWhitespace(std::string_view s);
std::string ToLower(std::string_view s);
std::string ToUpper(std::string_view s);

/// Trim, collapse, then upper-case the first letter of every word and
/// lower-case the rest ("angiogenesis  inhibitor" -> "Angiogenesis Inhibitor").
std::string CanonicalEntity(std::string_view s);

/// Trim, collapse, upper-case, and join words with '_' (" uses " -> "USES",
/// "part-of" -> "PART_OF").
std::string CanonicalRelation(std::string_view s);

/// Human reading of a canonical relation: "HAS_OCCUPATION" -> "has occupation".
std::string RelationGloss(std::string_view relation);

/// Lower-cased alphanumeric runs.
std::vector<std::string> Tokenize(std::string_view s);
std::set<std::string> TokenSet(std::string_view s);

/// Jaccard overlap of token sets; 1.0 when both are empty.
double Jaccard(std::string_view a, std::string_view b);

bool ContainsIgnoreCase(std::string_view haystack, std::string_view needle);

/// True when `phrase` tokens occur as a contiguous run of `text` tokens.
bool ContainsPhrase(std::string_view text, std::string_view phrase);

/// Splits on '.', '!' or '?' followed by whitespace or end of text. Each
/// returned sentence keeps its terminator and is trimmed.
std::vector<std::string> SplitSentences(std::string_view s);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

bool StartsWith(std::string_view s, std::string_view prefix);

}  // namespace ragmark::text

#endif  // RAGMARK_TEXT_UTIL_H_
