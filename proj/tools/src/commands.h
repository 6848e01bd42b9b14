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

#ifndef RAGMARK_TOOLS_COMMANDS_H_
#define RAGMARK_TOOLS_COMMANDS_H_

#include <ostream>
#include <stdexcept>
#include <string>

#include "run_config.h"

namespace ragmark::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotDetected = 3;

/// A referenced input does not exist or a flag is missing; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs one verb. Artifacts are written next to a "<artifact>.meta.json"
/// sidecar holding the wall-clock fields, so the artifacts themselves are
/// byte-identical across reruns. The human-readable summary goes to `out`.
/// Returns the process exit code.
int RunVerb(Verb verb, const RunConfig& config, std::ostream& out);

}  // namespace ragmark::cli

#endif  // RAGMARK_TOOLS_COMMANDS_H_
