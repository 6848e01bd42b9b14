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

#include "ragmark/error.h"

namespace ragmark {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kEmptyResult: return "empty-result";
    case ErrorCode::kGateway: return "gateway";
    case ErrorCode::kProtocol: return "protocol";
    case ErrorCode::kExtraction: return "extraction";
    case ErrorCode::kUnderflow: return "underflow";
    case ErrorCode::kExhausted: return "generation-exhausted";
    case ErrorCode::kGeneration: return "generation";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace ragmark
