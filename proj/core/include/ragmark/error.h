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

#ifndef RAGMARK_ERROR_H_
#define RAGMARK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ragmark {

enum class ErrorCode {
  kValidation,
  kConflict,
  kNotFound,
  kParse,
  kEmptyResult,
  kGateway,
  kProtocol,
  kExtraction,
  kUnderflow,
  kExhausted,
  kGeneration,
  kIo,
};

std::string_view ToString(ErrorCode code);

/// Base exception for every failure raised by the library. The code lets
/// callers (and the CLI exit-code mapping) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the HTTP chat/embedding backends once retries are exhausted.
/// `status` is 0 for transport-level failures (no HTTP response at all).
class GatewayError : public Error {
 public:
  GatewayError(int status, const std::string& message)
      : Error(ErrorCode::kGateway, message), status_(status) {}

  int status() const noexcept { return status_; }

 private:
  int status_;
};

/// Parse failure of a persisted artifact; `line` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ragmark

#endif  // RAGMARK_ERROR_H_
