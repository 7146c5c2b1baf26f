// Copyright 2026 The Weaklab Authors.
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

#ifndef WEAKLAB_CORE_ERROR_H_
#define WEAKLAB_CORE_ERROR_H_

#include <stdexcept>
#include <string>

namespace weaklab {

enum class ErrorCode {
  kEmptyText,
  kUnparseableExplanation,
  kUnknownAnchor,
  kMissingAnchor,
  kDegenerateData,
  kInvalidBio,
  kDimensionMismatch,
  kSchemaMismatch,
  kEmptyPool,
  kMalformedRecord,
  kInvalidArgument,
  kNotFound,
  kConflict,
  kIo,
};

const char *ErrorCodeName(ErrorCode code);

// All engine faults are reported with this exception. Validation problems
// that are data rather than faults are returned as values instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the explanation parser. `token` is the first input token that
// could not be consumed by any grammar rule.
class ParseError : public Error {
 public:
  ParseError(const std::string &token, size_t char_offset)
      : Error(ErrorCode::kUnparseableExplanation,
              "unparseable explanation at '" + token + "'"),
        token_(token),
        char_offset_(char_offset) {}

  const std::string &token() const { return token_; }
  size_t char_offset() const { return char_offset_; }

 private:
  std::string token_;
  size_t char_offset_;
};

// Raised for malformed import payloads; `line` is 1-based.
class RecordError : public Error {
 public:
  RecordError(size_t line, const std::string &what)
      : Error(ErrorCode::kMalformedRecord,
              "malformed record at line " + std::to_string(line) + ": " + what),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

}  // namespace weaklab

#endif  // WEAKLAB_CORE_ERROR_H_
