//
// Copyright 2026 The SPriFed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SPRIFED_ERROR_HPP_
#define SPRIFED_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sprifed {

// Error categories surfaced through the C API as status codes. The numeric
// values are part of the ABI (see sprifed.h).
enum class ErrorCode : int {
  kParameter = 1,
  kDegenerateInput = 2,
  kParse = 3,
  kSolver = 4,
  kUnsupportedMetric = 5,
  kIo = 6,
  kUsage = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& message)
      : Error(ErrorCode::kParameter, message) {}
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& message)
      : Error(ErrorCode::kDegenerateInput, message) {}
};

// Raised by the CSV loader; `row` is 1-based and counts the header as row 1.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, long row)
      : Error(ErrorCode::kParse,
              row > 0 ? "row " + std::to_string(row) + ": " + message
                      : message),
        row_(row) {}

  long row() const { return row_; }

 private:
  long row_;
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& message)
      : Error(ErrorCode::kSolver, message) {}
};

class UnsupportedMetricError : public Error {
 public:
  explicit UnsupportedMetricError(const std::string& message)
      : Error(ErrorCode::kUnsupportedMetric, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message)
      : Error(ErrorCode::kIo, message) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorCode::kUsage, message) {}
};

}  // namespace sprifed

#endif  // SPRIFED_ERROR_HPP_
