// Copyright 2026 The worrywords-engine Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace worrywords {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input row. `row()` is 1-based; 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0)
      : Error(row ? "row " + std::to_string(row) + ": " + what : what),
        row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class DuplicateError : public Error {
 public:
  explicit DuplicateError(const std::string& term)
      : Error("duplicate term '" + term + "'"), term_(term) {}
  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

/// A statistic is undefined for the input (zero variance, too few points).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Input violates an operation's precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace worrywords
