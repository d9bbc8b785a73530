/* Copyright 2026 the stepbmc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stepbmc {

// Error in a textual input (net file, formula, condition, program text).
// line/col are 1-based; col 0 means "whole line".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t col)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", col " +
                           std::to_string(col) + ")"),
        line_(line),
        col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t line_, col_;
};

// Violated precondition of an operation (unknown id, disabled transition,
// non-step set, malformed argument).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A decoded model failed replay or shape validation. Reaching this means the
// encoding, the solver, or the decoder is broken; callers must not swallow it.
class VerificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace stepbmc
