// Copyright 2026 The ReCo Authors
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

#ifndef RECO_ERROR_H_
#define RECO_ERROR_H_

#include <stdexcept>
#include <string>

namespace reco {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad inputs: malformed files, violated invariants, mismatched shapes.
// The CLI maps this family to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// Failures arising during computation (degenerate rows, non-finite values,
// undefined statistics). The CLI maps this family to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IndexError : public InputError {
 public:
  using InputError::InputError;
};

class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

// A constructor or loader rejected a value; the message names the
// violated invariant.
class InvariantError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class PreconditionError : public InputError {
 public:
  using InputError::InputError;
};

// Judgment/gold rows that do not line up with the data they score.
class DataError : public InputError {
 public:
  using InputError::InputError;
};

// A scoring request whose required (game, utterance, meaning) cells are
// not all covered by the supplied policies.
class CoverageError : public InputError {
 public:
  using InputError::InputError;
};

// A policy row lost all support during an update.
class DegenerateRowError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Pearson correlation requested for a constant vector.
class UndefinedCorrelationError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace reco

#endif  // RECO_ERROR_H_
