// Copyright 2026 The qent Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qent {

/// Direction triple too close to coplanar to invert reliably.
class DegenerateGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical self-check failed (e.g. a Lemma residual above tolerance).
/// Maps to exit code 2 in the CLI.
class NumericalCheckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Counterexample phase search did not reach the required separation.
class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file; message carries line and field.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int field)
      : std::runtime_error(what), line_(line), field_(field) {}
  int line() const { return line_; }
  int field() const { return field_; }

 private:
  int line_;
  int field_;
};

}  // namespace qent
