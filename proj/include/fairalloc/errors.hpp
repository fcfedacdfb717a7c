// Copyright 2026 The fairalloc Authors
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

#include <stdexcept>
#include <string>

namespace fairalloc {

// Malformed or out-of-contract input (bad pmf, mismatched group counts, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Valid input that lies outside the regime a routine supports, e.g. a
// Poisson rate whose truncation point exceeds the configured support cap.
class UnsupportedParameter : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exhaustive search would exceed its configured enumeration budget.
class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Input files that cannot be read or parsed.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fairalloc
