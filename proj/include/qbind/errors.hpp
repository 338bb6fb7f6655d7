// Copyright 2026 The qbind Authors
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

namespace qbind {

/// Input rejected by a precondition check (bad shape, non-Hermitian, ...).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A numerical routine failed to converge or produced an unusable result.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Tolerances shared by the validators. All absolute, in the units of the
/// quantity being checked.
struct Tolerances {
  double validity = 1e-12;        // Hermiticity, equality comparisons
  double reconstruction = 1e-10;  // unitarity, trace, spectral reassembly
  double positivity = 1e-10;      // smallest admissible density eigenvalue
};

}  // namespace qbind
