// Copyright 2026 The qprecision Authors
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

namespace qprecision {

// Every library failure derives from Error. The `category()` drives the CLI
// exit-code contract: bound violations, numerical-accuracy problems and
// configuration/input problems map to distinct codes.
enum class ErrorCategory { input, numerical, bound_violation };

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ErrorCategory cat = ErrorCategory::input)
      : std::runtime_error(what), category_(cat) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define QPRECISION_DEFINE_ERROR(Name, Cat)                                   \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(#Name ": " + what, Cat) {} \
  }

// qlinalg
QPRECISION_DEFINE_ERROR(DimError, ErrorCategory::input);
QPRECISION_DEFINE_ERROR(HermiticityError, ErrorCategory::input);
QPRECISION_DEFINE_ERROR(StateError, ErrorCategory::input);
QPRECISION_DEFINE_ERROR(ConvergenceError, ErrorCategory::numerical);
QPRECISION_DEFINE_ERROR(SingularError, ErrorCategory::numerical);

// model
QPRECISION_DEFINE_ERROR(SpecError, ErrorCategory::input);
QPRECISION_DEFINE_ERROR(KrausError, ErrorCategory::numerical);
QPRECISION_DEFINE_ERROR(SupportError, ErrorCategory::numerical);
QPRECISION_DEFINE_ERROR(ResonanceError, ErrorCategory::input);
QPRECISION_DEFINE_ERROR(DegeneracyError, ErrorCategory::input);
QPRECISION_DEFINE_ERROR(SchemaError, ErrorCategory::input);

// trajectories
QPRECISION_DEFINE_ERROR(EnumerationCapError, ErrorCategory::input);
QPRECISION_DEFINE_ERROR(ConsistencyError, ErrorCategory::numerical);
QPRECISION_DEFINE_ERROR(ObservableError, ErrorCategory::input);

// bounds
QPRECISION_DEFINE_ERROR(DomainError, ErrorCategory::input);
QPRECISION_DEFINE_ERROR(BoundViolationError, ErrorCategory::bound_violation);
QPRECISION_DEFINE_ERROR(ModeError, ErrorCategory::input);

// markov
QPRECISION_DEFINE_ERROR(AccuracyError, ErrorCategory::numerical);

// expcli
QPRECISION_DEFINE_ERROR(ConfigError, ErrorCategory::input);

#undef QPRECISION_DEFINE_ERROR

// Thrown when a channel or generator has more than one fixed point.
class NonUniqueStationaryError : public Error {
 public:
  NonUniqueStationaryError(const std::string& what, double gap)
      : Error("NonUniqueStationaryError: " + what, ErrorCategory::numerical), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace qprecision
