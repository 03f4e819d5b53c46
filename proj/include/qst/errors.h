// Copyright 2026 The qst Authors
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

#ifndef QST_ERRORS_H
#define QST_ERRORS_H

#include <stdexcept>
#include <string>

namespace qst {

/// Raised for inputs that violate a documented precondition (bad chain
/// length, non-positive coupling, malformed configuration, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when a well-formed computation cannot produce a result.
struct ComputationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No fidelity maximum qualified as a first arrival.
struct NoArrivalError : ComputationError {
    using ComputationError::ComputationError;
};

}  // namespace qst

#endif
