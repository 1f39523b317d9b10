// Copyright 2025 The gsim Authors
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

namespace gsim {

/// Operand dimensions (qubit counts, vector lengths) do not match.
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A configured resource cap was exceeded (closure size, oracle qubit caps).
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Conjugation by a generator does not preserve the operator subspace.
struct InvarianceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The requested operation is not supported for this configuration.
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration file or parameters.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numerical routine produced a non-finite or inconsistent result.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gsim
