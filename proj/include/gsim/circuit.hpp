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

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gsim/algebra.hpp"

namespace gsim {

/// e^{-i theta G} with G a Pauli string or a commuting Pauli sum. The angle
/// is a fixed value or a circuit parameter index. Commutation of sum terms
/// is validated at construction; it makes the factorization
/// e^{-i theta sum c_k P_k} = prod_k e^{-i theta c_k P_k} exact.
struct Gate {
    SpanElement generator;
    int param = -1;      // parameter index when >= 0
    double angle = 0.0;  // fixed angle otherwise

    static Gate pauli(PauliString p, int param_index);
    static Gate pauli_fixed(PauliString p, double angle);
    static Gate sum(SpanElement generator, int param_index);
    static Gate sum_fixed(SpanElement generator, double angle);
    bool is_parametrized() const { return param >= 0; }
};

/// rho -> sum_k p_k V_k rho V_k. Probabilities form a distribution within
/// 1e-12 and the identity term is explicit.
struct NoiseChannel {
    std::vector<std::pair<double, PauliString>> terms;

    static NoiseChannel make(std::vector<std::pair<double, PauliString>> terms);
    /// (1-p) I + uniform random weights over the 15 non-identity two-qubit
    /// Paulis on (site_a, site_b), normalized to total p. The weights are
    /// drawn from `raw` (15 values in [0,1)).
    static NoiseChannel two_qubit_random(int n, int site_a, int site_b,
                                         double p, const double raw[15]);
    int num_qubits() const;
};

using CircuitElement = std::variant<Gate, NoiseChannel>;

struct Circuit {
    int n = 0;
    int param_count = 0;
    std::vector<CircuitElement> elements;

    explicit Circuit(int num_qubits = 0) : n(num_qubits) {}

    Circuit& push(Gate g);
    Circuit& push(NoiseChannel ch);
    bool has_noise() const;
    int num_gates() const;
};

/// JSON serialization, schema "gsim-circuit/1".
nlohmann::json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& doc);
std::string circuit_to_string(const Circuit& circuit);
Circuit circuit_from_string(const std::string& text);

}  // namespace gsim
