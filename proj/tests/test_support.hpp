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

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "gsim/circuit.hpp"
#include "gsim/io.hpp"
#include "gsim/pauli.hpp"

// Test-side oracles, kept independent of the library's evaluation paths.

namespace gsim::testing {

// Dense Pauli matrix by explicit 2x2 Kronecker products (independent of
// oracle::dense_pauli, which uses index maps).
inline Eigen::MatrixXcd kron_pauli(const PauliString& p) {
    using cd = std::complex<double>;
    Eigen::Matrix2cd ops[4];
    ops[0] << 1, 0, 0, 1;                           // I
    ops[1] << 0, 1, 1, 0;                           // X
    ops[2] << 1, 0, 0, -1;                          // Z
    ops[3] << 0, cd(0, -1), cd(0, 1), 0;            // Y
    // Qubit 0 owns the most significant index bit, so factors accumulate as
    // m <- kron(m, op).
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Ones(1, 1);
    for (int j = 0; j < p.num_qubits(); ++j) {
        int code = (p.x_bit(j) ? 1 : 0) | (p.z_bit(j) ? 2 : 0);
        const Eigen::Matrix2cd& op = ops[code];
        Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                next.block<2, 2>(2 * r, 2 * c) = m(r, c) * op;
            }
        }
        m = std::move(next);
    }
    return m;
}

// All 4^n Pauli strings on n qubits, for exhaustive small-n sweeps.
inline std::vector<PauliString> all_paulis(int n) {
    std::vector<PauliString> out;
    static constexpr char kOps[4] = {'I', 'X', 'Z', 'Y'};
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 4;
    for (int code = 0; code < total; ++code) {
        PauliString p(n);
        int c = code;
        for (int j = 0; j < n; ++j) {
            p.set(j, kOps[c & 3]);
            c >>= 2;
        }
        out.push_back(std::move(p));
    }
    return out;
}

// Random circuit over Pauli generators drawn from a pool.
inline Circuit random_pauli_circuit(const std::vector<PauliString>& pool,
                                    int num_gates, Rng& rng) {
    Circuit c(pool[0].num_qubits());
    for (int g = 0; g < num_gates; ++g) {
        c.push(Gate::pauli(pool[rng.integer(pool.size())], g));
    }
    return c;
}

inline Eigen::VectorXd random_angles(int count, Rng& rng) {
    Eigen::VectorXd t(count);
    for (int i = 0; i < count; ++i) t[i] = rng.uniform(0, 2 * M_PI);
    return t;
}

}  // namespace gsim::testing
