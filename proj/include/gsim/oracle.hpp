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

#include "gsim/algebra.hpp"
#include "gsim/circuit.hpp"
#include "gsim/states.hpp"

// Brute-force ground truth at small n. Everything here is dense linear
// algebra, used by tests and the --verify paths, never by production code.

namespace gsim::oracle {

inline constexpr int kMaxStateQubits = 14;
inline constexpr int kMaxDensityQubits = 8;
inline constexpr int kMaxUnitaryQubits = 12;

struct StateVector {
    int n = 0;
    Eigen::VectorXcd amps;
};

struct DensityMatrix {
    int n = 0;
    Eigen::MatrixXcd rho;
};

/// Dense 2^n state for a StateSpec (Kronecker product of its blocks).
StateVector make_state(const StateSpec& spec);

/// Computational basis index convention: qubit 1 is the most significant bit,
/// i.e. |q_1 q_2 ... q_n> has index with bit (n-j) set when q_j = 1.
StateVector basis_state(int n, std::uint64_t index);

/// Applies P to psi in place (phase convention Y = iXZ).
void apply_pauli(const PauliString& p, Eigen::VectorXcd& psi);

/// Exact gate-by-gate evolution of a unitary-only circuit, n <= 14. Pauli
/// rotations use the cos/sin split from P^2 = I; sum gates factorize exactly.
StateVector sv_evolve(StateVector psi, const Circuit& circuit,
                      const Eigen::VectorXd& theta);

double sv_expectation(const StateVector& psi, const SpanElement& observable);
std::complex<double> sv_pauli_expectation(const StateVector& psi,
                                          const PauliString& p);

/// Reverse-mode gradient of <psi0| U^dag O U |psi0> over the circuit
/// parameters (adjoint statevector sweep, O(gates * 2^n)); the backing
/// engine for dense stage-2 optimizations and gradient-variance sampling.
struct SvGradient {
    Eigen::VectorXd values;
    double loss;
};
SvGradient sv_grad_expectation(const Circuit& circuit,
                               const Eigen::VectorXd& theta,
                               const StateVector& psi0,
                               const SpanElement& observable);

DensityMatrix dm_from_state(const StateVector& psi);
/// Exact noisy evolution (channels applied term by term), n <= 8.
DensityMatrix dm_noisy_evolve(DensityMatrix rho, const Circuit& circuit,
                              const Eigen::VectorXd& theta);
double dm_expectation(const DensityMatrix& rho, const SpanElement& observable);
std::complex<double> dm_pauli_expectation(const DensityMatrix& rho,
                                          const PauliString& p);

/// Dense 2^n x 2^n matrix of a unitary-only circuit, n <= 12.
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit,
                                 const Eigen::VectorXd& theta);
/// Dense matrix of a Hermitian operator, n <= 12.
Eigen::MatrixXcd dense_matrix(const SpanElement& h);
Eigen::MatrixXcd dense_pauli(const PauliString& p);

/// L_HST(U(theta), V) = 1 - |Tr(U^dag V)|^2 / 4^n, in [0,1]; n <= 12.
double hst_loss(const Circuit& circuit, const Eigen::VectorXd& theta,
                const Eigen::MatrixXcd& target);

/// Spectral form for targets V = exp(-itH) given the eigendecomposition
/// H = W diag(d) W^T of a real-symmetric H; streams columns, never forms V.
double hst_loss_spectral(const Circuit& circuit, const Eigen::VectorXd& theta,
                         const Eigen::MatrixXd& eigvecs,
                         const Eigen::VectorXd& eigvals, double t);

struct GroundState {
    double energy;
    StateVector state;
};
/// Lowest eigenpair by dense Hermitian diagonalization, n <= 12.
GroundState exact_ground_state(const SpanElement& h);

/// Eigendecomposition of a real-symmetric operator (all Pauli terms with an
/// even Y count and real coefficients), n <= 12.
void real_symmetric_eig(const SpanElement& h, Eigen::MatrixXd& eigvecs,
                        Eigen::VectorXd& eigvals);

/// Literal trace evaluation of the adjoint representation against `basis`:
/// entry (a,b) = -Tr[h [B_a, B_b]] / 2^n. Purely imaginary Hermitian. n <= 6.
Eigen::MatrixXcd dense_adjoint(const SpanElement& h, const LieBasis& basis);

}  // namespace gsim::oracle
