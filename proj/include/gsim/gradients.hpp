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

#include "gsim/engine.hpp"

namespace gsim {

struct GradientResult {
    Eigen::VectorXd values;  // one entry per circuit parameter
    double loss;
};

/// Reverse-mode gradient of <O> = w . Phi(circuit) e_in.
///
/// Two-vector sweep: eta carries the forward-evolved state description, phi
/// the backward-evolved observable weights; each parametrized gate
/// contributes phi^T K eta through an O(dim) contraction over its couplings,
/// and gates sharing a parameter sum their contributions. Channels are
/// theta-independent: their diagonals enter both sweeps (forward states are
/// checkpointed at channels, which may be singular, instead of inverted).
/// Total cost O(M dim).
GradientResult grad_expectation(const CompiledCircuit& circuit,
                                const Eigen::VectorXd& theta,
                                const Eigen::VectorXd& e_in,
                                const Eigen::VectorXd& w);

/// L_g = 1 - Tr(Ubar^T Vbar)/dim, equal to |Ubar - Vbar|_HS^2 / (2 dim) for
/// orthogonal inputs. Sensitive to adjoint-space sign flips (group-center
/// ambiguity), unlike the Hilbert-Schmidt test.
double compilation_loss(const Eigen::MatrixXd& u_bar,
                        const Eigen::MatrixXd& v_bar);

/// Reverse-mode gradient of compilation_loss(adjoint_matrix(circuit), V).
/// Maintains the dense products (U_{m+1:M})^T V and U_{1:m}; every per-gate
/// update is a sparse sweep and the trace reduces to row dot products, so no
/// dense-dense multiplication occurs anywhere.
GradientResult grad_compilation(const CompiledCircuit& circuit,
                                const Eigen::VectorXd& theta,
                                const Eigen::MatrixXd& v_bar);

}  // namespace gsim
