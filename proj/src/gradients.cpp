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

#include "gsim/gradients.hpp"

#include <unordered_map>

#include "gsim/errors.hpp"

namespace gsim {

namespace {

void apply_noise_diag(const CompiledCircuit::Element& elem, Eigen::VectorXd& e) {
    if (elem.keys) {
        const auto& keys = *elem.keys;
        for (Eigen::Index a = 0; a < e.size(); ++a) e[a] *= elem.table[keys[a]];
    } else {
        e.array() *= elem.table.array();
    }
}

// phi^T K eta over the generator's couplings, K_ab = -2 sign.
double skew_contraction(const AdjointGenerator& gen, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& eta) {
    double g = 0;
    for (const auto& cp : gen.couplings) {
        g += 2.0 * cp.sign * (phi[cp.b] * eta[cp.a] - phi[cp.a] * eta[cp.b]);
    }
    return g;
}

}  // namespace

GradientResult grad_expectation(const CompiledCircuit& circuit,
                                const Eigen::VectorXd& theta,
                                const Eigen::VectorXd& e_in,
                                const Eigen::VectorXd& w) {
    if (e_in.size() != circuit.dim() || w.size() != circuit.dim()) {
        throw SizeError("vector/basis dimension mismatch");
    }
    if (theta.size() < circuit.param_count()) {
        throw SizeError("parameter vector shorter than circuit parameter count");
    }
    const auto& elements = circuit.elements();

    // Forward pass; states before each channel are checkpointed so the
    // backward sweep never inverts a (possibly singular) channel diagonal.
    std::unordered_map<std::size_t, Eigen::VectorXd> checkpoints;
    Eigen::VectorXd eta = e_in;
    for (std::size_t t = 0; t < elements.size(); ++t) {
        const auto& elem = elements[t];
        if (elem.is_noise) {
            checkpoints.emplace(t, eta);
            apply_noise_diag(elem, eta);
        } else {
            double angle = circuit.gate_angle(elem, theta);
            for (const auto& term : elem.terms) {
                apply_gate_term(circuit.generator(term.generator),
                                angle * term.coeff, eta);
            }
        }
    }

    GradientResult result;
    result.loss = w.dot(eta);
    result.values = Eigen::VectorXd::Zero(circuit.param_count());

    Eigen::VectorXd phi = w;
    for (std::size_t ti = elements.size(); ti-- > 0;) {
        const auto& elem = elements[ti];
        if (elem.is_noise) {
            eta = checkpoints.at(ti);
            apply_noise_diag(elem, phi);  // diagonal is symmetric
            continue;
        }
        double angle = circuit.gate_angle(elem, theta);
        if (elem.param >= 0) {
            double g = 0;
            for (const auto& term : elem.terms) {
                g += term.coeff *
                     skew_contraction(circuit.generator(term.generator), phi, eta);
            }
            result.values[elem.param] += g;
        }
        for (const auto& term : elem.terms) {
            const auto& gen = circuit.generator(term.generator);
            apply_gate_term(gen, -angle * term.coeff, eta);
            apply_gate_term(gen, -angle * term.coeff, phi);
        }
    }
    return result;
}

double compilation_loss(const Eigen::MatrixXd& u_bar,
                        const Eigen::MatrixXd& v_bar) {
    if (u_bar.rows() != v_bar.rows() || u_bar.cols() != v_bar.cols() ||
        u_bar.rows() != u_bar.cols()) {
        throw SizeError("adjoint matrix dimension mismatch");
    }
    double dim = static_cast<double>(u_bar.rows());
    return 1.0 - u_bar.cwiseProduct(v_bar).sum() / dim;
}

GradientResult grad_compilation(const CompiledCircuit& circuit,
                                const Eigen::VectorXd& theta,
                                const Eigen::MatrixXd& v_bar) {
    if (circuit.has_noise()) {
        throw UnsupportedError("grad_compilation requires a unitary-only circuit");
    }
    const int dim = circuit.dim();
    if (v_bar.rows() != dim || v_bar.cols() != dim) {
        throw SizeError("target adjoint dimension mismatch");
    }
    if (theta.size() < circuit.param_count()) {
        throw SizeError("parameter vector shorter than circuit parameter count");
    }
    const auto& elements = circuit.elements();

    // Transposed storage keeps every sweep a contiguous column operation:
    //   Bt = (U_{1:m})^T, built forward; At = (L_m^T V)^T with L_m = U_{m+1:M}.
    Eigen::MatrixXd bt = Eigen::MatrixXd::Identity(dim, dim);
    for (const auto& elem : elements) {
        double angle = circuit.gate_angle(elem, theta);
        for (const auto& term : elem.terms) {
            apply_gate_term_cols(circuit.generator(term.generator),
                                 angle * term.coeff, bt);
        }
    }

    GradientResult result;
    result.loss = 1.0 - bt.cwiseProduct(v_bar.transpose()).sum() / dim;
    result.values = Eigen::VectorXd::Zero(circuit.param_count());

    Eigen::MatrixXd at = v_bar.transpose();
    for (std::size_t ti = elements.size(); ti-- > 0;) {
        const auto& elem = elements[ti];
        double angle = circuit.gate_angle(elem, theta);
        if (elem.param >= 0) {
            // (1/dim) sum[B ∘ (K A)] over this gate's terms; rows of A and B
            // are columns of at/bt.
            double g = 0;
            for (const auto& term : elem.terms) {
                const auto& gen = circuit.generator(term.generator);
                double gg = 0;
                for (const auto& cp : gen.couplings) {
                    gg += 2.0 * cp.sign *
                          (bt.col(cp.b).dot(at.col(cp.a)) -
                           bt.col(cp.a).dot(at.col(cp.b)));
                }
                g += term.coeff * gg;
            }
            result.values[elem.param] += g / dim;
        }
        for (const auto& term : elem.terms) {
            const auto& gen = circuit.generator(term.generator);
            apply_gate_term_cols(gen, -angle * term.coeff, bt);
            apply_gate_term_cols(gen, -angle * term.coeff, at);
        }
    }
    return result;
}

}  // namespace gsim
