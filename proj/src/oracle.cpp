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

#include "gsim/oracle.hpp"

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gsim/errors.hpp"

namespace gsim::oracle {

namespace {

using cd = std::complex<double>;
constexpr cd kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_cap(int n, int cap, const char* what) {
    if (n > cap) {
        throw ResourceLimitError(std::string(what) + " limited to n <= " +
                                 std::to_string(cap));
    }
}

// Global index convention: qubit j (0-based) owns bit (n-1-j).
std::uint64_t qubit_bit(int n, int j) { return std::uint64_t{1} << (n - 1 - j); }

// Index-space masks of a Pauli string plus its Y-count phase.
struct DensePauli {
    std::uint64_t x = 0, z = 0;
    cd mu{1, 0};
};

DensePauli index_masks(const PauliString& p) {
    DensePauli d;
    int n = p.num_qubits();
    for (int j = 0; j < n; ++j) {
        if (p.x_bit(j)) d.x |= qubit_bit(n, j);
        if (p.z_bit(j)) d.z |= qubit_bit(n, j);
    }
    d.mu = kIPow[std::popcount(d.x & d.z) & 3];
    return d;
}

// psi' = exp(-i theta P) psi = cos(theta) psi - i sin(theta) P psi.
void apply_pauli_rotation(const PauliString& p, double theta,
                          Eigen::VectorXcd& psi) {
    DensePauli d = index_masks(p);
    const cd c = std::cos(theta);
    const cd ms = cd(0, -1) * std::sin(theta);
    const std::uint64_t dim = psi.size();
    if (d.x == 0) {
        for (std::uint64_t i = 0; i < dim; ++i) {
            double sgn = (std::popcount(d.z & i) & 1) ? -1.0 : 1.0;
            psi[i] *= c + ms * d.mu * sgn;
        }
        return;
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
        std::uint64_t j = i ^ d.x;
        if (j < i) continue;
        double sgn_i = (std::popcount(d.z & i) & 1) ? -1.0 : 1.0;
        double sgn_j = (std::popcount(d.z & j) & 1) ? -1.0 : 1.0;
        cd ai = psi[i], aj = psi[j];
        psi[i] = c * ai + ms * d.mu * sgn_j * aj;
        psi[j] = c * aj + ms * d.mu * sgn_i * ai;
    }
}

void apply_gate(const Gate& g, double theta, Eigen::VectorXcd& psi) {
    for (const auto& [p, coeff] : g.generator.terms) {
        apply_pauli_rotation(p, theta * coeff, psi);
    }
}

double gate_angle(const Gate& g, const Eigen::VectorXd& theta) {
    if (!g.is_parametrized()) return g.angle;
    if (g.param >= theta.size()) throw SizeError("parameter vector too short");
    return theta[g.param];
}

}  // namespace

void apply_pauli(const PauliString& p, Eigen::VectorXcd& psi) {
    DensePauli d = index_masks(p);
    const std::uint64_t dim = psi.size();
    Eigen::VectorXcd out(dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
        double sgn = (std::popcount(d.z & i) & 1) ? -1.0 : 1.0;
        out[static_cast<Eigen::Index>(i ^ d.x)] =
            d.mu * sgn * psi[static_cast<Eigen::Index>(i)];
    }
    psi = std::move(out);
}

StateVector make_state(const StateSpec& spec) {
    check_cap(spec.num_qubits(), kMaxStateQubits, "statevector");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
    for (const auto& block : spec.blocks()) {
        Eigen::VectorXcd next(amps.size() * block.amps.size());
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            for (Eigen::Index k = 0; k < block.amps.size(); ++k) {
                next[i * block.amps.size() + k] = amps[i] * block.amps[k];
            }
        }
        amps = std::move(next);
    }
    return {spec.num_qubits(), std::move(amps)};
}

StateVector basis_state(int n, std::uint64_t index) {
    check_cap(n, kMaxStateQubits, "statevector");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return {n, std::move(amps)};
}

StateVector sv_evolve(StateVector psi, const Circuit& circuit,
                      const Eigen::VectorXd& theta) {
    check_cap(circuit.n, kMaxStateQubits, "statevector");
    if (psi.n != circuit.n) throw SizeError("state/circuit qubit mismatch");
    for (const auto& e : circuit.elements) {
        const Gate* g = std::get_if<Gate>(&e);
        if (!g) throw UnsupportedError("sv_evolve does not support noise");
        apply_gate(*g, gate_angle(*g, theta), psi.amps);
    }
    return psi;
}

std::complex<double> sv_pauli_expectation(const StateVector& psi,
                                          const PauliString& p) {
    Eigen::VectorXcd tmp = psi.amps;
    apply_pauli(p, tmp);
    return psi.amps.dot(tmp);  // conjugates the left argument
}

double sv_expectation(const StateVector& psi, const SpanElement& observable) {
    double acc = 0;
    for (const auto& [p, c] : observable.terms) {
        acc += c * sv_pauli_expectation(psi, p).real();
    }
    return acc;
}

SvGradient sv_grad_expectation(const Circuit& circuit,
                               const Eigen::VectorXd& theta,
                               const StateVector& psi0,
                               const SpanElement& observable) {
    check_cap(circuit.n, kMaxStateQubits, "statevector");
    if (psi0.n != circuit.n) throw SizeError("state/circuit qubit mismatch");

    StateVector psi = sv_evolve(psi0, circuit, theta);
    SvGradient result;
    result.loss = sv_expectation(psi, observable);
    result.values = Eigen::VectorXd::Zero(circuit.param_count);

    // lambda = O psi; then unwind gate by gate. Each generator commutes with
    // its own gate, so the contraction may follow the unwind:
    //   d<O>/dtheta_m = 2 Im <lambda_m| G_m |psi_m>.
    Eigen::VectorXcd lambda = Eigen::VectorXcd::Zero(psi.amps.size());
    Eigen::VectorXcd tmp(psi.amps.size());
    for (const auto& [p, c] : observable.terms) {
        tmp = psi.amps;
        apply_pauli(p, tmp);
        lambda += c * tmp;
    }
    for (auto it = circuit.elements.rbegin(); it != circuit.elements.rend();
         ++it) {
        const Gate* g = std::get_if<Gate>(&*it);
        if (!g) throw UnsupportedError("sv gradients do not support noise");
        double angle = gate_angle(*g, theta);
        apply_gate(*g, -angle, psi.amps);
        apply_gate(*g, -angle, lambda);
        if (!g->is_parametrized()) continue;
        std::complex<double> inner = 0;
        for (const auto& [p, c] : g->generator.terms) {
            tmp = psi.amps;
            apply_pauli(p, tmp);
            inner += c * lambda.dot(tmp);
        }
        result.values[g->param] += 2.0 * inner.imag();
    }
    return result;
}

DensityMatrix dm_from_state(const StateVector& psi) {
    check_cap(psi.n, kMaxDensityQubits, "density matrix");
    return {psi.n, psi.amps * psi.amps.adjoint()};
}

DensityMatrix dm_noisy_evolve(DensityMatrix rho, const Circuit& circuit,
                              const Eigen::VectorXd& theta) {
    check_cap(circuit.n, kMaxDensityQubits, "density matrix");
    if (rho.n != circuit.n) throw SizeError("state/circuit qubit mismatch");
    const Eigen::Index dim = rho.rho.rows();
    for (const auto& e : circuit.elements) {
        if (const Gate* g = std::get_if<Gate>(&e)) {
            double th = gate_angle(*g, theta);
            // rho <- U rho U^dag as two column passes with an adjoint swap.
            for (Eigen::Index col = 0; col < dim; ++col) {
                Eigen::VectorXcd v = rho.rho.col(col);
                apply_gate(*g, th, v);
                rho.rho.col(col) = v;
            }
            rho.rho.adjointInPlace();
            for (Eigen::Index col = 0; col < dim; ++col) {
                Eigen::VectorXcd v = rho.rho.col(col);
                apply_gate(*g, th, v);
                rho.rho.col(col) = v;
            }
            rho.rho.adjointInPlace();
        } else {
            const auto& ch = std::get<NoiseChannel>(e);
            Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
            for (const auto& [prob, v] : ch.terms) {
                if (prob == 0.0) continue;
                DensePauli d = index_masks(v);
                // (V rho V)_{ij} = v_i v_j^* rho_{i^x, j^x} with
                // v_i = mu (-1)^{popcount(z & i)}.
                for (Eigen::Index i = 0; i < dim; ++i) {
                    double si = (std::popcount(d.z & std::uint64_t(i)) & 1)
                                    ? -1.0 : 1.0;
                    auto ix = static_cast<Eigen::Index>(std::uint64_t(i) ^ d.x);
                    for (Eigen::Index j = 0; j < dim; ++j) {
                        double sj = (std::popcount(d.z & std::uint64_t(j)) & 1)
                                        ? -1.0 : 1.0;
                        auto jx =
                            static_cast<Eigen::Index>(std::uint64_t(j) ^ d.x);
                        out(i, j) += prob * si * sj * rho.rho(ix, jx);
                    }
                }
            }
            rho.rho = std::move(out);
        }
    }
    return rho;
}

std::complex<double> dm_pauli_expectation(const DensityMatrix& rho,
                                          const PauliString& p) {
    DensePauli d = index_masks(p);
    const Eigen::Index dim = rho.rho.rows();
    cd acc = 0;
    // P|k> = mu (-1)^{popcount(z&k)} |k^x>, hence P_{k^x,k} = c_k and
    // Tr[P rho] = sum_k c_k rho_{k, k^x}.
    for (Eigen::Index k = 0; k < dim; ++k) {
        double sgn = (std::popcount(d.z & std::uint64_t(k)) & 1) ? -1.0 : 1.0;
        auto kx = static_cast<Eigen::Index>(std::uint64_t(k) ^ d.x);
        acc += d.mu * sgn * rho.rho(k, kx);
    }
    return acc;
}

double dm_expectation(const DensityMatrix& rho, const SpanElement& observable) {
    double acc = 0;
    for (const auto& [p, c] : observable.terms) {
        acc += c * dm_pauli_expectation(rho, p).real();
    }
    return acc;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit,
                                 const Eigen::VectorXd& theta) {
    check_cap(circuit.n, kMaxUnitaryQubits, "dense unitary");
    const Eigen::Index dim = Eigen::Index{1} << circuit.n;
    Eigen::MatrixXcd u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        StateVector psi = basis_state(circuit.n, col);
        psi = sv_evolve(std::move(psi), circuit, theta);
        u.col(col) = psi.amps;
    }
    return u;
}

Eigen::MatrixXcd dense_pauli(const PauliString& p) {
    check_cap(p.num_qubits(), kMaxUnitaryQubits, "dense operator");
    const Eigen::Index dim = Eigen::Index{1} << p.num_qubits();
    DensePauli d = index_masks(p);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        double sgn = (std::popcount(d.z & std::uint64_t(i)) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(std::uint64_t(i) ^ d.x), i) = d.mu * sgn;
    }
    return m;
}

Eigen::MatrixXcd dense_matrix(const SpanElement& h) {
    check_cap(h.num_qubits, kMaxUnitaryQubits, "dense operator");
    const Eigen::Index dim = Eigen::Index{1} << h.num_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [p, c] : h.terms) m += c * dense_pauli(p);
    return m;
}

double hst_loss(const Circuit& circuit, const Eigen::VectorXd& theta,
                const Eigen::MatrixXcd& target) {
    check_cap(circuit.n, kMaxUnitaryQubits, "Hilbert-Schmidt test");
    const Eigen::Index dim = Eigen::Index{1} << circuit.n;
    if (target.rows() != dim || target.cols() != dim) {
        throw SizeError("target unitary dimension mismatch");
    }
    // Tr(U^dag V) accumulated column by column; U is never materialized.
    cd trace = 0;
    for (Eigen::Index col = 0; col < dim; ++col) {
        StateVector psi = basis_state(circuit.n, col);
        psi = sv_evolve(std::move(psi), circuit, theta);
        trace += psi.amps.dot(target.col(col));
    }
    double d2 = static_cast<double>(dim) * static_cast<double>(dim);
    return 1.0 - std::norm(trace) / d2;
}

double hst_loss_spectral(const Circuit& circuit, const Eigen::VectorXd& theta,
                         const Eigen::MatrixXd& eigvecs,
                         const Eigen::VectorXd& eigvals, double t) {
    check_cap(circuit.n, kMaxUnitaryQubits, "Hilbert-Schmidt test");
    const Eigen::Index dim = Eigen::Index{1} << circuit.n;
    if (eigvecs.rows() != dim) throw SizeError("eigenvector dimension mismatch");
    // Tr(U^dag V) = sum_k e^{-i t d_k} <w_k|U^dag|w_k>
    //            = sum_k e^{-i t d_k} conj(<w_k|U|w_k>).
    cd trace = 0;
    StateVector psi{circuit.n, Eigen::VectorXcd(dim)};
    for (Eigen::Index k = 0; k < dim; ++k) {
        psi.amps = eigvecs.col(k).cast<cd>();
        StateVector u = sv_evolve(psi, circuit, theta);
        cd val = (eigvecs.col(k).cast<cd>()).dot(u.amps);
        trace += std::exp(cd(0, -t * eigvals[k])) * std::conj(val);
    }
    double d2 = static_cast<double>(dim) * static_cast<double>(dim);
    return 1.0 - std::norm(trace) / d2;
}

namespace {

bool is_real_symmetric(const SpanElement& h) {
    for (const auto& [p, c] : h.terms) {
        int ycount = 0;
        for (int j = 0; j < p.num_qubits(); ++j) {
            ycount += p.site_op(j) == 'Y';
        }
        if (ycount & 1) return false;
    }
    return true;
}

}  // namespace

void real_symmetric_eig(const SpanElement& h, Eigen::MatrixXd& eigvecs,
                        Eigen::VectorXd& eigvals) {
    check_cap(h.num_qubits, kMaxUnitaryQubits, "dense diagonalization");
    if (!is_real_symmetric(h)) {
        throw UnsupportedError("operator is not real symmetric (odd Y count)");
    }
    Eigen::MatrixXd m = dense_matrix(h).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed");
    }
    eigvecs = solver.eigenvectors();
    eigvals = solver.eigenvalues();
}

GroundState exact_ground_state(const SpanElement& h) {
    check_cap(h.num_qubits, kMaxUnitaryQubits, "exact diagonalization");
    const Eigen::Index dim = Eigen::Index{1} << h.num_qubits;
    StateVector state{h.num_qubits, Eigen::VectorXcd(dim)};
    if (h.terms.empty()) {
        state.amps.setZero();
        state.amps[0] = 1.0;
        return {0.0, std::move(state)};
    }
    if (is_real_symmetric(h)) {
        Eigen::MatrixXd vecs;
        Eigen::VectorXd vals;
        real_symmetric_eig(h, vecs, vals);
        state.amps = vecs.col(0).cast<cd>();
        return {vals[0], std::move(state)};
    }
    Eigen::MatrixXcd m = dense_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed");
    }
    state.amps = solver.eigenvectors().col(0);
    return {solver.eigenvalues()[0], std::move(state)};
}

Eigen::MatrixXcd dense_adjoint(const SpanElement& h, const LieBasis& basis) {
    check_cap(h.num_qubits, 6, "dense adjoint representation");
    const int dim = basis.dim();
    const double norm = std::pow(2.0, -h.num_qubits);
    Eigen::MatrixXcd hbar = Eigen::MatrixXcd::Zero(dim, dim);
    Eigen::MatrixXcd hm = dense_matrix(h);
    std::vector<Eigen::MatrixXcd> b(dim);
    for (int i = 0; i < dim; ++i) b[i] = dense_pauli(basis.element(i));
    for (int a = 0; a < dim; ++a) {
        for (int bb = 0; bb < dim; ++bb) {
            Eigen::MatrixXcd comm = b[a] * b[bb] - b[bb] * b[a];
            hbar(a, bb) = -norm * (hm * comm).trace();
        }
    }
    return hbar;
}

}  // namespace gsim::oracle
