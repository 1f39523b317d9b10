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

#include "gsim/engine.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "gsim/errors.hpp"

namespace gsim {

namespace {

// chi(v, b) for Paulis restricted to shared support: symplectic parity.
int chi_sign(const PauliString& v, const PauliString& b) {
    return commutes(v, b) ? 1 : -1;
}

// Non-identity sites of every term in the channel.
std::vector<int> channel_support(const NoiseChannel& ch) {
    std::vector<int> sites;
    int n = ch.num_qubits();
    for (int j = 0; j < n; ++j) {
        for (const auto& [p, v] : ch.terms) {
            if (v.site_op(j) != 'I') {
                sites.push_back(j);
                break;
            }
        }
    }
    return sites;
}

std::uint64_t support_mask_key(const std::vector<int>& sites) {
    // Sites fit arbitrary n; hash positions into a key. Collisions are
    // resolved by the map re-check below being keyed on exact positions
    // (sites are < 2^16 in practice, 4 of them pack into 64 bits).
    std::uint64_t key = 0;
    for (int s : sites) key = key * 65537u + static_cast<std::uint64_t>(s + 1);
    return key;
}

}  // namespace

CompiledCircuit::CompiledCircuit(const Circuit& circuit, BasisPtr basis)
    : basis_(std::move(basis)), param_count_(circuit.param_count) {
    if (circuit.n != basis_->num_qubits()) {
        throw SizeError("circuit and basis qubit counts differ");
    }
    elements_.reserve(circuit.elements.size());
    for (const auto& ce : circuit.elements) {
        Element elem;
        if (const Gate* g = std::get_if<Gate>(&ce)) {
            elem.param = g->param;
            elem.angle = g->angle;
            elem.terms.reserve(g->generator.terms.size());
            for (const auto& [p, c] : g->generator.terms) {
                auto it = generator_index_.find(p);
                int idx;
                if (it == generator_index_.end()) {
                    idx = static_cast<int>(generators_.size());
                    generators_.push_back(adjoint_rep(p, *basis_));
                    generator_index_.emplace(p, idx);
                } else {
                    idx = it->second;
                }
                elem.terms.push_back({c, idx});
            }
        } else {
            const auto& ch = std::get<NoiseChannel>(ce);
            elem.is_noise = true;
            has_noise_ = true;
            std::vector<int> sites = channel_support(ch);
            if (static_cast<int>(sites.size()) <= kMaxTableSites &&
                !sites.empty()) {
                // Key array shared by every channel on the same support.
                std::uint64_t mask_key = support_mask_key(sites);
                auto it = key_index_.find(mask_key);
                int ki;
                if (it == key_index_.end()) {
                    ki = static_cast<int>(key_arrays_.size());
                    auto keys = std::make_unique<std::vector<std::uint16_t>>();
                    keys->resize(basis_->dim());
                    for (int a = 0; a < basis_->dim(); ++a) {
                        const PauliString& b = basis_->element(a);
                        std::uint16_t key = 0;
                        for (std::size_t s = 0; s < sites.size(); ++s) {
                            key |= (b.x_bit(sites[s]) ? 1 : 0) << (2 * s);
                            key |= (b.z_bit(sites[s]) ? 1 : 0) << (2 * s + 1);
                        }
                        (*keys)[a] = key;
                    }
                    key_arrays_.push_back(std::move(keys));
                    key_index_.emplace(mask_key, ki);
                } else {
                    ki = it->second;
                }
                elem.keys = key_arrays_[ki].get();
                // d(table) over local configurations: chi depends only on the
                // basis element's restriction to the support sites.
                int m = static_cast<int>(sites.size());
                elem.table.resize(Eigen::Index{1} << (2 * m));
                PauliString probe(circuit.n);
                static constexpr char kOps[4] = {'I', 'X', 'Z', 'Y'};
                for (Eigen::Index k = 0; k < elem.table.size(); ++k) {
                    for (int s = 0; s < m; ++s) {
                        probe.set(sites[s], kOps[(k >> (2 * s)) & 3]);
                    }
                    double d = 0;
                    for (const auto& [p, v] : ch.terms) d += p * chi_sign(v, probe);
                    elem.table[k] = d;
                }
            } else {
                elem.table = noise_diagonal(ch, *basis_);
            }
        }
        elements_.push_back(std::move(elem));
    }
}

double CompiledCircuit::gate_angle(const Element& e,
                                   const Eigen::VectorXd& theta) const {
    if (e.param < 0) return e.angle;
    if (e.param >= theta.size()) {
        throw SizeError("parameter vector shorter than circuit parameter count");
    }
    return theta[e.param];
}

void apply_gate_term(const AdjointGenerator& gen, double angle,
                     Eigen::Ref<Eigen::VectorXd> e) {
    const double c = std::cos(2 * angle);
    const double s = std::sin(2 * angle);
    for (const auto& cp : gen.couplings) {
        const double ss = cp.sign * s;
        const double ea = e[cp.a], eb = e[cp.b];
        e[cp.a] = c * ea - ss * eb;
        e[cp.b] = ss * ea + c * eb;
    }
}

void apply_gate_term_rows(const AdjointGenerator& gen, double angle,
                          Eigen::MatrixXd& m) {
    const double c = std::cos(2 * angle);
    const double s = std::sin(2 * angle);
    for (const auto& cp : gen.couplings) {
        const double ss = cp.sign * s;
        Eigen::RowVectorXd ra = m.row(cp.a);
        m.row(cp.a) = c * ra - ss * m.row(cp.b);
        m.row(cp.b) = ss * ra + c * m.row(cp.b);
    }
}

void apply_gate_term_cols(const AdjointGenerator& gen, double angle,
                          Eigen::MatrixXd& m) {
    const double c = std::cos(2 * angle);
    const double s = std::sin(2 * angle);
    for (const auto& cp : gen.couplings) {
        const double ss = cp.sign * s;
        Eigen::VectorXd ca = m.col(cp.a);
        m.col(cp.a) = c * ca - ss * m.col(cp.b);
        m.col(cp.b) = ss * ca + c * m.col(cp.b);
    }
}

void accumulate_skew_apply(const AdjointGenerator& gen, double factor,
                           const Eigen::VectorXd& e, Eigen::VectorXd& y) {
    // K_ab = -2 sign, K_ba = +2 sign.
    for (const auto& cp : gen.couplings) {
        const double f = 2.0 * cp.sign * factor;
        y[cp.a] -= f * e[cp.b];
        y[cp.b] += f * e[cp.a];
    }
}

Eigen::VectorXd pauli_conjugation_signs(const PauliString& v,
                                        const LieBasis& basis) {
    Eigen::VectorXd chi(basis.dim());
    for (int a = 0; a < basis.dim(); ++a) {
        chi[a] = chi_sign(v, basis.element(a));
    }
    return chi;
}

Eigen::VectorXd noise_diagonal(const NoiseChannel& channel,
                               const LieBasis& basis) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(basis.dim());
    for (const auto& [p, v] : channel.terms) {
        if (p == 0.0) continue;
        for (int a = 0; a < basis.dim(); ++a) {
            d[a] += p * chi_sign(v, basis.element(a));
        }
    }
    return d;
}

namespace {

void apply_noise_element(const CompiledCircuit::Element& elem,
                         Eigen::VectorXd& e) {
    if (elem.keys) {
        const auto& keys = *elem.keys;
        for (Eigen::Index a = 0; a < e.size(); ++a) {
            e[a] *= elem.table[keys[a]];
        }
    } else {
        e.array() *= elem.table.array();
    }
}

void apply_gate_element(const CompiledCircuit& circuit,
                        const CompiledCircuit::Element& elem, double angle,
                        Eigen::VectorXd& e) {
    for (const auto& term : elem.terms) {
        apply_gate_term(circuit.generator(term.generator), angle * term.coeff, e);
    }
}

}  // namespace

Eigen::VectorXd evolve(const CompiledCircuit& circuit,
                       const Eigen::VectorXd& theta, Eigen::VectorXd e) {
    if (e.size() != circuit.dim()) throw SizeError("vector/basis dimension mismatch");
    for (const auto& elem : circuit.elements()) {
        if (elem.is_noise) {
            apply_noise_element(elem, e);
        } else {
            apply_gate_element(circuit, elem, circuit.gate_angle(elem, theta), e);
        }
    }
    return e;
}

ExpectationVector evolve(const Circuit& circuit, const Eigen::VectorXd& theta,
                         const ExpectationVector& e) {
    CompiledCircuit compiled(circuit, e.basis);
    return {e.basis, evolve(compiled, theta, e.values)};
}

Eigen::MatrixXd evolve_correlation(const CompiledCircuit& rows,
                                   const CompiledCircuit& cols,
                                   const Eigen::VectorXd& theta,
                                   Eigen::MatrixXd e) {
    if (rows.has_noise() || cols.has_noise()) {
        throw UnsupportedError(
            "evolve_correlation requires a unitary circuit; use "
            "sample_noisy_correlator for channels");
    }
    if (e.rows() != rows.dim() || e.cols() != cols.dim()) {
        throw SizeError("correlation matrix dimension mismatch");
    }
    for (std::size_t i = 0; i < rows.elements().size(); ++i) {
        const auto& re = rows.elements()[i];
        const auto& ce = cols.elements()[i];
        double angle = rows.gate_angle(re, theta);
        for (const auto& term : re.terms) {
            apply_gate_term_rows(rows.generator(term.generator),
                                 angle * term.coeff, e);
        }
        for (const auto& term : ce.terms) {
            apply_gate_term_cols(cols.generator(term.generator),
                                 angle * term.coeff, e);
        }
    }
    return e;
}

CorrelationMatrix evolve_correlation(const Circuit& circuit,
                                     const Eigen::VectorXd& theta,
                                     const CorrelationMatrix& e) {
    CompiledCircuit rows(circuit, e.basis1);
    CompiledCircuit cols(circuit, e.basis2);
    return {e.basis1, e.basis2, evolve_correlation(rows, cols, theta, e.values)};
}

TrajectoryEstimate sample_noisy_correlator(
    const Circuit& circuit, const Eigen::VectorXd& theta,
    const CorrelationMatrix& e_in, const Eigen::VectorXd& w1,
    const Eigen::VectorXd& w2, int trajectories, std::uint64_t seed) {
    if (trajectories < 1) throw SizeError("trajectory count must be >= 1");
    if (e_in.values.rows() != e_in.basis1->dim() ||
        e_in.values.cols() != e_in.basis2->dim()) {
        throw SizeError("correlation matrix dimension mismatch");
    }
    if (w1.size() != e_in.basis1->dim() || w2.size() != e_in.basis2->dim()) {
        throw SizeError("weight vector dimension mismatch");
    }

    // Lowered plan: gates as coupling sweeps on both bases, channels as
    // sampled sign diagonals per term.
    struct GateStep {
        std::vector<std::pair<double, AdjointGenerator>> rows, cols;
        int param;
        double angle;
    };
    struct ChannelStep {
        std::vector<double> cumulative;
        std::vector<Eigen::VectorXd> row_signs, col_signs;
    };
    std::vector<std::variant<GateStep, ChannelStep>> plan;
    for (const auto& ce : circuit.elements) {
        if (const Gate* g = std::get_if<Gate>(&ce)) {
            GateStep step;
            step.param = g->param;
            step.angle = g->angle;
            for (const auto& [p, c] : g->generator.terms) {
                step.rows.emplace_back(c, adjoint_rep(p, *e_in.basis1));
                step.cols.emplace_back(c, adjoint_rep(p, *e_in.basis2));
            }
            plan.emplace_back(std::move(step));
        } else {
            const auto& ch = std::get<NoiseChannel>(ce);
            ChannelStep step;
            double acc = 0;
            for (const auto& [p, v] : ch.terms) {
                acc += p;
                step.cumulative.push_back(acc);
                step.row_signs.push_back(pauli_conjugation_signs(v, *e_in.basis1));
                step.col_signs.push_back(pauli_conjugation_signs(v, *e_in.basis2));
            }
            plan.emplace_back(std::move(step));
        }
    }

    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng]() {
        return (rng() >> 11) * 0x1.0p-53;  // 53-bit mantissa draw
    };

    double mean = 0, m2 = 0;
    Eigen::MatrixXd e(e_in.values.rows(), e_in.values.cols());
    for (int s = 0; s < trajectories; ++s) {
        e = e_in.values;
        for (const auto& step : plan) {
            if (const GateStep* g = std::get_if<GateStep>(&step)) {
                double angle = g->param >= 0 ? theta[g->param] : g->angle;
                for (const auto& [c, gen] : g->rows) {
                    apply_gate_term_rows(gen, angle * c, e);
                }
                for (const auto& [c, gen] : g->cols) {
                    apply_gate_term_cols(gen, angle * c, e);
                }
            } else {
                const auto& ch = std::get<ChannelStep>(step);
                double u = uniform01();
                std::size_t k = 0;
                while (k + 1 < ch.cumulative.size() && u > ch.cumulative[k]) ++k;
                e.array().colwise() *= ch.row_signs[k].array();
                e.array().rowwise() *= ch.col_signs[k].transpose().array();
            }
        }
        double value = w1.dot(e * w2);
        // Welford accumulation.
        double delta = value - mean;
        mean += delta / (s + 1);
        m2 += delta * (value - mean);
    }
    double stderr_ = trajectories > 1
                         ? std::sqrt(m2 / (trajectories - 1.0) / trajectories)
                         : 0.0;
    return {mean, stderr_};
}

Eigen::MatrixXd adjoint_matrix(const CompiledCircuit& circuit,
                               const Eigen::VectorXd& theta) {
    if (circuit.has_noise()) {
        throw UnsupportedError("adjoint_matrix requires a unitary-only circuit");
    }
    const int dim = circuit.dim();
    // Built as Ubar^T so per-gate row rotations become contiguous column ops.
    Eigen::MatrixXd ut = Eigen::MatrixXd::Identity(dim, dim);
    for (const auto& elem : circuit.elements()) {
        double angle = circuit.gate_angle(elem, theta);
        for (const auto& term : elem.terms) {
            apply_gate_term_cols(circuit.generator(term.generator),
                                 angle * term.coeff, ut);
        }
    }
    return ut.transpose();
}

Eigen::MatrixXd skew_adjoint(const SpanElement& h, const LieBasis& basis) {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
    for (const auto& [p, c] : h.terms) {
        AdjointGenerator gen = adjoint_rep(p, basis);
        for (const auto& cp : gen.couplings) {
            k(cp.a, cp.b) -= 2.0 * cp.sign * c;
            k(cp.b, cp.a) += 2.0 * cp.sign * c;
        }
    }
    return k;
}

Eigen::MatrixXd target_adjoint(const SpanElement& h, double t,
                               const LieBasis& basis) {
    Eigen::MatrixXd k = skew_adjoint(h, basis);
    k *= t;
    return k.exp();
}

Eigen::VectorXd analog_evolve(
    const std::vector<std::pair<ControlFunction, SpanElement>>& terms,
    double total_time, double stepsize, const LieBasis& basis,
    Eigen::VectorXd e) {
    if (stepsize <= 0) throw SizeError("stepsize must be positive");
    if (e.size() != basis.dim()) throw SizeError("vector/basis dimension mismatch");

    std::vector<std::pair<ControlFunction, std::vector<AdjointGenerator>>> reps;
    std::vector<std::vector<double>> coeffs;
    for (const auto& [ctrl, h] : terms) {
        std::vector<AdjointGenerator> gens;
        std::vector<double> cs;
        for (const auto& [p, c] : h.terms) {
            gens.push_back(adjoint_rep(p, basis));
            cs.push_back(c);
        }
        reps.emplace_back(ctrl, std::move(gens));
        coeffs.push_back(std::move(cs));
    }

    auto rhs = [&](double t, const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        out.setZero();
        for (std::size_t h = 0; h < reps.size(); ++h) {
            double ctrl = reps[h].first(t);
            if (ctrl == 0.0) continue;
            for (std::size_t k = 0; k < reps[h].second.size(); ++k) {
                accumulate_skew_apply(reps[h].second[k], ctrl * coeffs[h][k], v,
                                      out);
            }
        }
    };

    const int steps = static_cast<int>(std::ceil(total_time / stepsize - 1e-12));
    const double dt = total_time / std::max(steps, 1);
    Eigen::VectorXd k1(e.size()), k2(e.size()), k3(e.size()), k4(e.size());
    Eigen::VectorXd tmp(e.size());
    for (int i = 0; i < steps; ++i) {
        double t = i * dt;
        rhs(t, e, k1);
        tmp = e + 0.5 * dt * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = e + 0.5 * dt * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = e + dt * k3;
        rhs(t + dt, tmp, k4);
        e += (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return e;
}

}  // namespace gsim
