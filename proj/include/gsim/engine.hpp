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
#include <cstdint>
#include <functional>
#include <vector>

#include "gsim/circuit.hpp"
#include "gsim/errors.hpp"
#include "gsim/states.hpp"

namespace gsim {

// Evolution of classical state descriptions through circuits.
//
// A gate e^{-i theta P} acts on e as an exact sequence of Givens rotations
// read off the coupling list of Phi^ad(P): for each coupling (a, b, s),
//   (e_a, e_b) <- (cos(2t) e_a - s sin(2t) e_b, s sin(2t) e_a + cos(2t) e_b)
// with t the term angle. Couplings within one generator are disjoint, so a
// Pauli-term gate costs O(dim). Sum gates apply their (commuting) terms in
// order. A Pauli channel acts as the diagonal d_a = sum_k p_k chi(V_k, B_a)
// with chi = +1/-1 for commuting/anticommuting pairs.

/// Circuit lowered against a basis: per-gate coupling lists (deduplicated
/// across repeated generators) and per-channel diagonal factors. Immutable
/// after construction; safe to share across threads.
class CompiledCircuit {
  public:
    CompiledCircuit(const Circuit& circuit, BasisPtr basis);

    struct GateTerm {
        double coeff;
        std::int32_t generator;  // index into generators()
    };
    struct Element {
        bool is_noise = false;
        int param = -1;      // gates: parameter index, or
        double angle = 0.0;  //   fixed angle when param < 0
        std::vector<GateTerm> terms;
        // Channels with support on <= kMaxTableSites sites store a value
        // table indexed by the basis element's local site configuration;
        // wider channels store the dense diagonal in `table` directly with
        // `keys` empty.
        const std::vector<std::uint16_t>* keys = nullptr;
        Eigen::VectorXd table;
    };

    static constexpr int kMaxTableSites = 4;

    int dim() const { return basis_->dim(); }
    int param_count() const { return param_count_; }
    const BasisPtr& basis() const { return basis_; }
    const std::vector<Element>& elements() const { return elements_; }
    const AdjointGenerator& generator(int i) const { return generators_[i]; }
    bool has_noise() const { return has_noise_; }
    double gate_angle(const Element& e, const Eigen::VectorXd& theta) const;

  private:
    BasisPtr basis_;
    int param_count_ = 0;
    bool has_noise_ = false;
    std::vector<AdjointGenerator> generators_;
    std::unordered_map<PauliString, int, PauliHash> generator_index_;
    std::vector<Element> elements_;
    // Site-configuration keys per distinct channel support set.
    std::vector<std::unique_ptr<std::vector<std::uint16_t>>> key_arrays_;
    std::unordered_map<std::uint64_t, int> key_index_;
};

/// One Givens sweep: applies e^{-i angle Phi^ad(gen)} to e in place.
void apply_gate_term(const AdjointGenerator& gen, double angle,
                     Eigen::Ref<Eigen::VectorXd> e);
/// Row action on a dense matrix: M <- R M (rows rotated pairwise).
void apply_gate_term_rows(const AdjointGenerator& gen, double angle,
                          Eigen::MatrixXd& m);
/// Column action: M <- M R^T.
void apply_gate_term_cols(const AdjointGenerator& gen, double angle,
                          Eigen::MatrixXd& m);
/// y += factor * K e where K = -i Phi^ad(gen) is the real antisymmetric form.
void accumulate_skew_apply(const AdjointGenerator& gen, double factor,
                           const Eigen::VectorXd& e, Eigen::VectorXd& y);

/// Noise diagonal d_a = sum_k p_k chi(V_k, B_a), |d_a| <= 1.
Eigen::VectorXd noise_diagonal(const NoiseChannel& channel,
                               const LieBasis& basis);
/// Commutation signs chi(v, B_a) in {-1, +1} for a single Pauli.
Eigen::VectorXd pauli_conjugation_signs(const PauliString& v,
                                        const LieBasis& basis);

/// e_out = Phi^Ad(circuit) e_in, with channel diagonals interleaved in
/// circuit order (exact noisy evolution).
Eigen::VectorXd evolve(const CompiledCircuit& circuit,
                       const Eigen::VectorXd& theta, Eigen::VectorXd e);
ExpectationVector evolve(const Circuit& circuit, const Eigen::VectorXd& theta,
                         const ExpectationVector& e);

inline double expectation(const Eigen::VectorXd& w, const Eigen::VectorXd& e) {
    if (w.size() != e.size()) throw SizeError("weight/vector length mismatch");
    return w.dot(e);
}

/// E_out = Ubar E_in Ubar^T for a unitary-only circuit; rows evolve in
/// basis1, columns in basis2. Throws UnsupportedError when noise is present
/// (use sample_noisy_correlator).
Eigen::MatrixXd evolve_correlation(const CompiledCircuit& rows,
                                   const CompiledCircuit& cols,
                                   const Eigen::VectorXd& theta,
                                   Eigen::MatrixXd e);
CorrelationMatrix evolve_correlation(const Circuit& circuit,
                                     const Eigen::VectorXd& theta,
                                     const CorrelationMatrix& e);

struct TrajectoryEstimate {
    double estimate;
    double standard_error;
};

/// Monte Carlo estimate of w1^T E_out w2 for circuits with Pauli channels:
/// samples S noise trajectories, applying the sampled Pauli conjugation
/// signs on both sides of E. Variance scales as 1/S.
TrajectoryEstimate sample_noisy_correlator(
    const Circuit& circuit, const Eigen::VectorXd& theta,
    const CorrelationMatrix& e_in, const Eigen::VectorXd& w1,
    const Eigen::VectorXd& w2, int trajectories, std::uint64_t seed);

/// Dense Phi^Ad of a unitary-only circuit; orthogonal to ~1e-9.
Eigen::MatrixXd adjoint_matrix(const CompiledCircuit& circuit,
                               const Eigen::VectorXd& theta);

/// Vbar = Phi^Ad(e^{-i T H}) = expm(T K_H) with K_H real antisymmetric,
/// computed by scaling-and-squaring.
Eigen::MatrixXd target_adjoint(const SpanElement& h, double t,
                               const LieBasis& basis);

/// Real antisymmetric K_H = -i Phi^ad(H) as a dense matrix.
Eigen::MatrixXd skew_adjoint(const SpanElement& h, const LieBasis& basis);

using ControlFunction = std::function<double(double)>;

/// RK4 integration of de/dt = sum_h c_h(t) K_h e over [0, T].
Eigen::VectorXd analog_evolve(
    const std::vector<std::pair<ControlFunction, SpanElement>>& terms,
    double total_time, double stepsize, const LieBasis& basis,
    Eigen::VectorXd e);

}  // namespace gsim
