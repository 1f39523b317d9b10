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

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsim/pauli.hpp"

namespace gsim {

/// Ordered, indexed Pauli basis of an invariant operator subspace.
///
/// Elements are distinct Pauli strings, hence Schmidt-orthonormal under the
/// normalization Tr[B_a B_b]/2^n = delta_ab. Bases produced by the closure
/// routines are closed under commutation.
class LieBasis {
  public:
    LieBasis() = default;
    static LieBasis from_elements(int num_qubits,
                                  std::vector<PauliString> elements);

    int num_qubits() const { return n_; }
    int dim() const { return static_cast<int>(elements_.size()); }
    const PauliString& element(int i) const { return elements_[i]; }
    const std::vector<PauliString>& elements() const { return elements_; }

    /// Index of `p`, or -1 when absent.
    int find(const PauliString& p) const;

  private:
    int n_ = 0;
    std::vector<PauliString> elements_;
    std::unordered_map<PauliString, int, PauliHash> index_;
};

using BasisPtr = std::shared_ptr<const LieBasis>;

/// Hermitian operator as a finitely supported real combination of Paulis.
struct SpanElement {
    int num_qubits = 0;
    std::vector<std::pair<PauliString, double>> terms;

    SpanElement() = default;
    explicit SpanElement(int n) : num_qubits(n) {}
    SpanElement(int n, std::vector<std::pair<PauliString, double>> t);
    static SpanElement pauli(PauliString p, double coefficient = 1.0);

    SpanElement& add(PauliString p, double coefficient);
    double norm() const;  // sqrt(sum of squared coefficients) = HS1 norm
    SpanElement scaled(double factor) const;
    bool empty() const { return terms.empty(); }
};

struct ClosureOptions {
    /// Guards against accidental exponential algebras. Callers working with
    /// known polynomial algebras at large n raise this explicitly.
    int max_dim = 20000;
};

/// Lie closure of Pauli generators under nested commutation (up to sign and
/// the 2i commutator factor, every nested commutator of Paulis is a Pauli).
/// Deterministic ordering: insertion order of a breadth-first sweep seeded by
/// the deduplicated generators.
LieBasis lie_closure_pauli(const std::vector<PauliString>& generators,
                           const ClosureOptions& options = {});

/// Lie closure of sum generators in Pauli-coefficient space, orthonormalized
/// by modified Gram-Schmidt. An element is new when its residual norm exceeds
/// `tolerance`.
std::vector<SpanElement> lie_closure_span(
    const std::vector<SpanElement>& generators,
    const ClosureOptions& options = {}, double tolerance = 1e-10);

/// The explicit basis of the TFXY algebra:
///   { Z_j | j=1..n }  followed by, for each pair i<j (lexicographic),
///   the Z-chain strings A_i Z_{i+1}..Z_{j-1} B_j for (A,B) in
///   [XX, YY, XY, YX] order. Size n(2n-1). Requires n >= 2.
LieBasis g0_basis(int n);

/// Generator sets used by the experiments.
std::vector<PauliString> g0_generators(int n);          // {s^u_j s^v_{j+1}} u {Z_j}
std::vector<PauliString> tfxy_hva_generators(int n);    // {XX_j, YY_j} u {Z_j}
std::vector<SpanElement> xy_generators(int n);          // {XX_j}, {YY_j}
std::vector<SpanElement> tfim_sum_generators(int n);    // {sum XX, sum Z}
std::vector<SpanElement> qaoa_path_generators(int n);   // {sum ZZ, sum X}

/// Sparse pairing form of the adjoint representation of a Pauli generator.
///
/// A coupling (a, b, sign) with a < b records [G, B_a] = 2i·sign·B_b. Each
/// index appears in at most one coupling; the nonzero eigenvalues of the
/// represented matrix are exactly ±2.
struct AdjointGenerator {
    struct Coupling {
        std::int32_t a;
        std::int32_t b;
        std::int8_t sign;
    };
    PauliString generator;
    std::vector<Coupling> couplings;
};

/// Builds the pairing representation of Phi^ad(h) against `basis` in
/// O(dim · n/word). Throws InvarianceError when a commutator escapes the
/// basis (h must lie in the normalizer of the spanned subspace).
AdjointGenerator adjoint_rep(const PauliString& h, const LieBasis& basis);

/// Adjoint representation of a Pauli-sum generator as a weighted list;
/// dense materialization is left to consumers.
std::vector<std::pair<double, AdjointGenerator>> adjoint_rep_sum(
    const SpanElement& h, const LieBasis& basis);

/// CSV export: (index, pauli_string) rows.
void write_basis_csv(std::ostream& out, const LieBasis& basis);
/// CSV export: (alpha, beta, sign) rows for one generator.
void write_adjoint_csv(std::ostream& out, const AdjointGenerator& gen);

}  // namespace gsim
