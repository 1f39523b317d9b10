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

#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gsim {

/// Phase-free n-qubit Pauli string in symplectic (X-mask, Z-mask) encoding.
///
/// Qubit j carries I, X, Z or Y for (x_j, z_j) = (0,0), (1,0), (0,1), (1,1).
/// The single phase convention used throughout is Y = i·X·Z, so the operator
/// represented on each site is i^(x_j z_j) X^(x_j) Z^(z_j), which is Hermitian.
/// Strings are immutable values; equality, hashing and ordering are mask-exact.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(int num_qubits);  // identity

    /// Dense text form, e.g. "XIZY" (qubit 1 leftmost).
    static PauliString from_dense(std::string_view text);
    /// Sparse text form with 1-indexed sites, e.g. "X1 Z3 Y4"; "I" or "" is
    /// the identity.
    static PauliString from_sparse(int num_qubits, std::string_view text);
    /// Accepts either text form.
    static PauliString parse(int num_qubits, std::string_view text);
    /// Single-site operator, `op` in {'X','Y','Z'}; `site` is 0-indexed.
    static PauliString single(int num_qubits, int site, char op);

    int num_qubits() const { return n_; }
    bool x_bit(int site) const { return bit(x_, site); }
    bool z_bit(int site) const { return bit(z_, site); }
    char site_op(int site) const;
    bool is_identity() const;
    int weight() const;  // number of non-identity sites

    PauliString& set(int site, char op);  // builder-style site assignment

    std::string str() const;         // dense form
    std::string sparse_str() const;  // sparse form, "I" for identity

    std::span<const std::uint64_t> x_words() const { return x_; }
    std::span<const std::uint64_t> z_words() const { return z_; }

    friend bool operator==(const PauliString&, const PauliString&) = default;
    std::strong_ordering operator<=>(const PauliString& other) const;

  private:
    static bool bit(const std::vector<std::uint64_t>& w, int site) {
        return (w[site >> 6] >> (site & 63)) & 1u;
    }
    friend PauliString make_pauli_from_words(int, std::vector<std::uint64_t>,
                                             std::vector<std::uint64_t>);
    int n_ = 0;
    std::vector<std::uint64_t> x_, z_;
};

struct PauliHash {
    std::size_t operator()(const PauliString& p) const noexcept;
};

/// A Pauli string together with a phase i^k, k in {0,1,2,3}.
struct PhasedPauli {
    PauliString string;
    int phase_pow = 0;  // phase is i^phase_pow
    std::complex<double> phase() const {
        static constexpr std::complex<double> table[4] = {
            {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return table[phase_pow & 3];
    }
};

/// P·Q = phase · R with phase in {±1, ±i}.
PhasedPauli multiply(const PauliString& p, const PauliString& q);

/// True iff the symplectic inner product x_P·z_Q + z_P·x_Q is even.
bool commutes(const PauliString& p, const PauliString& q);

struct SignedPauli {
    int sign;  // ±1
    PauliString string;
};

/// [P,Q] = 2i·sign·R, or nullopt when P and Q commute.
std::optional<SignedPauli> commutator(const PauliString& p,
                                      const PauliString& q);

inline int weight(const PauliString& p) { return p.weight(); }

}  // namespace gsim
