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

#include "gsim/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "gsim/errors.hpp"

namespace gsim {

LieBasis LieBasis::from_elements(int num_qubits,
                                 std::vector<PauliString> elements) {
    LieBasis b;
    b.n_ = num_qubits;
    b.elements_ = std::move(elements);
    b.index_.reserve(b.elements_.size() * 2);
    for (int i = 0; i < b.dim(); ++i) {
        if (b.elements_[i].num_qubits() != num_qubits) {
            throw SizeError("basis element qubit count mismatch");
        }
        auto [it, inserted] = b.index_.emplace(b.elements_[i], i);
        (void)it;
        if (!inserted) throw SizeError("duplicate basis element");
    }
    return b;
}

int LieBasis::find(const PauliString& p) const {
    auto it = index_.find(p);
    return it == index_.end() ? -1 : it->second;
}

SpanElement::SpanElement(int n, std::vector<std::pair<PauliString, double>> t)
    : num_qubits(n), terms(std::move(t)) {}

SpanElement SpanElement::pauli(PauliString p, double coefficient) {
    SpanElement e(p.num_qubits());
    e.terms.emplace_back(std::move(p), coefficient);
    return e;
}

SpanElement& SpanElement::add(PauliString p, double coefficient) {
    if (num_qubits == 0) num_qubits = p.num_qubits();
    if (p.num_qubits() != num_qubits)
        throw SizeError("span term qubit count mismatch");
    for (auto& [q, c] : terms) {
        if (q == p) {
            c += coefficient;
            return *this;
        }
    }
    terms.emplace_back(std::move(p), coefficient);
    return *this;
}

double SpanElement::norm() const {
    double s = 0;
    for (const auto& [p, c] : terms) s += c * c;
    return std::sqrt(s);
}

SpanElement SpanElement::scaled(double factor) const {
    SpanElement e(num_qubits);
    e.terms.reserve(terms.size());
    for (const auto& [p, c] : terms) e.terms.emplace_back(p, c * factor);
    return e;
}

LieBasis lie_closure_pauli(const std::vector<PauliString>& generators,
                           const ClosureOptions& options) {
    if (generators.empty()) throw SizeError("closure needs at least one generator");
    int n = generators[0].num_qubits();

    std::vector<PauliString> elems;
    std::unordered_map<PauliString, int, PauliHash> seen;
    auto push = [&](const PauliString& p) {
        if (seen.emplace(p, static_cast<int>(elems.size())).second) {
            elems.push_back(p);
            if (static_cast<int>(elems.size()) > options.max_dim) {
                throw ResourceLimitError(
                    "Pauli closure exceeded cap of " +
                    std::to_string(options.max_dim) +
                    " elements (likely an exponential algebra); raise "
                    "ClosureOptions::max_dim to override");
            }
        }
    };
    for (const auto& g : generators) {
        if (g.num_qubits() != n) throw SizeError("generator qubit count mismatch");
        push(g);
    }
    // Breadth-first: each element is commuted against all earlier ones.
    for (std::size_t i = 1; i < elems.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            auto c = commutator(elems[i], elems[j]);
            if (c) push(c->string);
        }
    }
    return LieBasis::from_elements(n, std::move(elems));
}

namespace {

using TermMap = std::map<PauliString, double>;

TermMap to_map(const SpanElement& e) {
    TermMap m;
    for (const auto& [p, c] : e.terms) m[p] += c;
    return m;
}

double dot(const TermMap& a, const TermMap& b) {
    double s = 0;
    const TermMap& small = a.size() <= b.size() ? a : b;
    const TermMap& large = a.size() <= b.size() ? b : a;
    for (const auto& [p, c] : small) {
        auto it = large.find(p);
        if (it != large.end()) s += c * it->second;
    }
    return s;
}

double norm2(const TermMap& a) {
    double s = 0;
    for (const auto& [p, c] : a) s += c * c;
    return s;
}

void axpy(TermMap& y, double alpha, const TermMap& x) {
    for (const auto& [p, c] : x) y[p] += alpha * c;
}

// Hermitian representative of the bracket: [A,B] = 2i * bracket(A,B).
TermMap bracket(const TermMap& a, const TermMap& b) {
    TermMap r;
    for (const auto& [p, cp] : a) {
        for (const auto& [q, cq] : b) {
            auto c = commutator(p, q);
            if (c) r[c->string] += cp * cq * c->sign;
        }
    }
    return r;
}

}  // namespace

std::vector<SpanElement> lie_closure_span(
    const std::vector<SpanElement>& generators, const ClosureOptions& options,
    double tolerance) {
    if (generators.empty()) throw SizeError("closure needs at least one generator");
    int n = generators[0].num_qubits;

    std::vector<TermMap> basis;
    auto orthonormalize_push = [&](TermMap cand) -> bool {
        // Modified Gram-Schmidt, twice for numerical hygiene.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) axpy(cand, -dot(cand, b), b);
        }
        double nrm = std::sqrt(norm2(cand));
        if (nrm <= tolerance) return false;
        for (auto& [p, c] : cand) c /= nrm;
        std::erase_if(cand, [&](const auto& kv) {
            return std::abs(kv.second) < 1e-14;
        });
        basis.push_back(std::move(cand));
        if (static_cast<int>(basis.size()) > options.max_dim) {
            throw ResourceLimitError("span closure exceeded cap of " +
                                     std::to_string(options.max_dim));
        }
        return true;
    };

    for (const auto& g : generators) {
        if (g.num_qubits != n) throw SizeError("generator qubit count mismatch");
        orthonormalize_push(to_map(g));
    }
    for (std::size_t i = 1; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            orthonormalize_push(bracket(basis[i], basis[j]));
        }
    }

    std::vector<SpanElement> out;
    out.reserve(basis.size());
    for (const auto& m : basis) {
        SpanElement e(n);
        for (const auto& [p, c] : m) e.terms.emplace_back(p, c);
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

// A_i Z_{i+1} ... Z_{j-1} B_j with A,B in {X,Y}.
PauliString z_chain(int n, int i, int j, char a, char b) {
    PauliString p(n);
    p.set(i, a);
    for (int k = i + 1; k < j; ++k) p.set(k, 'Z');
    p.set(j, b);
    return p;
}

}  // namespace

LieBasis g0_basis(int n) {
    if (n < 2) throw SizeError("g0 basis requires n >= 2");
    std::vector<PauliString> elems;
    elems.reserve(static_cast<std::size_t>(n) * (2 * n - 1));
    for (int j = 0; j < n; ++j) elems.push_back(PauliString::single(n, j, 'Z'));
    static constexpr char kPairOps[4][2] = {
        {'X', 'X'}, {'Y', 'Y'}, {'X', 'Y'}, {'Y', 'X'}};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (const auto& ops : kPairOps) {
                elems.push_back(z_chain(n, i, j, ops[0], ops[1]));
            }
        }
    }
    return LieBasis::from_elements(n, std::move(elems));
}

std::vector<PauliString> g0_generators(int n) {
    std::vector<PauliString> gens;
    static constexpr char kPairOps[4][2] = {
        {'X', 'X'}, {'X', 'Y'}, {'Y', 'X'}, {'Y', 'Y'}};
    for (int j = 0; j + 1 < n; ++j) {
        for (const auto& ops : kPairOps) {
            gens.push_back(z_chain(n, j, j + 1, ops[0], ops[1]));
        }
    }
    for (int j = 0; j < n; ++j) gens.push_back(PauliString::single(n, j, 'Z'));
    return gens;
}

std::vector<PauliString> tfxy_hva_generators(int n) {
    std::vector<PauliString> gens;
    for (int j = 0; j + 1 < n; ++j) gens.push_back(z_chain(n, j, j + 1, 'X', 'X'));
    for (int j = 0; j + 1 < n; ++j) gens.push_back(z_chain(n, j, j + 1, 'Y', 'Y'));
    for (int j = 0; j < n; ++j) gens.push_back(PauliString::single(n, j, 'Z'));
    return gens;
}

std::vector<SpanElement> xy_generators(int n) {
    std::vector<SpanElement> gens;
    for (int j = 0; j + 1 < n; ++j)
        gens.push_back(SpanElement::pauli(z_chain(n, j, j + 1, 'X', 'X')));
    for (int j = 0; j + 1 < n; ++j)
        gens.push_back(SpanElement::pauli(z_chain(n, j, j + 1, 'Y', 'Y')));
    return gens;
}

std::vector<SpanElement> tfim_sum_generators(int n) {
    SpanElement xx(n), z(n);
    for (int j = 0; j + 1 < n; ++j) xx.add(z_chain(n, j, j + 1, 'X', 'X'), 1.0);
    for (int j = 0; j < n; ++j) z.add(PauliString::single(n, j, 'Z'), 1.0);
    return {xx, z};
}

std::vector<SpanElement> qaoa_path_generators(int n) {
    SpanElement zz(n), x(n);
    for (int j = 0; j + 1 < n; ++j) {
        PauliString p(n);
        p.set(j, 'Z').set(j + 1, 'Z');
        zz.add(std::move(p), 1.0);
    }
    for (int j = 0; j < n; ++j) x.add(PauliString::single(n, j, 'X'), 1.0);
    return {zz, x};
}

AdjointGenerator adjoint_rep(const PauliString& h, const LieBasis& basis) {
    if (h.num_qubits() != basis.num_qubits())
        throw SizeError("generator qubit count does not match basis");
    AdjointGenerator gen;
    gen.generator = h;
    for (int a = 0; a < basis.dim(); ++a) {
        auto c = commutator(h, basis.element(a));
        if (!c) continue;
        int b = basis.find(c->string);
        if (b < 0) {
            throw InvarianceError(
                "commutator of generator with basis element escapes the "
                "basis: [" + h.sparse_str() + ", " +
                basis.element(a).sparse_str() + "]");
        }
        if (a < b) {
            gen.couplings.push_back({a, b, static_cast<std::int8_t>(c->sign)});
        }
    }
    return gen;
}

std::vector<std::pair<double, AdjointGenerator>> adjoint_rep_sum(
    const SpanElement& h, const LieBasis& basis) {
    std::vector<std::pair<double, AdjointGenerator>> out;
    out.reserve(h.terms.size());
    for (const auto& [p, c] : h.terms) {
        if (c == 0.0) continue;
        out.emplace_back(c, adjoint_rep(p, basis));
    }
    return out;
}

void write_basis_csv(std::ostream& out, const LieBasis& basis) {
    out << "index,pauli_string\n";
    for (int i = 0; i < basis.dim(); ++i) {
        out << i << ',' << basis.element(i).sparse_str() << '\n';
    }
}

void write_adjoint_csv(std::ostream& out, const AdjointGenerator& gen) {
    out << "alpha,beta,sign\n";
    for (const auto& c : gen.couplings) {
        out << c.a << ',' << c.b << ',' << int(c.sign) << '\n';
    }
}

}  // namespace gsim
