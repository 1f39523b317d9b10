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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "gsim/algebra.hpp"
#include "gsim/errors.hpp"
#include "gsim/oracle.hpp"
#include "test_support.hpp"

using namespace gsim;

TEST_CASE("g0 basis: explicit order at n=2, size n(2n-1)") {
    LieBasis b = g0_basis(2);
    REQUIRE(b.dim() == 6);
    CHECK(b.element(0) == PauliString::from_dense("ZI"));
    CHECK(b.element(1) == PauliString::from_dense("IZ"));
    CHECK(b.element(2) == PauliString::from_dense("XX"));
    CHECK(b.element(3) == PauliString::from_dense("YY"));
    CHECK(b.element(4) == PauliString::from_dense("XY"));
    CHECK(b.element(5) == PauliString::from_dense("YX"));

    for (int n = 2; n <= 8; ++n) {
        CHECK(g0_basis(n).dim() == n * (2 * n - 1));
    }
    CHECK_THROWS_AS(g0_basis(1), SizeError);
}

TEST_CASE("g0 basis at n=3 contains the XZX chain") {
    LieBasis b = g0_basis(3);
    REQUIRE(b.dim() == 15);
    CHECK(b.find(PauliString::from_dense("XZX")) >= 0);
}

TEST_CASE("closure of g0 generators equals the explicit basis as a set") {
    for (int n = 2; n <= 6; ++n) {
        LieBasis closed = lie_closure_pauli(g0_generators(n));
        LieBasis explicit_basis = g0_basis(n);
        REQUIRE(closed.dim() == explicit_basis.dim());
        for (const auto& e : explicit_basis.elements()) {
            CHECK(closed.find(e) >= 0);
        }
    }
}

// Independent oracle: dimension of the span of all nested commutators,
// computed with dense matrices and rank revealing QR.
static int dense_closure_dim(const std::vector<PauliString>& gens) {
    std::vector<Eigen::MatrixXcd> ops;
    for (const auto& g : gens) ops.push_back(testing::kron_pauli(g));
    auto vec = [](const Eigen::MatrixXcd& m) {
        return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
    };
    auto rank_of = [&]() {
        Eigen::MatrixXcd stacked(ops[0].size(), ops.size());
        for (std::size_t i = 0; i < ops.size(); ++i) stacked.col(i) = vec(ops[i]);
        return Eigen::ColPivHouseholderQR<Eigen::MatrixXcd>(stacked).rank();
    };
    Eigen::Index rank = rank_of();
    for (std::size_t i = 1; i < ops.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            Eigen::MatrixXcd c = ops[i] * ops[j] - ops[j] * ops[i];
            if (c.norm() < 1e-12) continue;
            ops.push_back(c);
            Eigen::Index r = rank_of();
            if (r == rank) {
                ops.pop_back();
            } else {
                rank = r;
            }
        }
    }
    return static_cast<int>(rank);
}

TEST_CASE("closure: abelian singleton and small pairs, vs the dense oracle") {
    LieBasis single = lie_closure_pauli({PauliString::from_dense("ZI")});
    CHECK(single.dim() == 1);

    // {XX, Z1} closes onto span{XX, ZI, YX} (an su(2)): dimension 3 both by
    // exhaustive nested commutators and by the dense-matrix rank oracle.
    std::vector<PauliString> pair_gens = {PauliString::from_dense("XX"),
                                          PauliString::from_dense("ZI")};
    LieBasis pair = lie_closure_pauli(pair_gens);
    CHECK(pair.dim() == 3);
    CHECK(dense_closure_dim(pair_gens) == 3);

    // Adding Z2 reaches the full g0(2)6-element algebra.
    std::vector<PauliString> triple_gens = {PauliString::from_dense("XX"),
                                            PauliString::from_dense("ZI"),
                                            PauliString::from_dense("IZ")};
    LieBasis triple = lie_closure_pauli(triple_gens);
    CHECK(triple.dim() == 6);
    CHECK(dense_closure_dim(triple_gens) == 6);
    std::set<PauliString> got(triple.elements().begin(),
                              triple.elements().end());
    LieBasis g02 = g0_basis(2);
    std::set<PauliString> expected(g02.elements().begin(),
                                   g02.elements().end());
    CHECK(got == expected);
}

TEST_CASE("closure idempotence") {
    LieBasis b = lie_closure_pauli(g0_generators(4));
    LieBasis again = lie_closure_pauli(b.elements());
    CHECK(again.dim() == b.dim());
}

TEST_CASE("closure cap raises a resource error") {
    // Two-local X/Z chains generate an exponential algebra.
    ClosureOptions opts;
    opts.max_dim = 50;
    std::vector<PauliString> gens;
    int n = 5;
    for (int j = 0; j + 1 < n; ++j) {
        PauliString p(n);
        p.set(j, 'X').set(j + 1, 'X');
        gens.push_back(p);
        PauliString q(n);
        q.set(j, 'Z');
        gens.push_back(q);
        PauliString r(n);
        r.set(j, 'X');
        gens.push_back(r);
    }
    CHECK_THROWS_AS(lie_closure_pauli(gens, opts), ResourceLimitError);
}

TEST_CASE("span closure dimensions: TFIM n^2, XY n(n-1), singleton") {
    CHECK(lie_closure_span(tfim_sum_generators(4)).size() == 16);
    CHECK(lie_closure_span(tfim_sum_generators(3)).size() == 9);
    CHECK(lie_closure_span(xy_generators(4)).size() == 12);
    CHECK(lie_closure_span(xy_generators(5)).size() == 20);
    CHECK(lie_closure_span({SpanElement::pauli(PauliString::from_dense("XX"))})
              .size() == 1);
    // QAOA path algebra is the Hadamard image of TFIM: same dimension.
    CHECK(lie_closure_span(qaoa_path_generators(4)).size() == 16);
}

TEST_CASE("span closure output is orthonormal") {
    auto basis = lie_closure_span(tfim_sum_generators(3));
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double dot = 0;
            for (const auto& [p, c] : basis[i].terms) {
                for (const auto& [q, d] : basis[j].terms) {
                    if (p == q) dot += c * d;
                }
            }
            CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("adjoint_rep: Z1 couplings in g0_basis(2), derived from the dense map") {
    auto basis = g0_basis(2);
    auto gen = adjoint_rep(PauliString::from_dense("ZI"), basis);
    REQUIRE(gen.couplings.size() == 2);
    // Dense derivation fixes the pairs: (XX <-> YX) and (XY <-> YY).
    auto has = [&](const char* a, const char* b) {
        int ia = basis.find(PauliString::from_dense(a));
        int ib = basis.find(PauliString::from_dense(b));
        int lo = std::min(ia, ib), hi = std::max(ia, ib);
        for (const auto& c : gen.couplings) {
            if (c.a == lo && c.b == hi) return true;
        }
        return false;
    };
    CHECK(has("XX", "YX"));
    CHECK(has("XY", "YY"));

    // Every coupling entry agrees with the literal trace evaluation
    // (Hbar_ab = -Tr[h [B_a, B_b]]/2^n = -2i sign).
    Eigen::MatrixXcd dense = oracle::dense_adjoint(
        SpanElement::pauli(PauliString::from_dense("ZI")), basis);
    for (const auto& c : gen.couplings) {
        CHECK(dense(c.a, c.b).imag() ==
              doctest::Approx(-2.0 * c.sign).epsilon(1e-12));
        CHECK(dense(c.b, c.a).imag() ==
              doctest::Approx(2.0 * c.sign).epsilon(1e-12));
    }
}

TEST_CASE("adjoint_rep: identity generator has no couplings") {
    auto basis = g0_basis(3);
    CHECK(adjoint_rep(PauliString(3), basis).couplings.empty());
}

TEST_CASE("adjoint_rep: all g0_basis(3) generators match the dense trace map") {
    auto basis = g0_basis(3);
    for (const auto& g : basis.elements()) {
        auto gen = adjoint_rep(g, basis);
        Eigen::MatrixXcd dense =
            oracle::dense_adjoint(SpanElement::pauli(g), basis);
        Eigen::MatrixXcd from_couplings =
            Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
        for (const auto& c : gen.couplings) {
            from_couplings(c.a, c.b) = std::complex<double>(0, -2.0 * c.sign);
            from_couplings(c.b, c.a) = std::complex<double>(0, 2.0 * c.sign);
        }
        CHECK((dense - from_couplings).norm() ==
              doctest::Approx(0).epsilon(1e-10));
    }
}

TEST_CASE("adjoint generators: purely imaginary Hermitian, eigenvalues ±2") {
    auto basis = g0_basis(3);
    auto gen = adjoint_rep(PauliString::from_dense("XXI"), basis);
    // Pair structure implies nonzero eigenvalues exactly ±2: each coupling is
    // a 2x2 block 2*sigma_y.
    CHECK(!gen.couplings.empty());
    std::set<int> used;
    for (const auto& c : gen.couplings) {
        CHECK(c.a < c.b);
        CHECK((c.sign == 1 || c.sign == -1));
        CHECK(used.insert(c.a).second);  // at most one coupling per index
        CHECK(used.insert(c.b).second);
    }
}

TEST_CASE("invariance violation raises") {
    // {Z1} alone is closed, but X1 does not normalize span{Z1}... it maps
    // Z1 to Y1 which is outside.
    LieBasis tiny = lie_closure_pauli({PauliString::from_dense("Z")});
    CHECK_THROWS_AS(adjoint_rep(PauliString::from_dense("X"), tiny),
                    InvarianceError);
}

TEST_CASE("homomorphism: [ad(Ga), ad(Gb)] = 2i s ad(Gc) on random triples") {
    auto basis = g0_basis(4);
    Rng rng(7);
    int checked = 0;
    while (checked < 12) {
        int a = static_cast<int>(rng.integer(basis.dim()));
        int b = static_cast<int>(rng.integer(basis.dim()));
        auto c = commutator(basis.element(a), basis.element(b));
        if (!c) continue;
        int ci = basis.find(c->string);
        REQUIRE(ci >= 0);
        Eigen::MatrixXcd ma = oracle::dense_adjoint(
            SpanElement::pauli(basis.element(a)), basis);
        Eigen::MatrixXcd mb = oracle::dense_adjoint(
            SpanElement::pauli(basis.element(b)), basis);
        Eigen::MatrixXcd mc = oracle::dense_adjoint(
            SpanElement::pauli(basis.element(ci)), basis);
        Eigen::MatrixXcd lhs = ma * mb - mb * ma;
        Eigen::MatrixXcd rhs = std::complex<double>(0, 2.0 * c->sign) * mc;
        CHECK((lhs - rhs).norm() == doctest::Approx(0).epsilon(1e-9));
        ++checked;
    }
}

TEST_CASE("faithfulness on g0: every basis generator has couplings") {
    auto basis = g0_basis(4);
    for (const auto& g : basis.elements()) {
        CHECK(!adjoint_rep(g, basis).couplings.empty());
    }
}

TEST_CASE("sparsity: fewer than 2 dim nonzero entries per generator") {
    auto basis = g0_basis(5);
    for (const auto& g : basis.elements()) {
        auto gen = adjoint_rep(g, basis);
        CHECK(2 * static_cast<int>(gen.couplings.size()) < 2 * basis.dim());
    }
}

TEST_CASE("adjoint_rep_sum: linearity and dense agreement at n=2") {
    auto basis = g0_basis(2);
    SpanElement h(2);
    h.add(PauliString::from_dense("ZI"), 1.0);
    h.add(PauliString::from_dense("IZ"), 1.0);
    auto reps = adjoint_rep_sum(h, basis);
    REQUIRE(reps.size() == 2);
    CHECK(reps[0].first == 1.0);
    CHECK(reps[1].first == 1.0);

    SpanElement zero(2);
    CHECK(adjoint_rep_sum(zero, basis).empty());

    Eigen::MatrixXcd dense_sum = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
    for (const auto& [coeff, gen] : reps) {
        for (const auto& c : gen.couplings) {
            dense_sum(c.a, c.b) += std::complex<double>(0, -2.0 * c.sign * coeff);
            dense_sum(c.b, c.a) += std::complex<double>(0, 2.0 * c.sign * coeff);
        }
    }
    CHECK((dense_sum - oracle::dense_adjoint(h, basis)).norm() ==
          doctest::Approx(0).epsilon(1e-10));
}

TEST_CASE("CSV export shapes") {
    auto basis = g0_basis(2);
    std::ostringstream bs;
    write_basis_csv(bs, basis);
    std::string btext = bs.str();
    CHECK(btext.substr(0, 19) == "index,pauli_string\n");
    CHECK(std::count(btext.begin(), btext.end(), '\n') == 7);

    std::ostringstream as;
    write_adjoint_csv(as, adjoint_rep(PauliString::from_dense("ZI"), basis));
    std::string atext = as.str();
    CHECK(atext.substr(0, 16) == "alpha,beta,sign\n");
    CHECK(std::count(atext.begin(), atext.end(), '\n') == 3);
}
