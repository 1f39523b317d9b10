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

#include "gsim/errors.hpp"
#include "gsim/pauli.hpp"
#include "test_support.hpp"

using namespace gsim;

TEST_CASE("multiply: XZ = -iY and identity cases") {
    auto x = PauliString::from_dense("X");
    auto z = PauliString::from_dense("Z");
    auto r = multiply(x, z);
    CHECK(r.string == PauliString::from_dense("Y"));
    CHECK(r.phase() == std::complex<double>(0, -1));

    auto p = PauliString::from_dense("XZY");
    auto id = PauliString(3);
    auto ri = multiply(p, id);
    CHECK(ri.string == p);
    CHECK(ri.phase() == std::complex<double>(1, 0));

    // (XY)(YY) = (X Y)⊗(Y Y) = (iZ)⊗(I)
    auto a = PauliString::from_dense("XY");
    auto b = PauliString::from_dense("YY");
    auto rp = multiply(a, b);
    CHECK(rp.string == PauliString::from_dense("ZI"));
    CHECK(rp.phase() == std::complex<double>(0, 1));
}

TEST_CASE("commutes: symplectic parity") {
    CHECK_FALSE(commutes(PauliString::from_dense("X"), PauliString::from_dense("Z")));
    CHECK(commutes(PauliString::from_dense("X"), PauliString::from_dense("X")));
    CHECK(commutes(PauliString::from_dense("XX"), PauliString::from_dense("ZZ")));
}

TEST_CASE("commutator: [X,Z] = -2iY, none for commuting, tensor case") {
    auto c = commutator(PauliString::from_dense("X"), PauliString::from_dense("Z"));
    REQUIRE(c.has_value());
    CHECK(c->sign == -1);
    CHECK(c->string == PauliString::from_dense("Y"));

    CHECK_FALSE(commutator(PauliString::from_dense("X"),
                           PauliString::from_dense("X")).has_value());

    auto c2 = commutator(PauliString::from_dense("XX"),
                         PauliString::from_dense("IZ"));
    REQUIRE(c2.has_value());
    CHECK(c2->sign == -1);
    CHECK(c2->string == PauliString::from_dense("XY"));
}

TEST_CASE("weight") {
    CHECK(weight(PauliString::from_dense("III")) == 0);
    CHECK(weight(PauliString::from_dense("XZI")) == 2);
    CHECK(weight(PauliString::from_dense("XZZX")) == 4);
}

TEST_CASE("size mismatch raises") {
    CHECK_THROWS_AS(multiply(PauliString(2), PauliString(3)), SizeError);
    CHECK_THROWS_AS(commutes(PauliString(2), PauliString(3)), SizeError);
}

TEST_CASE("text round trips, both forms") {
    auto p = PauliString::from_dense("XIZY");
    CHECK(p.str() == "XIZY");
    CHECK(p.sparse_str() == "X1 Z3 Y4");
    CHECK(PauliString::from_sparse(4, "X1 Z3 Y4") == p);
    CHECK(PauliString::parse(4, "XIZY") == p);
    CHECK(PauliString::parse(4, "X1 Z3 Y4") == p);
    CHECK(PauliString(4).sparse_str() == "I");
    CHECK(PauliString::parse(4, "I") == PauliString(4));
}

TEST_CASE("masks support large n") {
    PauliString p(200);
    p.set(0, 'X').set(199, 'Y');
    CHECK(p.weight() == 2);
    CHECK(p.x_bit(199));
    CHECK(p.z_bit(199));
    CHECK_FALSE(p.z_bit(0));
}

TEST_CASE("multiply associativity is phase-exact, exhaustive n<=3") {
    for (int n = 1; n <= 3; ++n) {
        auto all = testing::all_paulis(n);
        // Exhaustive over triples at n<=2; random-but-fixed subsample at n=3
        // keeps runtime bounded while still covering thousands of triples.
        std::size_t stride = n < 3 ? 1 : 7;
        for (std::size_t i = 0; i < all.size(); i += 1) {
            for (std::size_t j = 0; j < all.size(); j += stride) {
                for (std::size_t k = 0; k < all.size(); k += stride) {
                    auto pq = multiply(all[i], all[j]);
                    auto pq_r = multiply(pq.string, all[k]);
                    auto qr = multiply(all[j], all[k]);
                    auto p_qr = multiply(all[i], qr.string);
                    CHECK(pq_r.string == p_qr.string);
                    CHECK((pq.phase_pow + pq_r.phase_pow) % 4 ==
                          (qr.phase_pow + p_qr.phase_pow) % 4);
                }
            }
        }
    }
}

TEST_CASE("commutator none iff commutes; antisymmetry; exhaustive n<=3") {
    for (int n = 1; n <= 3; ++n) {
        auto all = testing::all_paulis(n);
        for (const auto& p : all) {
            for (const auto& q : all) {
                auto c = commutator(p, q);
                CHECK(c.has_value() == !commutes(p, q));
                if (c) {
                    auto cr = commutator(q, p);
                    REQUIRE(cr.has_value());
                    CHECK(cr->sign == -c->sign);
                    CHECK(cr->string == c->string);
                }
            }
        }
    }
}

TEST_CASE("oracle equivalence: dense [P,Q] = 2i sign R, n<=3") {
    for (int n = 1; n <= 3; ++n) {
        auto all = testing::all_paulis(n);
        for (const auto& p : all) {
            for (const auto& q : all) {
                Eigen::MatrixXcd mp = testing::kron_pauli(p);
                Eigen::MatrixXcd mq = testing::kron_pauli(q);
                Eigen::MatrixXcd comm = mp * mq - mq * mp;
                auto c = commutator(p, q);
                if (!c) {
                    CHECK(comm.norm() == doctest::Approx(0).epsilon(1e-14));
                } else {
                    Eigen::MatrixXcd expected = std::complex<double>(0, 2.0) *
                                                double(c->sign) *
                                                testing::kron_pauli(c->string);
                    CHECK((comm - expected).norm() ==
                          doctest::Approx(0).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("dense multiply matches matrices, exhaustive n<=2") {
    for (int n = 1; n <= 2; ++n) {
        auto all = testing::all_paulis(n);
        for (const auto& p : all) {
            for (const auto& q : all) {
                auto r = multiply(p, q);
                Eigen::MatrixXcd lhs = testing::kron_pauli(p) * testing::kron_pauli(q);
                Eigen::MatrixXcd rhs = r.phase() * testing::kron_pauli(r.string);
                CHECK((lhs - rhs).norm() == doctest::Approx(0).epsilon(1e-13));
            }
        }
    }
}
