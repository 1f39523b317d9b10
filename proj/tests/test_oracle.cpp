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
#include "gsim/oracle.hpp"
#include "test_support.hpp"

using namespace gsim;
using oracle::StateVector;

TEST_CASE("sv_evolve: identity circuit, X rotation, unitarity") {
    StateVector psi = oracle::basis_state(1, 0);
    Circuit empty(1);
    auto same = oracle::sv_evolve(psi, empty, {});
    CHECK((same.amps - psi.amps).norm() == doctest::Approx(0));

    Circuit c(1);
    c.push(Gate::pauli_fixed(PauliString::from_dense("X"), M_PI / 2));
    auto out = oracle::sv_evolve(psi, c, {});
    // e^{-i pi/2 X}|0> = -i|1>
    CHECK(std::abs(out.amps[0]) == doctest::Approx(0));
    CHECK(out.amps[1] == std::complex<double>(0, -1));
    CHECK(out.amps.norm() == doctest::Approx(1.0));
}

TEST_CASE("sv gate application matches dense matrix exponential, random paulis") {
    Rng rng(5);
    auto all = testing::all_paulis(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto& p = all[rng.integer(all.size())];
        double theta = rng.uniform(0, 2 * M_PI);
        Circuit c(3);
        c.push(Gate::pauli_fixed(p, theta));
        Eigen::VectorXcd psi0(8);
        for (int i = 0; i < 8; ++i) {
            psi0[i] = std::complex<double>(rng.normal(), rng.normal());
        }
        psi0.normalize();
        auto out = oracle::sv_evolve({3, psi0}, c, {});
        // Independent route: dense expm of the Kronecker matrix.
        Eigen::MatrixXcd pm = testing::kron_pauli(p);
        Eigen::MatrixXcd u =
            (std::cos(theta) * Eigen::MatrixXcd::Identity(8, 8)) -
            std::complex<double>(0, std::sin(theta)) * pm;
        CHECK((out.amps - u * psi0).norm() == doctest::Approx(0).epsilon(1e-12));
    }
}

TEST_CASE("sv_expectation basics") {
    auto zero = oracle::basis_state(3, 0);
    SpanElement z1(3);
    z1.add(PauliString::from_dense("ZII"), 1.0);
    CHECK(oracle::sv_expectation(zero, z1) == doctest::Approx(1.0));

    auto plus = oracle::make_state(StateSpec::plus_all(1));
    SpanElement z(1);
    z.add(PauliString::from_dense("Z"), 1.0);
    CHECK(oracle::sv_expectation(plus, z) == doctest::Approx(0.0));
}

TEST_CASE("dm_noisy_evolve: identity channel equals unitary path, trace kept") {
    Rng rng(9);
    int n = 3;
    auto pool = g0_generators(n);
    Circuit unitary = testing::random_pauli_circuit(pool, 6, rng);
    Eigen::VectorXd theta = testing::random_angles(6, rng);

    Circuit noisy(n);
    int k = 0;
    for (const auto& e : unitary.elements) {
        noisy.push(std::get<Gate>(e));
        if (k++ == 2) {
            std::vector<std::pair<double, PauliString>> terms;
            terms.emplace_back(1.0, PauliString(n));
            noisy.push(NoiseChannel::make(std::move(terms)));
        }
    }
    noisy.param_count = unitary.param_count;

    auto psi = oracle::make_state(StateSpec::plus_all(n));
    auto rho = oracle::dm_from_state(psi);
    auto rho_out = oracle::dm_noisy_evolve(rho, noisy, theta);
    auto psi_out = oracle::sv_evolve(psi, unitary, theta);
    auto rho_expected = oracle::dm_from_state(psi_out);
    CHECK((rho_out.rho - rho_expected.rho).norm() ==
          doctest::Approx(0).epsilon(1e-12));
    CHECK(std::abs(rho_out.rho.trace() - 1.0) < 1e-12);
}

TEST_CASE("dm channel: depolarizing contracts, trace and hermiticity kept") {
    int n = 2;
    Circuit c(n);
    std::vector<std::pair<double, PauliString>> terms;
    double p = 0.3;
    terms.emplace_back(1 - p, PauliString(n));
    terms.emplace_back(p / 3, PauliString::from_dense("XI"));
    terms.emplace_back(p / 3, PauliString::from_dense("YI"));
    terms.emplace_back(p / 3, PauliString::from_dense("ZI"));
    c.push(NoiseChannel::make(std::move(terms)));

    auto rho = oracle::dm_from_state(oracle::make_state(StateSpec::plus_all(n)));
    auto out = oracle::dm_noisy_evolve(rho, c, {});
    CHECK(std::abs(out.rho.trace() - 1.0) < 1e-12);
    CHECK((out.rho - out.rho.adjoint()).norm() < 1e-12);
    // X1 commutes with X1, anticommutes with Y1 and Z1:
    // d = (1-p) + p/3 - p/3 - p/3 = 1 - 4p/3.
    CHECK(oracle::dm_pauli_expectation(out, PauliString::from_dense("XI"))
              .real() == doctest::Approx(1 - 4 * p / 3));
}

TEST_CASE("hst_loss: zero for self, global phase insensitive, center-flip large") {
    Rng rng(13);
    int n = 4;
    auto pool = g0_generators(n);
    Circuit c = testing::random_pauli_circuit(pool, 10, rng);
    Eigen::VectorXd theta = testing::random_angles(10, rng);
    Eigen::MatrixXcd u = oracle::circuit_unitary(c, theta);

    CHECK(oracle::hst_loss(c, theta, u) == doctest::Approx(0).epsilon(1e-10));
    Eigen::MatrixXcd phased = std::exp(std::complex<double>(0, 0.7)) * u;
    CHECK(oracle::hst_loss(c, theta, phased) ==
          doctest::Approx(0).epsilon(1e-10));

    // (sigma^z)^n V differs physically: loss climbs above 0.5 for random V.
    PauliString zn(n);
    for (int j = 0; j < n; ++j) zn.set(j, 'Z');
    Eigen::MatrixXcd flipped = testing::kron_pauli(zn) * u;
    CHECK(oracle::hst_loss(c, theta, flipped) > 0.5);
}

TEST_CASE("hst_loss_spectral agrees with the direct evaluation") {
    Rng rng(17);
    int n = 3;
    SpanElement h(n);
    h.add(PauliString::from_dense("XXI"), 0.8);
    h.add(PauliString::from_dense("IXX"), 0.5);
    h.add(PauliString::from_dense("ZII"), -0.4);
    h.add(PauliString::from_dense("IZI"), 0.9);
    Eigen::MatrixXd vecs;
    Eigen::VectorXd vals;
    oracle::real_symmetric_eig(h, vecs, vals);

    auto pool = g0_generators(n);
    Circuit c = testing::random_pauli_circuit(pool, 8, rng);
    Eigen::VectorXd theta = testing::random_angles(8, rng);
    double t = 1.7;
    Eigen::MatrixXcd target =
        (vecs.cast<std::complex<double>>()) *
        (Eigen::VectorXcd((-std::complex<double>(0, t) * vals.array())
                              .exp()
                              .matrix())
             .asDiagonal()) *
        (vecs.transpose().cast<std::complex<double>>());
    CHECK(oracle::hst_loss_spectral(c, theta, vecs, vals, t) ==
          doctest::Approx(oracle::hst_loss(c, theta, target)).epsilon(1e-10));
}

TEST_CASE("exact_ground_state: -sum Z, zero operator, TFIM power-iteration check") {
    int n = 4;
    SpanElement h(n);
    for (int j = 0; j < n; ++j) h.add(PauliString::single(n, j, 'Z'), -1.0);
    auto gs = oracle::exact_ground_state(h);
    CHECK(gs.energy == doctest::Approx(-4.0));
    CHECK(std::abs(gs.state.amps[0]) == doctest::Approx(1.0));

    SpanElement zero(2);
    CHECK(oracle::exact_ground_state(zero).energy == doctest::Approx(0.0));

    // Independent power iteration on (shift I - H) against the eigensolver.
    SpanElement tfim(n);
    for (int j = 0; j + 1 < n; ++j) {
        PauliString p(n);
        p.set(j, 'X').set(j + 1, 'X');
        tfim.add(p, 1.0);
    }
    for (int j = 0; j < n; ++j) tfim.add(PauliString::single(n, j, 'Z'), -1.0);
    auto tg = oracle::exact_ground_state(tfim);

    Eigen::MatrixXcd hm = oracle::dense_matrix(tfim);
    double shift = 0;
    for (const auto& [p, c] : tfim.terms) shift += std::abs(c);
    Eigen::MatrixXcd m =
        shift * Eigen::MatrixXcd::Identity(hm.rows(), hm.cols()) - hm;
    Eigen::VectorXcd v = Eigen::VectorXcd::Random(hm.rows());
    v.normalize();
    for (int it = 0; it < 3000; ++it) {
        v = m * v;
        v.normalize();
    }
    double rayleigh = (v.adjoint() * hm * v)(0, 0).real();
    CHECK(tg.energy == doctest::Approx(rayleigh).epsilon(1e-7));
}

TEST_CASE("dense_adjoint: zero for commuting, purely imaginary entries") {
    auto basis = g0_basis(2);
    // H = Z1 + Z2 commutes with Z1, Z2 rows; full matrix purely imaginary.
    SpanElement h(2);
    h.add(PauliString::from_dense("ZI"), 1.0);
    h.add(PauliString::from_dense("IZ"), 1.0);
    Eigen::MatrixXcd m = oracle::dense_adjoint(h, basis);
    CHECK(m.real().norm() == doctest::Approx(0).epsilon(1e-12));
    CHECK((m - m.adjoint()).norm() == doctest::Approx(0).epsilon(1e-12));

    SpanElement commuting(2);
    commuting.add(PauliString::from_dense("ZI"), 1.0);
    Eigen::MatrixXcd row_z = oracle::dense_adjoint(commuting, basis);
    CHECK(row_z.col(0).norm() == doctest::Approx(0).epsilon(1e-12));
}

TEST_CASE("size caps raise resource errors") {
    CHECK_THROWS_AS(oracle::basis_state(15, 0), ResourceLimitError);
    SpanElement h(13);
    h.add(PauliString::single(13, 0, 'Z'), 1.0);
    CHECK_THROWS_AS(oracle::exact_ground_state(h), ResourceLimitError);
    Circuit c(13);
    CHECK_THROWS_AS(oracle::circuit_unitary(c, {}), ResourceLimitError);
}
