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

#include <cmath>
#include <fstream>

#include "gsim/errors.hpp"
#include "gsim/experiments.hpp"
#include "gsim/gradients.hpp"
#include "gsim/oracle.hpp"
#include "internal.hpp"

namespace gsim::experiments {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw NumericalError("small-n verification failed: " + what);
}

}  // namespace

void verify_small_n(std::uint64_t seed) {
    Rng rng(seed);

    // Algebra dimensions.
    for (int n = 2; n <= 5; ++n) {
        require(lie_closure_pauli(g0_generators(n)).dim() == n * (2 * n - 1),
                "dim(g0) at n=" + std::to_string(n));
    }
    require(static_cast<int>(lie_closure_span(tfim_sum_generators(4)).size()) ==
                16,
            "dim(g_TFIM) at n=4");

    // Random circuit/state/observable evolution vs the statevector oracle.
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + 2 * static_cast<int>(rng.integer(2));  // 4 or 6
        auto basis = std::make_shared<LieBasis>(g0_basis(n));
        auto pool = tfxy_hva_generators(n);
        Circuit c(n);
        for (int g = 0; g < 3 * n; ++g) {
            c.push(Gate::pauli(pool[rng.integer(pool.size())], g));
        }
        Eigen::VectorXd theta(c.param_count);
        for (int i = 0; i < c.param_count; ++i) {
            theta[i] = rng.uniform(0, 2 * M_PI);
        }
        auto spec = trial % 2 ? StateSpec::plus_all(n)
                              : StateSpec::magic(n == 4 ? 4 : 4, 1.3);
        if (spec.num_qubits() != n) spec = StateSpec::plus_all(n);
        auto e = expectation_vector(spec, basis);
        auto out = evolve(c, theta, e);
        auto psi = oracle::sv_evolve(oracle::make_state(spec), c, theta);
        for (int a = 0; a < basis->dim(); ++a) {
            double expected =
                oracle::sv_pauli_expectation(psi, basis->element(a)).real();
            require(std::abs(out.values[a] - expected) < 1e-10,
                    "evolution mismatch vs statevector oracle");
        }
    }

    // Exact noisy path vs the density-matrix oracle at n=4.
    {
        int n = 4;
        auto basis = std::make_shared<LieBasis>(g0_basis(n));
        auto pool = tfxy_hva_generators(n);
        Circuit c(n);
        int params = 0;
        for (int g = 0; g < 10; ++g) {
            c.push(Gate::pauli(pool[rng.integer(pool.size())], params++));
            double raw[15];
            for (double& r : raw) r = rng.uniform();
            int site = static_cast<int>(rng.integer(n - 1));
            c.push(NoiseChannel::two_qubit_random(n, site, site + 1, 0.1, raw));
        }
        Eigen::VectorXd theta(params);
        for (int i = 0; i < params; ++i) theta[i] = rng.uniform(0, 2 * M_PI);
        auto spec = StateSpec::plus_all(n);
        auto out = evolve(c, theta, expectation_vector(spec, basis));
        auto rho = oracle::dm_noisy_evolve(
            oracle::dm_from_state(oracle::make_state(spec)), c, theta);
        for (int a = 0; a < basis->dim(); ++a) {
            double expected =
                oracle::dm_pauli_expectation(rho, basis->element(a)).real();
            require(std::abs(out.values[a] - expected) < 1e-12,
                    "noisy evolution mismatch vs density-matrix oracle");
        }
    }

    // Gradient vs central finite differences.
    {
        int n = 4;
        auto basis = std::make_shared<LieBasis>(g0_basis(n));
        auto pool = tfxy_hva_generators(n);
        Circuit c(n);
        for (int g = 0; g < 12; ++g) {
            c.push(Gate::pauli(pool[rng.integer(pool.size())], g));
        }
        CompiledCircuit compiled(c, basis);
        Eigen::VectorXd theta(12);
        for (int i = 0; i < 12; ++i) theta[i] = rng.uniform(0, 2 * M_PI);
        Eigen::VectorXd e =
            expectation_vector(StateSpec::plus_all(n), basis).values;
        Eigen::VectorXd w(basis->dim());
        for (int a = 0; a < basis->dim(); ++a) w[a] = rng.uniform(-1, 1);
        auto g = grad_expectation(compiled, theta, e, w);
        for (int i = 0; i < 12; ++i) {
            Eigen::VectorXd tp = theta, tm = theta;
            tp[i] += 1e-5;
            tm[i] -= 1e-5;
            double fd =
                (w.dot(evolve(compiled, tp, e)) - w.dot(evolve(compiled, tm, e))) /
                2e-5;
            require(std::abs(g.values[i] - fd) < 1e-5 * std::max(1.0, std::abs(fd)),
                    "gradient mismatch vs finite differences");
        }
    }

    // M=2 correlator vs the statevector oracle.
    {
        int n = 5;
        auto basis = std::make_shared<LieBasis>(g0_basis(n));
        auto pool = tfxy_hva_generators(n);
        Circuit c(n);
        for (int g = 0; g < 15; ++g) {
            c.push(Gate::pauli(pool[rng.integer(pool.size())], g));
        }
        Eigen::VectorXd theta(15);
        for (int i = 0; i < 15; ++i) theta[i] = rng.uniform(0, 2 * M_PI);
        auto spec = StateSpec::computational("10000");
        auto em = evolve_correlation(c, theta,
                                     correlation_matrix(spec, basis, basis));
        auto psi = oracle::sv_evolve(oracle::make_state(spec), c, theta);
        int z2 = basis->find(PauliString::single(n, 1, 'Z'));
        int z4 = basis->find(PauliString::single(n, 3, 'Z'));
        PauliString zz(n);
        zz.set(1, 'Z').set(3, 'Z');
        double expected = oracle::sv_pauli_expectation(psi, zz).real();
        require(std::abs(em.values(z2, z4) - expected) < 1e-10,
                "correlator mismatch vs statevector oracle");
    }
}

void run_algebra_export(const nlohmann::json& config, const RunContext& ctx) {
    check_keys(config, {"algebra", "n", "generators", "max_dim", "seed"});
    const int n = config.value("n", 4);
    const std::string algebra = config.value("algebra", "g0");

    Stopwatch total;
    LieBasis basis;
    std::vector<PauliString> generators;
    if (algebra == "g0") {
        basis = g0_basis(n);
        generators = g0_generators(n);
    } else if (algebra == "qaoa_path") {
        for (int j = 0; j + 1 < n; ++j) {
            PauliString zz(n);
            zz.set(j, 'Z').set(j + 1, 'Z');
            generators.push_back(zz);
        }
        for (int j = 0; j < n; ++j) {
            generators.push_back(PauliString::single(n, j, 'X'));
        }
        ClosureOptions opts;
        opts.max_dim = config.value("max_dim", 20000);
        basis = lie_closure_pauli(generators, opts);
    } else if (algebra == "custom") {
        for (const auto& text : config.at("generators")) {
            generators.push_back(PauliString::parse(n, text.get<std::string>()));
        }
        ClosureOptions opts;
        opts.max_dim = config.value("max_dim", 20000);
        basis = lie_closure_pauli(generators, opts);
    } else {
        throw ConfigError("unknown algebra: " + algebra +
                          " (expected g0, qaoa_path, or custom)");
    }

    std::filesystem::create_directories(ctx.out_dir);
    {
        std::ofstream out(ctx.out_dir / "basis.csv");
        write_basis_csv(out, basis);
    }
    {
        CsvWriter gens_csv(ctx.out_dir / "generators.csv",
                           {"index", "pauli_string"});
        for (std::size_t gi = 0; gi < generators.size(); ++gi) {
            gens_csv.field(static_cast<std::int64_t>(gi))
                .field(generators[gi].sparse_str());
            gens_csv.end_row();
        }
    }
    for (std::size_t gi = 0; gi < generators.size(); ++gi) {
        char name[64];
        std::snprintf(name, sizeof name, "adjoint_%03zu.csv", gi);
        std::ofstream out(ctx.out_dir / name);
        write_adjoint_csv(out, adjoint_rep(generators[gi], basis));
    }
    write_manifest(ctx, "algebra", config, total.seconds());
}

int run_experiment(const std::string& name, const nlohmann::json& config,
                   const RunContext& ctx) {
    if (name == "benchmark") {
        run_benchmark(config, ctx);
    } else if (name == "magic") {
        run_magic_demo(config, ctx);
    } else if (name == "overparam") {
        run_overparam_sweep(config, ctx);
    } else if (name == "ltfim") {
        run_ltfim_pretrain(config, ctx);
    } else if (name == "qaoa") {
        run_qaoa_pretrain(config, ctx);
    } else if (name == "compile") {
        run_compile(config, ctx);
    } else if (name == "classifier") {
        run_classifier(config, ctx);
    } else if (name == "algebra") {
        run_algebra_export(config, ctx);
    } else {
        throw ConfigError("unknown experiment: " + name);
    }
    return 0;
}

}  // namespace gsim::experiments
