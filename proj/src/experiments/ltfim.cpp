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

#include <algorithm>
#include <cmath>
#include <array>
#include <map>
#include <tuple>

#include "gsim/errors.hpp"
#include "gsim/experiments.hpp"
#include "gsim/gradients.hpp"
#include "gsim/oracle.hpp"
#include "internal.hpp"

namespace gsim::experiments {

namespace {

// Stage-1 TFIM pre-training in gsim: returns the trained parameters of the
// (sum XX)(sum Z) ansatz.
Eigen::VectorXd pretrain_tfim(int n, int layers, double hxx, double hz,
                              const BasisPtr& basis, const OptimizerConfig& opt,
                              Rng& rng) {
    Circuit circuit = tfim_sum_circuit(n, layers);
    CompiledCircuit compiled(circuit, basis);
    SpanElement h = tfim_hamiltonian(n, hxx, hz);
    Eigen::VectorXd w = observable_weights(h, *basis);
    Eigen::VectorXd e =
        expectation_vector(StateSpec::computational(std::string(n, '0')), basis)
            .values;
    Eigen::VectorXd theta0(circuit.param_count);
    for (int i = 0; i < theta0.size(); ++i) theta0[i] = rng.uniform(0, 2 * M_PI);
    auto loss_grad = [&](const Eigen::VectorXd& th, Eigen::VectorXd* g) {
        auto res = grad_expectation(compiled, th, e, w);
        if (g) *g = res.values;
        return res.loss;
    };
    return minimize(loss_grad, theta0, opt).theta;
}

// Packs stage-1 (theta_1, theta_2) parameters into the three-per-layer
// LTFIM ansatz with the new sum-X gates at phi = 0.
Eigen::VectorXd extend_parameters(const Eigen::VectorXd& stage1, int layers) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(3 * layers);
    for (int l = 0; l < layers; ++l) {
        full[3 * l] = stage1[2 * l];
        full[3 * l + 1] = stage1[2 * l + 1];
        // full[3l + 2] = 0: identity-initialized sum-X gate
    }
    return full;
}

}  // namespace

LtfimResult run_ltfim_pretrain(const nlohmann::json& config,
                               const RunContext& ctx) {
    check_keys(config, {"sizes", "hx_values", "hz", "hxx", "seeds",
                        "optimizer_stage1", "optimizer_stage2",
                        "variance_samples", "seed"});
    std::vector<int> sizes =
        config.value("sizes", std::vector<int>{6, 8, 10, 12});
    std::vector<double> hx_values =
        config.value("hx_values", std::vector<double>{-1.0});
    const double hz = config.value("hz", -1.0);
    const double hxx = config.value("hxx", 1.0);
    const int num_seeds = config.value("seeds", 6);

    OptimizerConfig s1_defaults;
    s1_defaults.rate = 0.05;
    s1_defaults.max_iterations = 1500;
    s1_defaults.plateau_window = 150;
    s1_defaults.plateau_tolerance = 1e-12;
    OptimizerConfig opt1 = optimizer_from_json(
        config.contains("optimizer_stage1") ? config["optimizer_stage1"]
                                            : nlohmann::json(),
        s1_defaults);
    OptimizerConfig s2_defaults;
    s2_defaults.rate = 0.02;
    s2_defaults.max_iterations = 600;
    s2_defaults.plateau_window = 80;
    s2_defaults.plateau_tolerance = 1e-10;
    OptimizerConfig opt2 = optimizer_from_json(
        config.contains("optimizer_stage2") ? config["optimizer_stage2"]
                                            : nlohmann::json(),
        s2_defaults);

    Stopwatch total;
    for (int n : sizes) {
        if (n > 12) throw ResourceLimitError("ltfim stage 2 needs n <= 12");
    }

    struct Row {
        int n;
        double hx;
        int seed;
        std::string strategy;
        double eps_before, eps_after;
        double grad_variance;  // pooled over phi components, per strategy
    };
    struct Task {
        int n;
        int hx_index;
        int seed;
    };
    std::vector<Task> tasks;
    for (int n : sizes) {
        for (std::size_t hi = 0; hi < hx_values.size(); ++hi) {
            for (int s = 0; s < num_seeds; ++s) {
                tasks.push_back({n, static_cast<int>(hi), s});
            }
        }
    }
    // Two rows (strategies) per task; gradient samples pooled later.
    std::vector<std::array<Row, 2>> rows(tasks.size());
    std::vector<std::array<std::vector<double>, 2>> grad_samples(tasks.size());

    // Exact ground energies, cached per (n, hx).
    std::map<std::pair<int, int>, double> e_min;
    std::map<int, double> hs1;
    for (int n : sizes) {
        for (std::size_t hi = 0; hi < hx_values.size(); ++hi) {
            SpanElement h = ltfim_hamiltonian(n, hxx, hz, hx_values[hi]);
            e_min[{n, static_cast<int>(hi)}] =
                oracle::exact_ground_state(h).energy;
        }
    }

    parallel_for(static_cast<int>(tasks.size()), ctx.threads, [&](int ti) {
        const Task& task = tasks[ti];
        const int n = task.n;
        const double hx = hx_values[task.hx_index];
        const int layers = n * (2 * n - 1);  // dim(g0) layers per the recipe
        auto basis = std::make_shared<LieBasis>(g0_basis(n));
        SpanElement h = ltfim_hamiltonian(n, hxx, hz, hx);
        const double norm = h.norm();
        const double ref = e_min.at({n, task.hx_index});

        Circuit full = ltfim_sum_circuit(n, layers);
        auto psi0 = oracle::basis_state(n, 0);

        auto eps_of = [&](double energy) { return (energy - ref) / norm; };
        auto loss_grad = [&](const Eigen::VectorXd& th, Eigen::VectorXd* g) {
            auto res = oracle::sv_grad_expectation(full, th, psi0, h);
            if (g) *g = res.values;
            return res.loss;
        };

        for (int strat = 0; strat < 2; ++strat) {
            Rng rng(ctx.seed ^ (std::uint64_t(n) << 40) ^
                    (std::uint64_t(task.hx_index) << 32) ^
                    (std::uint64_t(task.seed) << 8) ^ std::uint64_t(strat));
            Eigen::VectorXd theta0;
            if (strat == 0) {  // pretrained
                Eigen::VectorXd stage1 =
                    pretrain_tfim(n, layers, hxx, hz, basis, opt1, rng);
                theta0 = extend_parameters(stage1, layers);
            } else {  // random
                theta0.resize(3 * layers);
                for (int i = 0; i < theta0.size(); ++i) {
                    theta0[i] = rng.uniform(0, 2 * M_PI);
                }
            }

            // Gradient components of eps over the phi (sum-X) parameters at
            // the initialization.
            Eigen::VectorXd g0;
            double e_before = [&] {
                auto res = oracle::sv_grad_expectation(full, theta0, psi0, h);
                g0 = res.values;
                return res.loss;
            }();
            std::vector<double>& pool = grad_samples[ti][strat];
            for (int l = 0; l < layers; ++l) {
                pool.push_back(g0[3 * l + 2] / norm);
            }

            auto res = minimize(loss_grad, theta0, opt2);
            Row row;
            row.n = n;
            row.hx = hx;
            row.seed = task.seed;
            row.strategy = strat == 0 ? "pretrained" : "random";
            row.eps_before = eps_of(e_before);
            row.eps_after = eps_of(res.loss);
            row.grad_variance = 0;  // filled after pooling
            rows[ti][strat] = row;
        }
    });

    // Pool gradient samples per (n, hx, strategy).
    std::map<std::tuple<int, int, int>, std::vector<double>> pooled;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        for (int strat = 0; strat < 2; ++strat) {
            auto& vec = pooled[{tasks[ti].n, tasks[ti].hx_index, strat}];
            vec.insert(vec.end(), grad_samples[ti][strat].begin(),
                       grad_samples[ti][strat].end());
        }
    }
    auto variance = [](const std::vector<double>& v) {
        double mean = 0;
        for (double x : v) mean += x;
        mean /= v.size();
        double var = 0;
        for (double x : v) var += (x - mean) * (x - mean);
        return var / v.size();
    };

    CsvWriter csv(ctx.out_dir / "ltfim.csv",
                  {"n", "hx", "seed", "strategy", "eps_before", "eps_after",
                   "grad_variance"});
    LtfimResult result;
    std::map<std::tuple<int, int, int>, std::vector<double>> eps_after;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        for (int strat = 0; strat < 2; ++strat) {
            Row row = rows[ti][strat];
            row.grad_variance =
                variance(pooled.at({row.n, tasks[ti].hx_index, strat}));
            csv.field(row.n)
                .field(row.hx)
                .field(row.seed)
                .field(row.strategy)
                .field(row.eps_before)
                .field(row.eps_after)
                .field(row.grad_variance);
            csv.end_row();
            eps_after[{row.n, tasks[ti].hx_index, strat}].push_back(
                row.eps_after);
        }
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v[v.size() / 2];
    };
    for (int n : sizes) {
        for (std::size_t hi = 0; hi < hx_values.size(); ++hi) {
            LtfimSizeRow row;
            row.n = n;
            row.hx = hx_values[hi];
            row.median_eps_pretrained =
                median(eps_after.at({n, static_cast<int>(hi), 0}));
            row.median_eps_random =
                median(eps_after.at({n, static_cast<int>(hi), 1}));
            row.grad_var_pretrained =
                variance(pooled.at({n, static_cast<int>(hi), 0}));
            row.grad_var_random =
                variance(pooled.at({n, static_cast<int>(hi), 1}));
            result.rows.push_back(row);
        }
    }

    nlohmann::json metrics;
    for (const auto& row : result.rows) {
        std::string key = std::to_string(row.n) + "/" + std::to_string(row.hx);
        metrics["median_eps_pretrained"][key] = row.median_eps_pretrained;
        metrics["median_eps_random"][key] = row.median_eps_random;
        metrics["grad_var_pretrained"][key] = row.grad_var_pretrained;
        metrics["grad_var_random"][key] = row.grad_var_random;
    }
    write_manifest(ctx, "ltfim", config, total.seconds(), metrics);
    return result;
}

}  // namespace gsim::experiments
