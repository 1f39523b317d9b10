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
#include <map>

#include "gsim/errors.hpp"
#include "gsim/experiments.hpp"
#include "gsim/gradients.hpp"
#include "gsim/oracle.hpp"
#include "internal.hpp"

namespace gsim::experiments {

namespace {

// Overparametrized 2-local ansatz: L = ceil(2 dim / K) layers of the TFXY
// generator set, each gate with its own parameter.
Circuit compile_ansatz(int n, int dim) {
    int k = 3 * n - 2;
    int layers = (2 * dim + k - 1) / k;
    return tfxy_hva_circuit(n, layers);
}

struct RandomModeResult {
    std::vector<CompileRandomRow> rows;
};

RandomModeResult run_random_mode(const nlohmann::json& config,
                                 const RunContext& ctx) {
    std::vector<int> sizes =
        config.value("sizes", std::vector<int>{8, 12, 16, 20});
    const int locality = config.value("locality", 2);
    const double big_t = config.value("T", 10.0);
    const int targets = config.value("targets", 10);
    OptimizerConfig defaults;
    defaults.rate = 0.05;
    defaults.max_iterations = 5000;
    defaults.threshold = 1e-3;
    OptimizerConfig opt = optimizer_from_json(
        config.contains("optimizer") ? config["optimizer"] : nlohmann::json(),
        defaults);

    struct Task {
        int n;
        int target_id;
    };
    std::vector<Task> tasks;
    for (int n : sizes) {
        for (int t = 0; t < targets; ++t) tasks.push_back({n, t});
    }
    std::vector<CompileRandomRow> rows(tasks.size());
    std::unordered_map<int, BasisPtr> bases;
    for (int n : sizes) bases[n] = std::make_shared<LieBasis>(g0_basis(n));

    parallel_for(static_cast<int>(tasks.size()), ctx.threads, [&](int ti) {
        const Task& task = tasks[ti];
        const BasisPtr& basis = bases.at(task.n);
        Rng rng(ctx.seed ^ (std::uint64_t(task.n) << 24) ^
                std::uint64_t(task.target_id));
        SpanElement h = random_target_hamiltonian(*basis, locality, rng);
        Eigen::MatrixXd v_bar = target_adjoint(h, big_t, *basis);

        Circuit circuit = compile_ansatz(task.n, basis->dim());
        CompiledCircuit compiled(circuit, basis);
        Eigen::VectorXd theta0(circuit.param_count);
        for (int i = 0; i < circuit.param_count; ++i) {
            theta0[i] = rng.uniform(0, 2 * M_PI);
        }
        auto loss_grad = [&](const Eigen::VectorXd& th, Eigen::VectorXd* g) {
            auto res = grad_compilation(compiled, th, v_bar);
            if (g) *g = res.values;
            return res.loss;
        };
        auto res = minimize(loss_grad, theta0, opt);
        rows[ti] = {task.n, task.target_id,
                    res.converged ? res.iterations : -1, res.loss};
    });

    RandomModeResult out;
    out.rows = std::move(rows);
    return out;
}

struct AndersonModeResult {
    std::vector<CompileAndersonRow> rows;
};

AndersonModeResult run_anderson_mode(const nlohmann::json& config,
                                     const RunContext& ctx) {
    const int n = config.value("n", 12);
    if (n > 12) throw ResourceLimitError("anderson mode needs n <= 12");
    std::vector<double> xi_values =
        config.value("xi_values", std::vector<double>{0.0, 4.0});
    const double t_max = config.value("t_max", 100.0);
    const double anneal_dt = config.value("anneal_dt", 0.5);
    const double report_dt = config.value("report_dt", 5.0);
    const int layers = config.value("layers", 17);
    const bool with_hst = config.value("hst", true);
    OptimizerConfig defaults;
    defaults.rate = 0.02;
    defaults.max_iterations = 2000;
    defaults.threshold = 1e-12;
    defaults.plateau_window = 120;
    defaults.plateau_tolerance = 0.0;
    OptimizerConfig opt = optimizer_from_json(
        config.contains("optimizer") ? config["optimizer"] : nlohmann::json(),
        defaults);

    auto basis = std::make_shared<LieBasis>(g0_basis(n));

    // <N^2> from the classical description: N = s/2 - (1/2) sum (j-1) Z_j.
    Eigen::VectorXd u = Eigen::VectorXd::Zero(basis->dim());
    double s = 0;
    for (int j = 0; j < n; ++j) {
        u[basis->find(PauliString::single(n, j, 'Z'))] = j;
        s += j;
    }
    auto n2_of = [&](const Eigen::VectorXd& e, const Eigen::MatrixXd& em) {
        return s * s / 4.0 - 0.5 * s * u.dot(e) + 0.25 * u.dot(em * u);
    };

    auto e_in = expectation_vector(
        StateSpec::computational("1" + std::string(n - 1, '0')), basis);
    auto em_in = correlation_matrix(
        StateSpec::computational("1" + std::string(n - 1, '0')), basis, basis);

    std::vector<std::vector<CompileAndersonRow>> per_xi(xi_values.size());

    parallel_for(static_cast<int>(xi_values.size()), ctx.threads, [&](int xi_i) {
        double xi = xi_values[xi_i];
        Rng rng(ctx.seed ^ (std::uint64_t(xi_i) << 16));
        Eigen::VectorXd fields(n);
        for (int j = 0; j < n; ++j) fields[j] = xi * rng.normal();
        SpanElement h_raw = tfxy_hamiltonian(n, fields);
        SpanElement h = h_raw.scaled(1.0 / h_raw.norm());

        Circuit circuit = tfxy_hva_circuit(n, layers);
        CompiledCircuit compiled(circuit, basis);

        // Spectral data for the Hilbert-Schmidt verification.
        Eigen::MatrixXd eigvecs;
        Eigen::VectorXd eigvals;
        if (with_hst) oracle::real_symmetric_eig(h, eigvecs, eigvals);

        Eigen::VectorXd theta = Eigen::VectorXd::Zero(circuit.param_count);
        double next_report = 0.0;
        int steps = static_cast<int>(std::ceil(t_max / anneal_dt - 1e-9));
        std::vector<CompileAndersonRow>& rows = per_xi[xi_i];

        // Per-parameter Hamiltonian coefficients in circuit order; the
        // first-order Trotter binding at time t is theta_{l,k} = (t/L) c_k.
        std::map<PauliString, double> coeff_of;
        for (const auto& [p, c] : h.terms) coeff_of[p] = c;
        Eigen::VectorXd trotter_template(circuit.param_count);
        {
            int idx = 0;
            for (const auto& elem : circuit.elements) {
                const Gate& g = std::get<Gate>(elem);
                trotter_template[idx++] =
                    coeff_of.at(g.generator.terms[0].first);
            }
        }

        auto report = [&](double t, double lg) {
            Eigen::VectorXd e_c = evolve(compiled, theta, e_in.values);
            Eigen::MatrixXd em_c =
                evolve_correlation(compiled, compiled, theta, em_in.values);
            Eigen::MatrixXd v_t = target_adjoint(h, t, *basis);
            Eigen::VectorXd e_x = v_t * e_in.values;
            Eigen::MatrixXd em_x = v_t * em_in.values * v_t.transpose();

            Eigen::VectorXd trotter = (t / layers) * trotter_template;
            Eigen::VectorXd e_t = evolve(compiled, trotter, e_in.values);
            Eigen::MatrixXd em_t =
                evolve_correlation(compiled, compiled, trotter, em_in.values);

            CompileAndersonRow row;
            row.xi = xi;
            row.time = t;
            row.n2_compiled = n2_of(e_c, em_c);
            row.n2_exact = n2_of(e_x, em_x);
            row.n2_trotter = n2_of(e_t, em_t);
            row.lg_loss = lg;
            row.hst_compiled =
                with_hst
                    ? oracle::hst_loss_spectral(circuit, theta, eigvecs,
                                                eigvals, t)
                    : std::numeric_limits<double>::quiet_NaN();
            rows.push_back(row);
        };

        report(0.0, 0.0);
        next_report = report_dt;
        for (int m = 1; m <= steps; ++m) {
            double t = std::min(m * anneal_dt, t_max);
            Eigen::MatrixXd v_bar = target_adjoint(h, t, *basis);
            auto loss_grad = [&](const Eigen::VectorXd& th,
                                 Eigen::VectorXd* g) {
                auto res = grad_compilation(compiled, th, v_bar);
                if (g) *g = res.values;
                return res.loss;
            };
            auto res = minimize(loss_grad, theta, opt);
            theta = res.theta;
            if (t + 1e-9 >= next_report || m == steps) {
                report(t, res.loss);
                next_report += report_dt;
            }
        }
    });

    AndersonModeResult out;
    for (auto& rows : per_xi) {
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }
    return out;
}

}  // namespace

CompileResult run_compile(const nlohmann::json& config, const RunContext& ctx) {
    check_keys(config,
               {"mode", "sizes", "locality", "T", "targets", "optimizer", "n",
                "xi_values", "t_max", "anneal_dt", "report_dt", "layers",
                "hst", "seed"});
    std::string mode = config.value("mode", "random_target");
    Stopwatch total;
    CompileResult result;

    if (mode == "random_target") {
        auto rm = run_random_mode(config, ctx);
        result.random_rows = std::move(rm.rows);
        CsvWriter csv(ctx.out_dir / "compile_random.csv",
                      {"n", "target_id", "iterations", "final_loss"});
        for (const auto& row : result.random_rows) {
            csv.field(row.n)
                .field(row.target_id)
                .field(row.iterations)
                .field(row.final_loss);
            csv.end_row();
        }
    } else if (mode == "anderson") {
        auto am = run_anderson_mode(config, ctx);
        result.anderson_rows = std::move(am.rows);
        CsvWriter csv(ctx.out_dir / "compile_anderson.csv",
                      {"xi", "t", "n2_compiled", "n2_exact", "n2_trotter",
                       "hst_compiled", "lg_loss"});
        for (const auto& row : result.anderson_rows) {
            csv.field(row.xi)
                .field(row.time)
                .field(row.n2_compiled)
                .field(row.n2_exact)
                .field(row.n2_trotter)
                .field(row.hst_compiled)
                .field(row.lg_loss);
            csv.end_row();
        }
    } else {
        throw ConfigError("unknown compile mode: " + mode);
    }

    write_manifest(ctx, "compile", config, total.seconds());
    return result;
}

}  // namespace gsim::experiments
