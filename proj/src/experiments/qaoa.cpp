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
#include <complex>
#include <set>

#include "gsim/errors.hpp"
#include "gsim/experiments.hpp"
#include "gsim/gradients.hpp"
#include "internal.hpp"

namespace gsim::experiments {

namespace {

using cd = std::complex<double>;

struct Graph {
    int n;
    std::vector<std::pair<int, int>> edges;
};

// Configuration-model 3-regular graph with rejection of loops/multi-edges.
Graph random_regular_graph(int n, int degree, Rng& rng) {
    if ((n * degree) % 2 != 0) throw ConfigError("n*degree must be even");
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<int> stubs;
        for (int v = 0; v < n; ++v) {
            for (int d = 0; d < degree; ++d) stubs.push_back(v);
        }
        // Fisher-Yates off the deterministic stream.
        for (std::size_t i = stubs.size(); i > 1; --i) {
            std::swap(stubs[i - 1], stubs[rng.integer(i)]);
        }
        std::set<std::pair<int, int>> edges;
        bool ok = true;
        for (std::size_t i = 0; i < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) {
                ok = false;
                break;
            }
            auto e = std::minmax(a, b);
            if (!edges.emplace(e.first, e.second).second) {
                ok = false;
                break;
            }
        }
        if (ok) {
            Graph g{n, {edges.begin(), edges.end()}};
            return g;
        }
    }
    throw NumericalError("failed to sample a simple regular graph");
}

Graph erdos_renyi_graph(int n, double edge_probability, Rng& rng) {
    Graph g{n, {}};
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (rng.uniform() < edge_probability) g.edges.emplace_back(a, b);
        }
    }
    return g;
}

// Cut sizes for all bitstrings; index bit (n-1-j) carries qubit j.
std::vector<std::int16_t> cut_table(const Graph& g) {
    const std::size_t dim = std::size_t{1} << g.n;
    std::vector<std::int16_t> cuts(dim, 0);
    for (auto [a, b] : g.edges) {
        std::uint64_t ba = std::uint64_t{1} << (g.n - 1 - a);
        std::uint64_t bb = std::uint64_t{1} << (g.n - 1 - b);
        for (std::size_t z = 0; z < dim; ++z) {
            cuts[z] += ((z & ba) != 0) != ((z & bb) != 0);
        }
    }
    return cuts;
}

// Fast statevector QAOA evaluator: phase layers are diagonal (table lookup
// of per-cut phases), the mixer is a product of single-qubit X rotations.
class QaoaSimulator {
  public:
    QaoaSimulator(int n, std::vector<std::int16_t> graph_cuts,
                  std::vector<std::int16_t> path_cuts)
        : n_(n),
          dim_(std::size_t{1} << n),
          graph_cuts_(std::move(graph_cuts)),
          path_cuts_(std::move(path_cuts)) {}

    // H_G = (1/2) sum (ZZ - I) has eigenvalue -cut(z).
    // exp(-i gamma H_G)|z> = e^{+i gamma cut(z)} |z>.
    void apply_graph_phase(Eigen::VectorXcd& psi, double gamma) const {
        apply_phase(psi, graph_cuts_, gamma);
    }
    void apply_path_phase(Eigen::VectorXcd& psi, double gamma) const {
        apply_phase(psi, path_cuts_, gamma);
    }
    void apply_mixer(Eigen::VectorXcd& psi, double beta) const {
        const cd c = std::cos(beta);
        const cd ms = cd(0, -std::sin(beta));
        for (int q = 0; q < n_; ++q) {
            const std::size_t bit = std::size_t{1} << (n_ - 1 - q);
            for (std::size_t i = 0; i < dim_; ++i) {
                if (i & bit) continue;
                std::size_t j = i | bit;
                cd a = psi[i], b = psi[j];
                psi[i] = c * a + ms * b;
                psi[j] = ms * a + c * b;
            }
        }
    }
    void apply_mixer2(Eigen::VectorXcd& psi, Eigen::VectorXcd& lam,
                      double beta) const {
        const cd c = std::cos(beta);
        const cd ms = cd(0, -std::sin(beta));
        for (int q = 0; q < n_; ++q) {
            const std::size_t bit = std::size_t{1} << (n_ - 1 - q);
            for (std::size_t i = 0; i < dim_; ++i) {
                if (i & bit) continue;
                std::size_t j = i | bit;
                cd a = psi[i], b = psi[j];
                psi[i] = c * a + ms * b;
                psi[j] = ms * a + c * b;
                cd la = lam[i], lb = lam[j];
                lam[i] = c * la + ms * lb;
                lam[j] = ms * la + c * lb;
            }
        }
    }
    void apply_phase2(Eigen::VectorXcd& psi, Eigen::VectorXcd& lam,
                      const std::vector<std::int16_t>& cuts,
                      double gamma) const {
        int max_cut = *std::max_element(cuts.begin(), cuts.end());
        std::vector<cd> phase(max_cut + 1);
        for (int k = 0; k <= max_cut; ++k) {
            phase[k] = std::exp(cd(0, gamma * k));
        }
        for (std::size_t z = 0; z < dim_; ++z) {
            psi[z] *= phase[cuts[z]];
            lam[z] *= phase[cuts[z]];
        }
    }
    const std::vector<std::int16_t>& path_cuts() const { return path_cuts_; }

    double graph_energy(const Eigen::VectorXcd& psi) const {
        double e = 0;
        for (std::size_t z = 0; z < dim_; ++z) {
            e -= graph_cuts_[z] * std::norm(psi[z]);
        }
        return e;
    }

    // <lambda| H |psi> for diagonal H with eigenvalue -cut(z).
    cd diag_inner(const Eigen::VectorXcd& lambda, const Eigen::VectorXcd& psi,
                  const std::vector<std::int16_t>& cuts) const {
        cd acc = 0;
        for (std::size_t z = 0; z < dim_; ++z) {
            acc += std::conj(lambda[z]) * (-double(cuts[z])) * psi[z];
        }
        return acc;
    }

    // <lambda| sum_j X_j |psi>.
    cd mixer_inner(const Eigen::VectorXcd& lambda,
                   const Eigen::VectorXcd& psi) const {
        cd acc = 0;
        for (int q = 0; q < n_; ++q) {
            const std::size_t bit = std::size_t{1} << (n_ - 1 - q);
            for (std::size_t i = 0; i < dim_; ++i) {
                acc += std::conj(lambda[i]) * psi[i ^ bit];
            }
        }
        return acc;
    }

    int n() const { return n_; }
    std::size_t dim() const { return dim_; }
    const std::vector<std::int16_t>& graph_cuts() const { return graph_cuts_; }

  private:
    void apply_phase(Eigen::VectorXcd& psi,
                     const std::vector<std::int16_t>& cuts,
                     double gamma) const {
        // cut values are small integers: precompute the phase table.
        int max_cut = *std::max_element(cuts.begin(), cuts.end());
        std::vector<cd> phase(max_cut + 1);
        for (int k = 0; k <= max_cut; ++k) {
            phase[k] = std::exp(cd(0, gamma * k));
        }
        for (std::size_t z = 0; z < dim_; ++z) psi[z] *= phase[cuts[z]];
    }

    int n_;
    std::size_t dim_;
    std::vector<std::int16_t> graph_cuts_;
    std::vector<std::int16_t> path_cuts_;
};

// Modified ansatz: per layer, mixer(beta_l), path-phase(gamma_l),
// graph-phase(alpha_l), applied to |+>^n in the order phase-then-mixer used
// by the standard QAOA layer. Parameters are packed [beta, gamma, alpha] per
// layer. alpha entries are ignored when use_graph is false (standard path
// ansatz used in pre-training has no graph term).
struct QaoaAnsatz {
    const QaoaSimulator* sim;
    int layers;
    bool use_graph;

    int params() const { return layers * (use_graph ? 3 : 2); }

    Eigen::VectorXcd forward(const Eigen::VectorXd& theta) const {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(
            sim->dim(), cd(1.0 / std::sqrt(double(sim->dim())), 0));
        int stride = use_graph ? 3 : 2;
        for (int l = 0; l < layers; ++l) {
            if (use_graph) sim->apply_graph_phase(psi, theta[l * stride + 2]);
            sim->apply_path_phase(psi, theta[l * stride + 1]);
            sim->apply_mixer(psi, theta[l * stride]);
        }
        return psi;
    }

    // Adjoint-mode gradient of <H_G>; returns the energy.
    double gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& grad,
                    const std::vector<std::int16_t>& graph_cuts,
                    const std::vector<std::int16_t>& path_cuts) const {
        Eigen::VectorXcd psi = forward(theta);
        double energy = sim->graph_energy(psi);
        Eigen::VectorXcd lambda(psi.size());
        for (std::size_t z = 0; z < sim->dim(); ++z) {
            lambda[z] = -double(graph_cuts[z]) * psi[z];
        }
        grad.setZero(params());
        // Each generator commutes with its own gate, so contractions may be
        // taken after unwinding.
        int stride = use_graph ? 3 : 2;
        for (int l = layers - 1; l >= 0; --l) {
            sim->apply_mixer2(psi, lambda, -theta[l * stride]);
            grad[l * stride] = 2.0 * sim->mixer_inner(lambda, psi).imag();
            sim->apply_phase2(psi, lambda, path_cuts, -theta[l * stride + 1]);
            grad[l * stride + 1] =
                2.0 * sim->diag_inner(lambda, psi, path_cuts).imag();
            if (use_graph) {
                sim->apply_phase2(psi, lambda, graph_cuts,
                                  -theta[l * stride + 2]);
                grad[l * stride + 2] =
                    2.0 * sim->diag_inner(lambda, psi, graph_cuts).imag();
            }
        }
        return energy;
    }
};

}  // namespace

QaoaResult run_qaoa_pretrain(const nlohmann::json& config,
                             const RunContext& ctx) {
    check_keys(config, {"n", "ensemble", "edge_probability", "graphs",
                        "p_divisor", "optimizer_stage1", "optimizer_stage2",
                        "seed"});
    const int n = config.value("n", 16);
    if (n > 16) throw ResourceLimitError("qaoa experiment needs n <= 16");
    const std::string ensemble = config.value("ensemble", "3regular");
    const double edge_probability = config.value("edge_probability", 0.3);
    const int num_graphs = config.value("graphs", 50);
    const int p_divisor = config.value("p_divisor", 1);
    OptimizerConfig s1_defaults;
    s1_defaults.rate = 0.05;
    s1_defaults.max_iterations = 2500;
    s1_defaults.plateau_window = 200;
    s1_defaults.plateau_tolerance = 1e-10;
    OptimizerConfig opt1 = optimizer_from_json(
        config.contains("optimizer_stage1") ? config["optimizer_stage1"]
                                            : nlohmann::json(),
        s1_defaults);
    OptimizerConfig s2_defaults;
    s2_defaults.rate = 0.03;
    s2_defaults.max_iterations = 160;
    s2_defaults.plateau_window = 30;
    s2_defaults.plateau_tolerance = 1e-6;
    OptimizerConfig opt2 = optimizer_from_json(
        config.contains("optimizer_stage2") ? config["optimizer_stage2"]
                                            : nlohmann::json(),
        s2_defaults);

    Stopwatch total;
    const int p_layers = std::max(1, (n * n) / std::max(1, p_divisor));

    // ---- Stage 1: pre-train the path-graph QAOA entirely in gsim. ----
    // The path QAOA algebra is the Hadamard image of the TFXY algebra: the
    // Pauli closure of {Z_j Z_{j+1}} u {X_j}.
    std::vector<PauliString> gens;
    for (int j = 0; j + 1 < n; ++j) {
        PauliString zz(n);
        zz.set(j, 'Z').set(j + 1, 'Z');
        gens.push_back(zz);
    }
    for (int j = 0; j < n; ++j) gens.push_back(PauliString::single(n, j, 'X'));
    ClosureOptions closure_opts;
    closure_opts.max_dim = std::max(20000, 2 * n * (2 * n - 1));
    auto basis =
        std::make_shared<LieBasis>(lie_closure_pauli(gens, closure_opts));

    auto path_gens = qaoa_path_generators(n);
    // Phase generator = traceless part of H_{P_n} = (1/2) sum ZZ, so stage-1
    // gamma values carry over unchanged to the cut-phase convention used by
    // the dense stage-2 simulator.
    SpanElement half_path = path_gens[0].scaled(0.5);
    Circuit pretrain_circuit(n);
    for (int l = 0; l < p_layers; ++l) {
        pretrain_circuit.push(Gate::sum(half_path, 2 * l + 1));   // gamma
        pretrain_circuit.push(Gate::sum(path_gens[1], 2 * l));    // beta
    }
    CompiledCircuit pretrain_compiled(pretrain_circuit, basis);

    // <H_{P_n}> = (1/2) sum <Z_jZ_{j+1}> - (n-1)/2.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(basis->dim());
    for (const auto& [zz, c] : path_gens[0].terms) {
        w[basis->find(zz)] = 0.5 * c;
    }
    const double offset = -(n - 1) / 2.0;
    Eigen::VectorXd e_plus =
        expectation_vector(StateSpec::plus_all(n), basis).values;

    Rng init_rng(ctx.seed);
    Eigen::VectorXd theta0(pretrain_circuit.param_count);
    for (int i = 0; i < theta0.size(); ++i) {
        theta0[i] = init_rng.uniform(0, 2 * M_PI);
    }
    auto stage1_loss = [&](const Eigen::VectorXd& th, Eigen::VectorXd* g) {
        auto res = grad_expectation(pretrain_compiled, th, e_plus, w);
        if (g) *g = res.values;
        return res.loss + offset;
    };
    auto stage1 = minimize(stage1_loss, theta0, opt1);
    double path_ratio = stage1.loss / (-(n - 1.0));

    // ---- Stage 2: per graph, dense statevector refinement. ----
    Graph path{n, {}};
    for (int j = 0; j + 1 < n; ++j) path.edges.emplace_back(j, j + 1);
    std::vector<std::int16_t> path_cuts = cut_table(path);

    struct GraphRow {
        int graph_id;
        std::string strategy;
        double ratio;
        bool beats_gw;
    };
    std::vector<GraphRow> rows(2 * num_graphs);

    parallel_for(num_graphs, ctx.threads, [&](int gi) {
        Rng graph_rng(ctx.seed ^ (0xabcdull << 32) ^ std::uint64_t(gi));
        Graph graph = ensemble == "erdos_renyi"
                          ? erdos_renyi_graph(n, edge_probability, graph_rng)
                          : random_regular_graph(n, 3, graph_rng);
        std::vector<std::int16_t> cuts = cut_table(graph);
        int max_cut = *std::max_element(cuts.begin(), cuts.end());
        if (max_cut == 0) throw NumericalError("degenerate empty graph");

        QaoaSimulator sim(n, cuts, path_cuts);
        QaoaAnsatz ansatz{&sim, p_layers, true};

        auto optimize_from = [&](Eigen::VectorXd start) {
            auto loss_grad = [&](const Eigen::VectorXd& th,
                                 Eigen::VectorXd* g) {
                if (!g) {
                    Eigen::VectorXcd psi = ansatz.forward(th);
                    return sim.graph_energy(psi);
                }
                return ansatz.gradient(th, *g, sim.graph_cuts(), path_cuts);
            };
            auto res = minimize(loss_grad, std::move(start), opt2);
            return res.loss / (-double(max_cut));
        };

        // Pre-trained start: stage-1 (beta, gamma) with alpha = 0.
        Eigen::VectorXd pre = Eigen::VectorXd::Zero(ansatz.params());
        for (int l = 0; l < p_layers; ++l) {
            pre[3 * l] = stage1.theta[2 * l];          // beta
            pre[3 * l + 1] = stage1.theta[2 * l + 1];  // gamma
        }
        double r_pre = optimize_from(pre);

        Eigen::VectorXd rnd(ansatz.params());
        Rng rnd_rng(ctx.seed ^ (0x1357ull << 32) ^ std::uint64_t(gi));
        for (int i = 0; i < rnd.size(); ++i) {
            rnd[i] = rnd_rng.uniform(0, 2 * M_PI);
        }
        double r_rnd = optimize_from(rnd);

        rows[2 * gi] = {gi, "pretrained", r_pre, r_pre > 0.878};
        rows[2 * gi + 1] = {gi, "random", r_rnd, r_rnd > 0.878};
    });

    QaoaResult result;
    CsvWriter csv(ctx.out_dir / "qaoa.csv",
                  {"graph_id", "strategy", "ratio", "beats_gw"});
    int pre_gw = 0, rnd_gw = 0;
    for (const auto& row : rows) {
        csv.field(row.graph_id)
            .field(row.strategy)
            .field(row.ratio)
            .field(std::int64_t(row.beats_gw));
        csv.end_row();
        if (row.strategy == "pretrained") {
            result.mean_ratio_pretrained += row.ratio / num_graphs;
            pre_gw += row.beats_gw;
        } else {
            result.mean_ratio_random += row.ratio / num_graphs;
            rnd_gw += row.beats_gw;
        }
    }
    result.fraction_above_gw_pretrained = double(pre_gw) / num_graphs;
    result.fraction_above_gw_random = double(rnd_gw) / num_graphs;

    nlohmann::json metrics;
    metrics["path_pretrain_ratio"] = path_ratio;
    metrics["fraction_above_gw_pretrained"] = result.fraction_above_gw_pretrained;
    metrics["fraction_above_gw_random"] = result.fraction_above_gw_random;
    metrics["mean_ratio_pretrained"] = result.mean_ratio_pretrained;
    metrics["mean_ratio_random"] = result.mean_ratio_random;
    write_manifest(ctx, "qaoa", config, total.seconds(), metrics);
    return result;
}

}  // namespace gsim::experiments
