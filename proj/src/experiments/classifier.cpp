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
#include "internal.hpp"

namespace gsim::experiments {

namespace {

struct Sample {
    double hz, hxx;
    double label;             // -1 disordered, +1 antiferromagnetic
    Eigen::VectorXd e;        // disguised classical description
};

}  // namespace

ClassifierResult run_classifier(const nlohmann::json& config,
                                const RunContext& ctx) {
    check_keys(config, {"n", "train_size", "test_size", "disguise_T",
                        "prune_k", "layers", "optimizer_data",
                        "optimizer_train", "seed"});
    const int n = config.value("n", 20);
    const int train_size = config.value("train_size", 100);
    const int test_size = config.value("test_size", 100);
    const double disguise_t = config.value("disguise_T", 10.0);
    const int prune_k = config.value("prune_k", 2);
    const int layers = config.value("layers", 21);

    OptimizerConfig data_defaults;
    data_defaults.rate = 0.05;
    data_defaults.max_iterations = 500;
    data_defaults.plateau_window = 60;
    data_defaults.plateau_tolerance = 1e-9;
    OptimizerConfig opt_data = optimizer_from_json(
        config.contains("optimizer_data") ? config["optimizer_data"]
                                          : nlohmann::json(),
        data_defaults);
    OptimizerConfig train_defaults;
    train_defaults.rate = 0.02;
    train_defaults.max_iterations = 2000;
    train_defaults.plateau_window = 200;
    train_defaults.plateau_tolerance = 1e-10;
    OptimizerConfig opt_train = optimizer_from_json(
        config.contains("optimizer_train") ? config["optimizer_train"]
                                           : nlohmann::json(),
        train_defaults);

    Stopwatch total;
    auto basis = std::make_shared<LieBasis>(g0_basis(n));
    const int total_samples = train_size + test_size;

    // Disguise V = exp(-i T H_w) for one random global H_w with |w|_2 = 1.
    Rng disguise_rng(ctx.seed ^ 0xd15ull);
    Eigen::MatrixXd v_bar;
    if (disguise_t != 0.0) {
        SpanElement hw = random_target_hamiltonian(*basis, 0, disguise_rng);
        v_bar = target_adjoint(hw, disguise_t, *basis);
    }

    // Data generation: gsim VQE ground states of sampled TFIM instances.
    const int data_layers =
        std::max(1, (n * n + 2) / 4);  // N_p = 2L >= dim(g_TFIM)/2
    Circuit data_circuit = tfim_sum_circuit(n, data_layers);
    Eigen::VectorXd e_zero =
        expectation_vector(StateSpec::computational(std::string(n, '0')), basis)
            .values;

    std::vector<Sample> samples(total_samples);
    parallel_for(total_samples, ctx.threads, [&](int si) {
        Rng rng(ctx.seed ^ (0xda7aull << 20) ^ std::uint64_t(si));
        Sample s;
        s.hz = rng.uniform();
        s.hxx = rng.uniform();
        s.label = (s.hz / s.hxx > 1.0) ? -1.0 : 1.0;
        SpanElement h = tfim_hamiltonian(n, s.hxx, s.hz);
        Eigen::VectorXd w = observable_weights(h, *basis);
        CompiledCircuit compiled(data_circuit, basis);
        auto loss_grad = [&](const Eigen::VectorXd& th, Eigen::VectorXd* g) {
            auto res = grad_expectation(compiled, th, e_zero, w);
            if (g) *g = res.values;
            return res.loss;
        };
        Eigen::VectorXd theta0(data_circuit.param_count);
        for (int i = 0; i < theta0.size(); ++i) {
            theta0[i] = rng.uniform(0, 2 * M_PI);
        }
        auto res = minimize(loss_grad, theta0, opt_data);
        Eigen::VectorXd e = evolve(compiled, res.theta, e_zero);
        s.e = (disguise_t != 0.0) ? Eigen::VectorXd(v_bar * e) : e;
        samples[si] = std::move(s);
    });

    bool has_pos = false, has_neg = false;
    for (const auto& s : samples) {
        (s.label > 0 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) {
        throw ConfigError("degenerate dataset: a single class was sampled");
    }

    // Classifier: 21-layer two-local HVA, observable Z_1, MSE loss over the
    // training split. Per-sample scores share the circuit, so the batch
    // gradient aggregates by linearity into one reverse sweep.
    Circuit model = tfxy_hva_circuit(n, layers);
    CompiledCircuit compiled(model, basis);
    Eigen::VectorXd w_obs = Eigen::VectorXd::Zero(basis->dim());
    w_obs[basis->find(PauliString::single(n, 0, 'Z'))] = 1.0;

    auto scores_of = [&](const Eigen::VectorXd& th) {
        // v = Phi(U)^T w via one reverse evolution of the observable:
        // evolve with reversed circuit order and negated angles equals U^T.
        Eigen::VectorXd v = w_obs;
        const auto& elems = compiled.elements();
        for (std::size_t ti = elems.size(); ti-- > 0;) {
            const auto& elem = elems[ti];
            double angle = compiled.gate_angle(elem, th);
            for (auto it = elem.terms.rbegin(); it != elem.terms.rend(); ++it) {
                apply_gate_term(compiled.generator(it->generator),
                                -angle * it->coeff, v);
            }
        }
        Eigen::VectorXd out(total_samples);
        for (int si = 0; si < total_samples; ++si) {
            out[si] = v.dot(samples[si].e);
        }
        return out;
    };

    auto loss_grad = [&](const Eigen::VectorXd& th, Eigen::VectorXd* g) {
        Eigen::VectorXd scores = scores_of(th);
        double loss = 0;
        Eigen::VectorXd agg = Eigen::VectorXd::Zero(basis->dim());
        for (int si = 0; si < train_size; ++si) {
            double r = scores[si] - samples[si].label;
            loss += r * r / train_size;
            if (g) agg += (2.0 / train_size) * r * samples[si].e;
        }
        if (g) {
            auto res = grad_expectation(compiled, th, agg, w_obs);
            *g = res.values;
        }
        return loss;
    };

    Rng train_rng(ctx.seed ^ 0x7ea1ull);
    Eigen::VectorXd theta0(model.param_count);
    for (int i = 0; i < theta0.size(); ++i) {
        theta0[i] = train_rng.uniform(-0.1, 0.1);
    }
    auto trained = minimize(loss_grad, theta0, opt_train);

    // Heisenberg-picture weights of the trained observable and the k-local
    // pruned deployment surrogate.
    Eigen::VectorXd v_full = w_obs;
    {
        const auto& elems = compiled.elements();
        for (std::size_t ti = elems.size(); ti-- > 0;) {
            const auto& elem = elems[ti];
            double angle = compiled.gate_angle(elem, trained.theta);
            for (auto it = elem.terms.rbegin(); it != elem.terms.rend(); ++it) {
                apply_gate_term(compiled.generator(it->generator),
                                -angle * it->coeff, v_full);
            }
        }
    }
    Eigen::VectorXd v_pruned = v_full;
    for (int a = 0; a < basis->dim(); ++a) {
        if (basis->element(a).weight() > prune_k) v_pruned[a] = 0.0;
    }

    ClassifierResult result;
    CsvWriter csv(ctx.out_dir / "classifier.csv",
                  {"sample_id", "split", "hz", "hxx", "label", "score",
                   "pruned_score"});
    nlohmann::json per_sample = nlohmann::json::array();
    int train_ok = 0, test_ok = 0, pruned_ok = 0;
    for (int si = 0; si < total_samples; ++si) {
        double score = v_full.dot(samples[si].e);
        double pruned = v_pruned.dot(samples[si].e);
        bool is_train = si < train_size;
        bool ok = (score >= 0 ? 1.0 : -1.0) == samples[si].label;
        bool pok = (pruned >= 0 ? 1.0 : -1.0) == samples[si].label;
        if (is_train) {
            train_ok += ok;
        } else {
            test_ok += ok;
            pruned_ok += pok;
        }
        csv.field(si)
            .field(is_train ? "train" : "test")
            .field(samples[si].hz)
            .field(samples[si].hxx)
            .field(samples[si].label)
            .field(score)
            .field(pruned);
        csv.end_row();
        per_sample.push_back({{"id", si},
                              {"split", is_train ? "train" : "test"},
                              {"label", samples[si].label},
                              {"score", score}});
    }
    result.train_accuracy = double(train_ok) / train_size;
    result.test_accuracy = double(test_ok) / test_size;
    result.pruned_test_accuracy = double(pruned_ok) / test_size;

    nlohmann::json summary;
    summary["train_accuracy"] = result.train_accuracy;
    summary["test_accuracy"] = result.test_accuracy;
    summary["pruned_test_accuracy"] = result.pruned_test_accuracy;
    summary["final_loss"] = trained.loss;
    summary["samples"] = std::move(per_sample);
    std::filesystem::create_directories(ctx.out_dir);
    std::ofstream(ctx.out_dir / "classifier.json") << summary.dump(2) << '\n';

    write_manifest(ctx, "classifier", config, total.seconds(), summary);
    return result;
}

}  // namespace gsim::experiments
