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

#include "gsim/experiments.hpp"

#include <fstream>

#include "gsim/errors.hpp"
#include "internal.hpp"

namespace gsim::experiments {

nlohmann::json load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (doc.value("schema", "") != "gsim-experiment/1") {
        throw ConfigError("config schema must be \"gsim-experiment/1\"");
    }
    return doc;
}

void check_keys(const nlohmann::json& config,
                const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : config.items()) {
        (void)value;
        if (key == "schema" || key == "experiment" || key == "out") continue;
        bool known = false;
        for (const auto& a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) throw ConfigError("unknown config field: " + key);
    }
}

OptimizerConfig optimizer_from_json(const nlohmann::json& j,
                                    OptimizerConfig defaults) {
    if (j.is_null()) return defaults;
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "method" && key != "rate" && key != "iterations" &&
            key != "threshold" && key != "plateau_window" &&
            key != "plateau_tolerance") {
            throw ConfigError("unknown optimizer field: " + key);
        }
    }
    OptimizerConfig c = defaults;
    if (j.contains("method")) {
        std::string m = j["method"].get<std::string>();
        if (m == "adam") {
            c.method = OptimizerConfig::Method::kAdam;
        } else if (m == "gradient_descent") {
            c.method = OptimizerConfig::Method::kGradientDescent;
        } else {
            throw ConfigError("unknown optimizer method: " + m);
        }
    }
    if (j.contains("rate")) c.rate = j["rate"].get<double>();
    if (j.contains("iterations")) c.max_iterations = j["iterations"].get<int>();
    if (j.contains("threshold")) c.threshold = j["threshold"].get<double>();
    if (j.contains("plateau_window"))
        c.plateau_window = j["plateau_window"].get<int>();
    if (j.contains("plateau_tolerance"))
        c.plateau_tolerance = j["plateau_tolerance"].get<double>();
    return c;
}

void write_manifest(const RunContext& ctx, const std::string& experiment,
                    const nlohmann::json& config, double wall_seconds,
                    const nlohmann::json& extra) {
    nlohmann::json doc;
    doc["schema"] = "gsim-experiment/1";
    doc["experiment"] = experiment;
    doc["config"] = config;
    doc["config_hash"] = fnv1a_hex(config.dump());
    doc["seed"] = ctx.seed;
    doc["threads"] = ctx.threads;
    doc["wall_time_s"] = wall_seconds;
    doc["gsim_version"] = "0.1.0";
    if (!extra.is_null()) doc["metrics"] = extra;
    std::filesystem::create_directories(ctx.out_dir);
    std::ofstream out(ctx.out_dir / "manifest.json");
    out << doc.dump(2) << '\n';
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

Circuit tfxy_hva_circuit(int n, int layers, int max_params) {
    Circuit c(n);
    int p = 0;
    auto done = [&] { return max_params >= 0 && p >= max_params; };
    for (int l = 0; l < layers && !done(); ++l) {
        for (int j = 0; j < n && !done(); ++j) {
            c.push(Gate::pauli(PauliString::single(n, j, 'Z'), p++));
        }
        for (int j = 0; j + 1 < n && !done(); ++j) {
            c.push(Gate::pauli(two_site(n, j, 'X', 'X'), p++));
            if (done()) break;
            c.push(Gate::pauli(two_site(n, j, 'Y', 'Y'), p++));
        }
    }
    return c;
}

Circuit benchmark_circuit(int n, int layers) {
    Circuit c(n);
    int p = 0;
    for (int l = 0; l < layers; ++l) {
        for (int j = 0; j < n; ++j) {
            c.push(Gate::pauli(PauliString::single(n, j, 'Z'), p++));
        }
        static constexpr char kOps[4][2] = {
            {'X', 'X'}, {'X', 'Y'}, {'Y', 'X'}, {'Y', 'Y'}};
        for (int j = 0; j + 1 < n; ++j) {
            for (const auto& ops : kOps) {
                c.push(Gate::pauli(two_site(n, j, ops[0], ops[1]), p++));
            }
        }
    }
    return c;
}

Circuit trotter_tfxy_circuit(int n, const Eigen::VectorXd& fields, int steps,
                             double dt) {
    if (fields.size() != n) throw SizeError("field vector length mismatch");
    Circuit c(n);
    for (int s = 0; s < steps; ++s) {
        for (int j = 0; j < n; ++j) {
            c.push(Gate::pauli_fixed(PauliString::single(n, j, 'Z'),
                                     dt * fields[j]));
        }
        for (int j = 0; j + 1 < n; ++j) {
            c.push(Gate::pauli_fixed(two_site(n, j, 'X', 'X'), dt));
            c.push(Gate::pauli_fixed(two_site(n, j, 'Y', 'Y'), dt));
        }
    }
    return c;
}

Circuit tfim_sum_circuit(int n, int layers) {
    auto gens = tfim_sum_generators(n);
    Circuit c(n);
    int p = 0;
    for (int l = 0; l < layers; ++l) {
        c.push(Gate::sum(gens[0], p++));
        c.push(Gate::sum(gens[1], p++));
    }
    return c;
}

Circuit ltfim_sum_circuit(int n, int layers) {
    auto gens = tfim_sum_generators(n);
    SpanElement sum_x(n);
    for (int j = 0; j < n; ++j) sum_x.add(PauliString::single(n, j, 'X'), 1.0);
    Circuit c(n);
    int p = 0;
    for (int l = 0; l < layers; ++l) {
        c.push(Gate::sum(gens[0], p++));
        c.push(Gate::sum(gens[1], p++));
        c.push(Gate::sum(sum_x, p++));
    }
    return c;
}

SpanElement random_target_hamiltonian(const LieBasis& basis, int locality,
                                      Rng& rng) {
    std::vector<int> indices;
    for (int a = 0; a < basis.dim(); ++a) {
        if (locality <= 0 || basis.element(a).weight() <= locality) {
            indices.push_back(a);
        }
    }
    Eigen::VectorXd w = rng.unit_vector(static_cast<int>(indices.size()));
    SpanElement h(basis.num_qubits());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        h.add(basis.element(indices[i]), w[static_cast<Eigen::Index>(i)]);
    }
    return h;
}

PauliString two_site(int n, int j, char a, char b) {
    PauliString p(n);
    p.set(j, a).set(j + 1, b);
    return p;
}

SpanElement tfxy_hamiltonian(int n, const Eigen::VectorXd& fields) {
    SpanElement h(n);
    for (int j = 0; j + 1 < n; ++j) {
        h.add(two_site(n, j, 'X', 'X'), 1.0);
        h.add(two_site(n, j, 'Y', 'Y'), 1.0);
    }
    for (int j = 0; j < n; ++j) {
        h.add(PauliString::single(n, j, 'Z'), fields[j]);
    }
    return h;
}

SpanElement tfim_hamiltonian(int n, double hxx, double hz) {
    SpanElement h(n);
    for (int j = 0; j + 1 < n; ++j) h.add(two_site(n, j, 'X', 'X'), hxx);
    for (int j = 0; j < n; ++j) h.add(PauliString::single(n, j, 'Z'), hz);
    return h;
}

SpanElement ltfim_hamiltonian(int n, double hxx, double hz, double hx) {
    SpanElement h = tfim_hamiltonian(n, hxx, hz);
    for (int j = 0; j < n; ++j) h.add(PauliString::single(n, j, 'X'), hx);
    return h;
}

Eigen::VectorXd observable_weights(const SpanElement& h, const LieBasis& basis) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(basis.dim());
    for (const auto& [p, c] : h.terms) {
        int idx = basis.find(p);
        if (idx < 0) {
            throw SizeError("observable term outside the basis: " +
                            p.sparse_str());
        }
        w[idx] += c;
    }
    return w;
}

}  // namespace gsim::experiments
