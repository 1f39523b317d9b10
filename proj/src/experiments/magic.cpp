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

#include "gsim/errors.hpp"
#include "gsim/experiments.hpp"
#include "internal.hpp"

namespace gsim::experiments {

namespace {

// Trotterized TFXY evolution of the magic state; a fresh random two-qubit
// Pauli channel follows each entangling gate when noisy. Channel weights are
// drawn in circuit order from `noise_rng`, so p = 0 reproduces the noiseless
// gate stream exactly.
Circuit magic_circuit(int n, const Eigen::VectorXd& fields, int steps,
                      double dt, bool noisy, double p, Rng& noise_rng) {
    Circuit c(n);
    for (int s = 0; s < steps; ++s) {
        for (int j = 0; j < n; ++j) {
            c.push(Gate::pauli_fixed(PauliString::single(n, j, 'Z'),
                                     dt * fields[j]));
        }
        for (int j = 0; j + 1 < n; ++j) {
            c.push(Gate::pauli_fixed(two_site(n, j, 'X', 'X'), dt));
            if (noisy) {
                double raw[15];
                for (double& r : raw) r = noise_rng.uniform();
                c.push(NoiseChannel::two_qubit_random(n, j, j + 1, p, raw));
            }
            c.push(Gate::pauli_fixed(two_site(n, j, 'Y', 'Y'), dt));
            if (noisy) {
                double raw[15];
                for (double& r : raw) r = noise_rng.uniform();
                c.push(NoiseChannel::two_qubit_random(n, j, j + 1, p, raw));
            }
        }
    }
    return c;
}

}  // namespace

MagicResult run_magic_demo(const nlohmann::json& config, const RunContext& ctx) {
    check_keys(config, {"n", "tau", "xi", "steps", "stepsize", "noise_p",
                        "seed"});
    const int n = config.value("n", 200);
    const double tau = config.value("tau", 2.81);
    const double xi = config.value("xi", 1.0);
    const int steps = config.value("steps", 300);
    const double dt = config.value("stepsize", 2.0);
    const double p = config.value("noise_p", 3e-4);
    if (n % 4 != 0) throw ConfigError("magic demo needs n divisible by 4");

    Stopwatch total;
    Rng field_rng(ctx.seed);
    Eigen::VectorXd fields(n);
    for (int j = 0; j < n; ++j) fields[j] = xi * field_rng.normal();

    auto basis = std::make_shared<LieBasis>(g0_basis(n));
    auto e_in = expectation_vector(StateSpec::magic(n, tau), basis);

    // Correlator entries <Y_j X_{j+1}> sit directly in the basis, as does
    // the chain-spanning correlator Y_1 Z ... Z X_n whose entry becomes
    // nonzero exactly when the light cone connects the first and last qubit.
    std::vector<int> bond_index(n - 1);
    for (int j = 0; j + 1 < n; ++j) {
        bond_index[j] = basis->find(two_site(n, j, 'Y', 'X'));
    }
    PauliString spanning(n);
    spanning.set(0, 'Y');
    for (int k = 1; k + 1 < n; ++k) spanning.set(k, 'Z');
    spanning.set(n - 1, 'X');
    const int span_index = basis->find(spanning);

    MagicResult result;
    const int final_quarter_start = steps - steps / 4;

    auto run_pass = [&](bool noisy, const char* csv_name, double& far_end,
                        double& span_max, double& span_final) {
        Rng noise_rng(ctx.seed + 1);
        Circuit circuit =
            magic_circuit(n, fields, steps, dt, noisy, noisy ? p : 0.0,
                          noise_rng);
        CompiledCircuit compiled(circuit, basis);
        CsvWriter csv(ctx.out_dir / csv_name, {"t", "j", "value"});
        Eigen::VectorXd e = e_in.values;
        for (int j = 0; j + 1 < n; ++j) {
            csv.field(0.0).field(j + 1).field(e[bond_index[j]]);
            csv.end_row();
        }
        const int per_step =
            static_cast<int>(compiled.elements().size()) / steps;
        int cursor = 0;
        Eigen::VectorXd dummy;
        for (int s = 0; s < steps; ++s) {
            for (int k = 0; k < per_step; ++k) {
                const auto& elem = compiled.elements()[cursor++];
                if (elem.is_noise) {
                    if (elem.keys) {
                        const auto& keys = *elem.keys;
                        for (Eigen::Index a = 0; a < e.size(); ++a) {
                            e[a] *= elem.table[keys[a]];
                        }
                    } else {
                        e.array() *= elem.table.array();
                    }
                } else {
                    for (const auto& term : elem.terms) {
                        apply_gate_term(compiled.generator(term.generator),
                                        elem.angle * term.coeff, e);
                    }
                }
            }
            double t = (s + 1) * dt;
            for (int j = 0; j + 1 < n; ++j) {
                csv.field(t).field(j + 1).field(e[bond_index[j]]);
                csv.end_row();
            }
            if (s >= final_quarter_start) {
                far_end = std::max(far_end, std::abs(e[bond_index[n - 2]]));
                span_max = std::max(span_max, std::abs(e[span_index]));
            }
            if (s + 1 == steps) span_final = std::abs(e[span_index]);
        }
    };

    double span_final_noiseless = 0, span_final_noisy = 0;
    run_pass(false, "magic_noiseless.csv", result.far_end_noiseless,
             result.spanning_noiseless, span_final_noiseless);
    run_pass(true, "magic_noisy.csv", result.far_end_noisy,
             result.spanning_noisy, span_final_noisy);

    nlohmann::json metrics;
    metrics["xi"] = xi;
    metrics["far_end_noiseless"] = result.far_end_noiseless;
    metrics["far_end_noisy"] = result.far_end_noisy;
    metrics["spanning_noiseless"] = result.spanning_noiseless;
    metrics["spanning_noisy"] = result.spanning_noisy;
    metrics["spanning_final_noiseless"] = span_final_noiseless;
    metrics["spanning_final_noisy"] = span_final_noisy;
    metrics["spanning_final_suppression"] =
        span_final_noisy > 0 ? span_final_noiseless / span_final_noisy
                             : std::numeric_limits<double>::infinity();
    metrics["spanning_suppression"] =
        result.spanning_noisy > 0
            ? result.spanning_noiseless / result.spanning_noisy
            : std::numeric_limits<double>::infinity();
    write_manifest(ctx, "magic", config, total.seconds(), metrics);
    return result;
}

}  // namespace gsim::experiments
