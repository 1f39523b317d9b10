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

#include "gsim/errors.hpp"
#include "gsim/experiments.hpp"
#include "internal.hpp"

namespace gsim::experiments {

namespace {

// Working-set accounting for one evolution problem at size n: basis strings,
// index map, coupling lists, and the expectation vector.
double memory_estimate_mb(const LieBasis& basis,
                          const CompiledCircuit& compiled) {
    const double words = (basis.num_qubits() + 63) / 64;
    double bytes = 0;
    // Pauli strings: two mask vectors plus vector headers.
    bytes += basis.dim() * (2 * (words * 8 + 24));
    // Hash index: key copy + node and bucket overhead.
    bytes += basis.dim() * (2 * (words * 8 + 24) + 48 + 16);
    // Coupling lists, one per deduplicated generator.
    std::unordered_map<const AdjointGenerator*, bool> seen;
    for (const auto& elem : compiled.elements()) {
        for (const auto& term : elem.terms) {
            const auto& gen = compiled.generator(term.generator);
            if (!seen.emplace(&gen, true).second) continue;
            bytes += gen.couplings.size() * sizeof(AdjointGenerator::Coupling) +
                     2 * (words * 8 + 24);
        }
    }
    // Expectation vector and one scratch copy.
    bytes += 2.0 * basis.dim() * 8;
    return bytes / (1024.0 * 1024.0);
}

}  // namespace

BenchmarkResult run_benchmark(const nlohmann::json& config,
                              const RunContext& ctx) {
    check_keys(config, {"sizes", "layers", "min_measure_seconds", "seed"});
    std::vector<int> sizes =
        config.value("sizes", std::vector<int>{25, 50, 100, 200});
    int layers = config.value("layers", 1);
    double min_measure = config.value("min_measure_seconds", 0.5);

    Stopwatch total;
    BenchmarkResult result;
    CsvWriter csv(ctx.out_dir / "benchmark.csv",
                  {"n", "per_gate_time_s", "memory_mb"});

    for (int n : sizes) {
        auto basis = std::make_shared<LieBasis>(g0_basis(n));
        Circuit circuit = benchmark_circuit(n, layers);
        CompiledCircuit compiled(circuit, basis);
        Rng rng(ctx.seed + n);
        Eigen::VectorXd theta(circuit.param_count);
        for (int i = 0; i < circuit.param_count; ++i) {
            theta[i] = rng.uniform(0, 2 * M_PI);
        }
        Eigen::VectorXd e0 =
            expectation_vector(StateSpec::computational(std::string(n, '0')),
                               basis)
                .values;

        // Warm-up, then batches until the measurement window is filled.
        Eigen::VectorXd e = evolve(compiled, theta, e0);
        std::int64_t gates_done = 0;
        double sink = 0;
        Stopwatch timer;
        while (timer.seconds() < min_measure) {
            e = evolve(compiled, theta, e0);
            gates_done += circuit.num_gates();
            sink += e[0];
        }
        double per_gate = timer.seconds() / static_cast<double>(gates_done);
        double mem = memory_estimate_mb(*basis, compiled);
        (void)sink;

        result.rows.push_back({n, per_gate, mem});
        csv.field(n).field(per_gate).field(mem);
        csv.end_row();
    }

    nlohmann::json metrics;
    for (const auto& row : result.rows) {
        metrics["per_gate_time_s"][std::to_string(row.n)] = row.per_gate_seconds;
        metrics["memory_mb"][std::to_string(row.n)] = row.memory_mb;
    }
    write_manifest(ctx, "benchmark", config, total.seconds(), metrics);
    return result;
}

}  // namespace gsim::experiments
