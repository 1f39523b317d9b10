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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gsim/circuit.hpp"
#include "gsim/engine.hpp"
#include "gsim/io.hpp"
#include "gsim/optimize.hpp"

// Config-driven experiment drivers behind the `gsim` CLI. Each run_*
// function validates its config (schema "gsim-experiment/1", unknown keys
// rejected), writes CSV outputs plus a JSON manifest into the output
// directory, and returns a summary for programmatic use.

namespace gsim::experiments {

struct RunContext {
    std::filesystem::path out_dir;
    int threads = 1;
    std::uint64_t seed = 1;  // base seed; per-task seeds derive from it
    bool verify = false;
};

/// Parses and validates the common envelope; throws ConfigError on unknown
/// fields or a bad schema.
nlohmann::json load_config(const std::filesystem::path& path);
void check_keys(const nlohmann::json& config,
                const std::vector<std::string>& allowed);

// ---- Ansatz builders shared by experiments and tests ----

/// One HVA layer: Z rotations on every site, then per bond XX and YY, each
/// gate with its own parameter. `max_params` >= 0 truncates the gate list.
Circuit tfxy_hva_circuit(int n, int layers, int max_params = -1);
/// Benchmark layer: Z rotations then all four XX/XY/YX/YY bond generators.
Circuit benchmark_circuit(int n, int layers);
/// Trotterized TFXY evolution: per step, Z rotations with angles dt*b_j then
/// per bond XX and YY with angle dt (all fixed angles).
Circuit trotter_tfxy_circuit(int n, const Eigen::VectorXd& fields, int steps,
                             double dt);
/// TFIM pre-training ansatz: layers of (sum XX)(sum Z), two parameters per
/// layer.
Circuit tfim_sum_circuit(int n, int layers);
/// LTFIM extension: (sum XX)(sum Z)(sum X) per layer, three parameters.
Circuit ltfim_sum_circuit(int n, int layers);

/// Random H = sum_a w_a B_a over the basis elements of weight <= locality
/// (all elements when locality <= 0), with |w|_2 = 1.
SpanElement random_target_hamiltonian(const LieBasis& basis, int locality,
                                      Rng& rng);

struct BenchmarkRow {
    int n;
    double per_gate_seconds;
    double memory_mb;
};
struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;
};
BenchmarkResult run_benchmark(const nlohmann::json& config,
                              const RunContext& ctx);

struct MagicResult {
    // max |<Y_j X_{j+1}>| over the final quarter of the evolution, at the
    // far-end bond (n-1, n).
    double far_end_noiseless = 0;
    double far_end_noisy = 0;
    // max |<Y_1 Z..Z X_n>| over the same window: the chain-spanning
    // correlator, nonzero once the light cone connects both chain ends.
    double spanning_noiseless = 0;
    double spanning_noisy = 0;
};
MagicResult run_magic_demo(const nlohmann::json& config, const RunContext& ctx);

struct OverparamCell {
    int n;
    int num_params;
    double convergence_probability;
};
struct OverparamResult {
    std::vector<OverparamCell> cells;
};
OverparamResult run_overparam_sweep(const nlohmann::json& config,
                                    const RunContext& ctx);

struct LtfimSizeRow {
    int n;
    double hx;
    double median_eps_random, median_eps_pretrained;
    double grad_var_random, grad_var_pretrained;
};
struct LtfimResult {
    std::vector<LtfimSizeRow> rows;
};
LtfimResult run_ltfim_pretrain(const nlohmann::json& config,
                               const RunContext& ctx);

struct QaoaResult {
    double fraction_above_gw_pretrained = 0;
    double fraction_above_gw_random = 0;
    double mean_ratio_pretrained = 0;
    double mean_ratio_random = 0;
};
QaoaResult run_qaoa_pretrain(const nlohmann::json& config,
                             const RunContext& ctx);

struct CompileRandomRow {
    int n;
    int target_id;
    int iterations;
    double final_loss;
};
struct CompileAndersonRow {
    double xi;
    double time;
    double n2_compiled, n2_exact, n2_trotter;
    double hst_compiled;
    double lg_loss;
};
struct CompileResult {
    std::vector<CompileRandomRow> random_rows;
    std::vector<CompileAndersonRow> anderson_rows;
};
CompileResult run_compile(const nlohmann::json& config, const RunContext& ctx);

struct ClassifierResult {
    double train_accuracy = 0;
    double test_accuracy = 0;
    double pruned_test_accuracy = 0;
};
ClassifierResult run_classifier(const nlohmann::json& config,
                                const RunContext& ctx);

/// Exports the selected algebra basis and per-generator representation
/// elements as CSV.
void run_algebra_export(const nlohmann::json& config, const RunContext& ctx);

/// Small-n cross-validation against the brute-force oracle, shared by the
/// --verify flag of every experiment. Throws on disagreement.
void verify_small_n(std::uint64_t seed);

/// Dispatch by experiment name; returns the process exit code.
int run_experiment(const std::string& name, const nlohmann::json& config,
                   const RunContext& ctx);

}  // namespace gsim::experiments
