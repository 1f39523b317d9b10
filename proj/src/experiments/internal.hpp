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

#include <atomic>
#include <functional>
#include <thread>

#include "gsim/experiments.hpp"

// Shared helpers for the experiment drivers.

namespace gsim::experiments {

OptimizerConfig optimizer_from_json(const nlohmann::json& j,
                                    OptimizerConfig defaults);

void write_manifest(const RunContext& ctx, const std::string& experiment,
                    const nlohmann::json& config, double wall_seconds,
                    const nlohmann::json& extra = nullptr);

/// Runs fn(0..count-1) over a worker pool; rethrows the first error.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

PauliString two_site(int n, int j, char a, char b);

SpanElement tfxy_hamiltonian(int n, const Eigen::VectorXd& fields);
SpanElement tfim_hamiltonian(int n, double hxx, double hz);
SpanElement ltfim_hamiltonian(int n, double hxx, double hz, double hx);

/// Decomposes an in-basis observable into its weight vector.
Eigen::VectorXd observable_weights(const SpanElement& h, const LieBasis& basis);

}  // namespace gsim::experiments
