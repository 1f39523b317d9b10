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

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "gsim/engine.hpp"

namespace gsim {

struct OptimizerConfig {
    enum class Method { kAdam, kGradientDescent };
    Method method = Method::kAdam;
    double rate = 0.05;
    int max_iterations = 1000;
    /// Stop once the best loss reaches this value.
    double threshold = -std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    // Adam moment decay.
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    /// Optional plateau stop: no improvement beyond plateau_tolerance for
    /// plateau_window iterations. Disabled when the window is 0.
    int plateau_window = 0;
    double plateau_tolerance = 0.0;
};

/// loss_grad(theta, grad_out): returns the loss; writes the gradient into
/// grad_out when it is non-null.
using LossGradFn =
    std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

struct MinimizeResult {
    Eigen::VectorXd theta;      // best-seen parameters
    double loss;                // best-seen loss
    std::vector<double> trace;  // loss per iteration, including the initial
    int iterations = 0;
    bool converged = false;  // reached threshold (or an exactly zero gradient)
};

/// Deterministic first-order minimization; returns the best-seen point and
/// the full trace. Throws NumericalError on a non-finite loss.
MinimizeResult minimize(const LossGradFn& loss_grad, Eigen::VectorXd theta0,
                        const OptimizerConfig& config);

struct AnnealSchedule {
    std::vector<double> times;  // strictly increasing, times[0] == 0
    OptimizerConfig step_config;
};

/// Uniform schedule 0, dt, 2dt, ..., T (ceil(T/dt) steps after 0).
AnnealSchedule uniform_schedule(double total_time, double dt = 0.5,
                                OptimizerConfig step_config = {});

struct AnnealResult {
    Eigen::VectorXd theta;
    std::vector<double> step_losses;  // final L_g per schedule step
    bool ok = true;
    int failed_step = -1;  // first step that missed the threshold, if any
};

/// Annealed-target compilation of e^{-i t_m H}: each step warm-starts from
/// the previous solution, with theta_0 = 0 so the identity-connected solution
/// manifold is tracked. Steps that miss OptimizerConfig::threshold mark the
/// result as failed but continue to report partial results.
AnnealResult anneal_compile(const CompiledCircuit& circuit,
                            const SpanElement& hamiltonian,
                            const AnnealSchedule& schedule);

}  // namespace gsim
