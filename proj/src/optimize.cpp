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

#include "gsim/optimize.hpp"

#include <cmath>

#include "gsim/errors.hpp"
#include "gsim/gradients.hpp"

namespace gsim {

MinimizeResult minimize(const LossGradFn& loss_grad, Eigen::VectorXd theta0,
                        const OptimizerConfig& config) {
    if (config.rate <= 0) throw ConfigError("learning rate must be positive");
    if (config.max_iterations < 0) throw ConfigError("iteration cap must be >= 0");

    const Eigen::Index np = theta0.size();
    Eigen::VectorXd theta = std::move(theta0);
    Eigen::VectorXd grad(np);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(np);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(np);

    MinimizeResult result;
    result.theta = theta;

    double loss = loss_grad(theta, &grad);
    if (!std::isfinite(loss)) {
        throw NumericalError("non-finite loss at the initial point");
    }
    result.loss = loss;
    result.trace.push_back(loss);

    double best_since_window = loss;
    int window_count = 0;

    for (int it = 0; it < config.max_iterations; ++it) {
        if (result.loss <= config.threshold) {
            result.converged = true;
            break;
        }
        if (grad.norm() == 0.0) {  // exact stationary point
            result.converged = true;
            break;
        }
        if (config.method == OptimizerConfig::Method::kAdam) {
            m = config.beta1 * m + (1 - config.beta1) * grad;
            v = config.beta2 * v + (1 - config.beta2) * grad.cwiseProduct(grad);
            double bc1 = 1 - std::pow(config.beta1, it + 1);
            double bc2 = 1 - std::pow(config.beta2, it + 1);
            theta.array() -= config.rate * (m.array() / bc1) /
                             ((v.array() / bc2).sqrt() + config.epsilon);
        } else {
            theta -= config.rate * grad;
        }
        loss = loss_grad(theta, &grad);
        if (!std::isfinite(loss)) {
            throw NumericalError("non-finite loss at iteration " +
                                 std::to_string(it + 1));
        }
        result.trace.push_back(loss);
        result.iterations = it + 1;
        if (loss < result.loss) {
            result.loss = loss;
            result.theta = theta;
        }
        if (config.plateau_window > 0) {
            if (loss < best_since_window - config.plateau_tolerance) {
                best_since_window = loss;
                window_count = 0;
            } else if (++window_count >= config.plateau_window) {
                break;
            }
        }
    }
    if (result.loss <= config.threshold) result.converged = true;
    return result;
}

AnnealSchedule uniform_schedule(double total_time, double dt,
                                OptimizerConfig step_config) {
    if (dt <= 0) throw ConfigError("anneal step must be positive");
    AnnealSchedule s;
    s.step_config = step_config;
    s.times.push_back(0.0);
    int steps = static_cast<int>(std::ceil(total_time / dt - 1e-12));
    for (int m = 1; m <= steps; ++m) {
        s.times.push_back(std::min(m * dt, total_time));
    }
    return s;
}

AnnealResult anneal_compile(const CompiledCircuit& circuit,
                            const SpanElement& hamiltonian,
                            const AnnealSchedule& schedule) {
    if (schedule.times.empty() || schedule.times[0] != 0.0) {
        throw ConfigError("anneal schedule must start at t = 0");
    }
    for (std::size_t i = 1; i < schedule.times.size(); ++i) {
        if (schedule.times[i] <= schedule.times[i - 1]) {
            throw ConfigError("anneal schedule must be strictly increasing");
        }
    }

    AnnealResult result;
    result.theta = Eigen::VectorXd::Zero(circuit.param_count());
    // theta = 0 gives U = I = target at t=0; the identity-connected manifold
    // is tracked from there.
    result.step_losses.push_back(0.0);

    for (std::size_t m = 1; m < schedule.times.size(); ++m) {
        Eigen::MatrixXd v_bar =
            target_adjoint(hamiltonian, schedule.times[m], *circuit.basis());
        auto loss_grad = [&](const Eigen::VectorXd& th,
                             Eigen::VectorXd* grad) -> double {
            GradientResult g = grad_compilation(circuit, th, v_bar);
            if (grad) *grad = g.values;
            return g.loss;
        };
        MinimizeResult step =
            minimize(loss_grad, result.theta, schedule.step_config);
        result.theta = step.theta;
        result.step_losses.push_back(step.loss);
        if (!step.converged && result.ok) {
            result.ok = false;
            result.failed_step = static_cast<int>(m);
        }
    }
    return result;
}

}  // namespace gsim
