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

#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "gsim/errors.hpp"
#include "gsim/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitVerify = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gsim: Lie-algebraic simulation and optimization of "
                 "parametrized quantum circuits"};
    app.require_subcommand(1);

    const std::vector<std::string> experiments = {
        "benchmark", "magic",   "overparam", "ltfim",
        "qaoa",      "compile", "classifier", "algebra"};

    std::string config_path;
    std::string out_dir;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    std::uint64_t seed = 1;
    bool seed_set = false;
    bool verify = false;

    for (const auto& name : experiments) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config JSON file")
            ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker pool size");
        sub->add_option("--seed", seed, "base seed override")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_flag("--verify", verify,
                      "cross-validate against the small-n oracle first");
    }

    CLI11_PARSE(app, argc, argv);
    std::string name = app.get_subcommands()[0]->get_name();

    try {
        nlohmann::json config = gsim::experiments::load_config(config_path);
        std::string declared = config.value("experiment", "");
        if (declared != name) {
            throw gsim::ConfigError("config is for experiment '" + declared +
                                    "', not '" + name + "'");
        }

        gsim::experiments::RunContext ctx;
        ctx.threads = std::max(1, threads);
        ctx.verify = verify;
        if (seed_set) {
            ctx.seed = seed;
        } else if (config.contains("seed")) {
            ctx.seed = config["seed"].get<std::uint64_t>();
        }
        if (!out_dir.empty()) {
            ctx.out_dir = out_dir;
        } else if (config.contains("out")) {
            ctx.out_dir = config["out"].get<std::string>();
        } else {
            ctx.out_dir = "gsim_out/" + name;
        }

        if (verify) {
            std::cerr << "verifying against the small-n oracle..." << std::endl;
            gsim::experiments::verify_small_n(ctx.seed);
            std::cerr << "verification passed" << std::endl;
        }
        return gsim::experiments::run_experiment(name, config, ctx);
    } catch (const gsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return kExitConfig;
    } catch (const gsim::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << std::endl;
        return kExitResource;
    } catch (const gsim::NumericalError& e) {
        std::cerr << "verification failure: " << e.what() << std::endl;
        return kExitVerify;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return kExitOk;
}
