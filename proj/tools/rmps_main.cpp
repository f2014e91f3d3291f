// Copyright 2026 The rmps authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <string>

#include "rmps/cli.hpp"

namespace {

void handle_sigint(int) { rmps::interrupt_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rmps: random matrix product state ensemble experiments"};
    app.set_version_flag("--version", std::string(rmps::kToolVersion));

    bool list = false;
    app.add_flag("--list", list, "print the experiment catalog with default configs and exit");

    rmps::RunOptions options;
    int workers = -1;
    std::string seed_str;
    app.add_option("--config", options.config_path, "config file (flat JSON)");
    app.add_option("--out", options.out_dir, "output directory for CSV and manifest");
    app.add_option("--set", options.overrides, "config override KEY=VALUE (repeatable)");
    app.add_option("--workers", workers, "worker threads (default: all cores)");
    app.add_option("--experiment", options.experiment, "experiment name (overrides config)");
    app.add_option("--seed", seed_str, "master seed (overrides config)");

    CLI11_PARSE(app, argc, argv);

    if (list) {
        std::cout << rmps::list_experiments_json().dump(2) << '\n';
        return 0;
    }

    if (workers >= 0) {
        options.workers = workers;
    } else if (const char* env = std::getenv("RMPS_WORKERS")) {
        options.workers = std::atoi(env);
    }
    if (!seed_str.empty()) {
        try {
            options.seed = std::stoull(seed_str, nullptr, 0);
        } catch (const std::exception&) {
            std::cerr << "config error: --seed: expected an unsigned integer, got '" << seed_str
                      << "'\n";
            return 2;
        }
    }

    std::signal(SIGINT, handle_sigint);
    return rmps::run_experiment(options);
}
