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

#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "rmps/ensemble.hpp"

namespace rmps {

inline constexpr const char* kToolVersion = "rmps 0.1.0";

struct ExperimentInfo {
    std::string name;
    std::string description;
    nlohmann::json defaults;
};

/// The seven experiments, each with a complete default config.
const std::vector<ExperimentInfo>& experiment_catalog();

struct ParsedConfig {
    CampaignConfig campaign;
    std::string experiment;
    nlohmann::json canonical;  // the effective config document
};

/// Strict parse: unknown keys and out-of-range values raise ConfigError with
/// the offending key named. The document is flat JSON; keys follow the
/// campaign field names (D, L, boundary_kind, homogeneous, N_grid, chi_rule,
/// chi, chi_power, samples, master_seed, observable, epsilon_grid,
/// sample_grid, bins, pairs, perturbation_scales, workers, experiment).
ParsedConfig parse_config(const nlohmann::json& doc);

/// KEY=VALUE override applied onto a config document; VALUE is parsed as JSON
/// when possible, else taken as a string. Returns the new document (the input
/// is not modified, so a failed batch of overrides never partially applies).
nlohmann::json apply_override(const nlohmann::json& doc, const std::string& assignment);

/// FNV-1a 64-bit hash (stable across platforms).
uint64_t fnv1a64(const std::string& text);

struct RunOptions {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;   // KEY=VALUE
    std::string experiment;               // overrides the config's experiment
    std::optional<uint64_t> seed;         // overrides master_seed
    std::optional<int> workers;           // overrides workers (flag or env)
};

/// Full pipeline: parse + validate, dispatch the experiment, write
/// <out>/<experiment>.csv and <out>/manifest.json. Returns the process exit
/// code: 0 ok, 2 config error, 3 numerical failure, 130 interrupted (partial
/// results flushed).
int run_experiment(const RunOptions& options);

/// Machine-readable catalog (name, description, defaults) for `rmps list`.
nlohmann::json list_experiments_json();

}  // namespace rmps
