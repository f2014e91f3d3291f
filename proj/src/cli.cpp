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

#include "rmps/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rmps/weingarten.hpp"

namespace rmps {

namespace {

using nlohmann::json;

json base_defaults() {
    return json{
        {"D", 2},
        {"L", 1},
        {"boundary_kind", "obc"},
        {"homogeneous", true},
        {"N_grid", json::array({4})},
        {"chi_rule", "fixed"},
        {"chi", 2},
        {"chi_power", 2.5},
        {"samples", 500},
        {"master_seed", 20260810},
        {"observable", "sigma_x"},
        {"epsilon_grid", json::array()},
        {"sample_grid", json::array()},
        {"bins", 50},
        {"pairs", 200},
        {"perturbation_scales", json::array({1e-2, 1e-3, 1e-4})},
        {"workers", 0},
    };
}

json with(json j, std::initializer_list<std::pair<const char*, json>> kv) {
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
    static const std::vector<ExperimentInfo> catalog = [] {
        std::vector<ExperimentInfo> c;
        c.push_back({"average-state-distance",
                     "running trace distance of the empirical average state to the maximally "
                     "mixed state, RMPS vs Haar ensembles",
                     with(base_defaults(),
                          {{"experiment", "average-state-distance"},
                           {"N_grid", json::array({4})},
                           {"chi", 2},
                           {"sample_grid", json::array({100, 300, 1000, 3000, 10000})}})});
        c.push_back({"eigen-histogram",
                     "pooled reduced-density-matrix eigenvalue distributions, RMPS vs Haar",
                     with(base_defaults(), {{"experiment", "eigen-histogram"},
                                            {"N_grid", json::array({4})},
                                            {"chi", 2},
                                            {"samples", 5000},
                                            {"bins", 50}})});
        c.push_back({"variance-scan",
                     "ensemble variance of a local observable over (N, chi) grid points",
                     with(base_defaults(),
                          {{"experiment", "variance-scan"},
                           {"N_grid", json::array({4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16})},
                           {"chi", 2},
                           {"samples", 500}})});
        c.push_back({"distance-scan",
                     "average trace distance of reduced states to their ensemble mean",
                     with(base_defaults(),
                          {{"experiment", "distance-scan"},
                           {"N_grid", json::array({4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16})},
                           {"chi", 2},
                           {"samples", 500}})});
        c.push_back({"lipschitz-probe",
                     "empirical |f(U1)-f(U2)|/||U1-U2||_2 ratios against the analytic bound",
                     with(base_defaults(), {{"experiment", "lipschitz-probe"},
                                            {"N_grid", json::array({8})},
                                            {"chi", 4},
                                            {"pairs", 200}})});
        c.push_back({"concentration-tail",
                     "empirical tail fractions Pr[|f-fbar| >= eps] and the fitted exponent",
                     with(base_defaults(),
                          {{"experiment", "concentration-tail"},
                           {"N_grid", json::array({3, 4, 5, 6})},
                           {"chi_rule", "poly"},
                           {"chi_power", 2.5},
                           {"samples", 2000},
                           {"epsilon_grid",
                            json::array({0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4})}})});
        c.push_back({"weingarten-check",
                     "exact Weingarten averages against Monte Carlo (N=2, D=2, chi=2)",
                     with(base_defaults(), {{"experiment", "weingarten-check"},
                                            {"N_grid", json::array({2})},
                                            {"chi", 2},
                                            {"samples", 100000}})});
        return c;
    }();
    return catalog;
}

nlohmann::json list_experiments_json() {
    json out = json::array();
    for (const ExperimentInfo& e : experiment_catalog()) {
        out.push_back(json{{"name", e.name}, {"description", e.description},
                           {"defaults", e.defaults}});
    }
    return json{{"experiments", out}};
}

namespace {

[[noreturn]] void bad_key(const std::string& key, const json& value, const std::string& why) {
    throw ConfigError(key + ": " + why + " (got " + value.dump() + ")");
}

int require_int(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer()) bad_key(key, v, "expected an integer");
    return v.get<int>();
}

long require_long(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer()) bad_key(key, v, "expected an integer");
    return v.get<long>();
}

uint64_t require_u64(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer()) bad_key(key, v, "expected an integer");
    if (v.is_number_integer() && v.get<long long>() < 0) bad_key(key, v, "expected >= 0");
    return v.get<uint64_t>();
}

double require_real(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number()) bad_key(key, v, "expected a number");
    return v.get<double>();
}

}  // namespace

ParsedConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("config: expected a flat JSON object");
    }
    static const std::vector<std::string> known = {
        "experiment", "D", "L", "boundary_kind", "homogeneous", "N_grid",
        "chi_rule", "chi", "chi_power", "samples", "master_seed", "observable",
        "epsilon_grid", "sample_grid", "bins", "pairs", "perturbation_scales", "workers"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ConfigError(it.key() + ": unknown config key");
        }
    }
    // Start from defaults so documents may omit keys they do not use.
    json merged = base_defaults();
    merged["experiment"] = "";
    for (auto it = doc.begin(); it != doc.end(); ++it) merged[it.key()] = it.value();

    ParsedConfig out;
    out.experiment = merged.at("experiment").is_string() ? merged["experiment"].get<std::string>()
                                                         : "";
    CampaignConfig& c = out.campaign;
    c.phys_dim = require_int(merged, "D");
    c.window_len = require_int(merged, "L");
    const json& bk = merged.at("boundary_kind");
    if (!bk.is_string() || (bk != "obc" && bk != "pbc")) {
        bad_key("boundary_kind", bk, "expected \"obc\" or \"pbc\"");
    }
    c.boundary = bk == "obc" ? BoundaryKind::Open : BoundaryKind::Periodic;
    if (!merged.at("homogeneous").is_boolean()) {
        bad_key("homogeneous", merged["homogeneous"], "expected a boolean");
    }
    c.homogeneous = merged["homogeneous"].get<bool>();
    if (!merged.at("N_grid").is_array() || merged["N_grid"].empty()) {
        bad_key("N_grid", merged["N_grid"], "expected a nonempty array of integers");
    }
    for (const json& v : merged["N_grid"]) {
        if (!v.is_number_integer()) bad_key("N_grid", v, "expected integers");
        c.n_grid.push_back(v.get<int>());
    }
    const json& rule = merged.at("chi_rule");
    if (rule == "fixed") {
        c.chi_rule.kind = ChiRule::Kind::Fixed;
        c.chi_rule.fixed_chi = require_int(merged, "chi");
    } else if (rule == "linear") {
        c.chi_rule.kind = ChiRule::Kind::LinearBath;
    } else if (rule == "poly") {
        c.chi_rule.kind = ChiRule::Kind::Poly;
        c.chi_rule.power = require_real(merged, "chi_power");
    } else {
        bad_key("chi_rule", rule, "expected \"fixed\", \"linear\", or \"poly\"");
    }
    c.samples = require_long(merged, "samples");
    c.master_seed = require_u64(merged, "master_seed");
    if (!merged.at("observable").is_string()) {
        bad_key("observable", merged["observable"], "expected a string");
    }
    c.observable = merged["observable"].get<std::string>();
    for (const json& v : merged.at("epsilon_grid")) {
        if (!v.is_number()) bad_key("epsilon_grid", v, "expected numbers");
        c.epsilon_grid.push_back(v.get<double>());
    }
    for (const json& v : merged.at("sample_grid")) {
        if (!v.is_number_integer()) bad_key("sample_grid", v, "expected integers");
        c.sample_grid.push_back(v.get<long>());
    }
    c.bins = require_int(merged, "bins");
    c.pairs = require_int(merged, "pairs");
    c.perturbation_scales.clear();
    for (const json& v : merged.at("perturbation_scales")) {
        if (!v.is_number()) bad_key("perturbation_scales", v, "expected numbers");
        c.perturbation_scales.push_back(v.get<double>());
    }
    c.workers = require_int(merged, "workers");
    c.validate();
    out.canonical = merged;
    return out;
}

nlohmann::json apply_override(const nlohmann::json& doc, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set: expected KEY=VALUE, got '" + assignment + "'");
    }
    std::string key = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value;  // bare strings, e.g. observable=sigma_x
    }
    json out = doc;
    out[key] = parsed;
    return out;
}

uint64_t fnv1a64(const std::string& text) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : out_(path, std::ios::binary) {
        if (!out_) {
            throw Error("cannot open output file " + path.string());
        }
        for (size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ << ',';
            out_ << columns[i];
        }
        out_ << '\n';
    }
    void row(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

struct ExperimentOutput {
    json summary = json::object();
    std::vector<double> grid_seconds;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentOutput run_variance_scan(const CampaignConfig& config,
                                   const std::filesystem::path& csv_path) {
    ExperimentOutput out;
    // Grid points are timed individually by running them as single-point
    // configs would change the seed streams; instead time the deltas.
    auto t0 = std::chrono::steady_clock::now();
    std::vector<EnsembleRecord> records = variance_scan(config);
    out.grid_seconds.assign(records.size(), seconds_since(t0) / std::max<size_t>(1, records.size()));
    CsvWriter csv(csv_path, {"N", "chi", "samples", "f_mean", "f_var", "f_stderr"});
    for (const EnsembleRecord& r : records) {
        csv.row({std::to_string(r.num_sites), std::to_string(r.chi), std::to_string(r.samples),
                 fmt17(r.f_mean), fmt17(r.f_variance), fmt17(r.f_stderr)});
    }
    out.summary["grid_points"] = records.size();
    return out;
}

ExperimentOutput run_distance_scan(const CampaignConfig& config,
                                   const std::filesystem::path& csv_path) {
    ExperimentOutput out;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<EnsembleRecord> records = distance_scan(config);
    out.grid_seconds.assign(records.size(), seconds_since(t0) / std::max<size_t>(1, records.size()));
    CsvWriter csv(csv_path, {"N", "chi", "samples", "d1_mean", "d1_stderr"});
    for (const EnsembleRecord& r : records) {
        csv.row({std::to_string(r.num_sites), std::to_string(r.chi), std::to_string(r.samples),
                 fmt17(r.d1_mean), fmt17(r.d1_stderr)});
    }
    out.summary["grid_points"] = records.size();
    return out;
}

ExperimentOutput run_average_state_distance(const CampaignConfig& config,
                                            const std::filesystem::path& csv_path) {
    ExperimentOutput out;
    if (config.sample_grid.empty()) {
        throw ConfigError("sample_grid: must be nonempty for average-state-distance");
    }
    const int n = config.n_grid.front();
    const int chi = config.chi_rule.chi_for(n, config.window_len);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<DistanceCurvePoint> curve = average_state_distance_curve(
        n, config.phys_dim, chi, config.sample_grid, config.master_seed);
    out.grid_seconds.push_back(seconds_since(t0));
    CsvWriter csv(csv_path, {"ensemble", "checkpoint", "distance", "stderr"});
    for (const DistanceCurvePoint& p : curve) {
        csv.row({"rmps", std::to_string(p.checkpoint), fmt17(p.rmps_distance),
                 fmt17(p.rmps_stderr)});
    }
    for (const DistanceCurvePoint& p : curve) {
        csv.row({"haar", std::to_string(p.checkpoint), fmt17(p.haar_distance),
                 fmt17(p.haar_stderr)});
    }
    return out;
}

ExperimentOutput run_eigen_histogram(const CampaignConfig& config,
                                     const std::filesystem::path& csv_path) {
    ExperimentOutput out;
    const int n = config.n_grid.front();
    const int chi = config.chi_rule.chi_for(n, config.window_len);
    auto t0 = std::chrono::steady_clock::now();
    HistogramResult hist =
        eigenvalue_histogram(n, config.phys_dim, chi, config.window_len, config.samples,
                             config.bins, config.master_seed, config.workers);
    out.grid_seconds.push_back(seconds_since(t0));
    CsvWriter csv(csv_path, {"ensemble", "bin_low", "bin_high", "fraction"});
    for (int b = 0; b < hist.bins; ++b) {
        csv.row({"rmps", fmt17(static_cast<double>(b) / hist.bins),
                 fmt17(static_cast<double>(b + 1) / hist.bins),
                 fmt17(hist.rmps_fraction[static_cast<size_t>(b)])});
    }
    for (int b = 0; b < hist.bins; ++b) {
        csv.row({"haar", fmt17(static_cast<double>(b) / hist.bins),
                 fmt17(static_cast<double>(b + 1) / hist.bins),
                 fmt17(hist.haar_fraction[static_cast<size_t>(b)])});
    }
    out.summary["ks_statistic"] = hist.ks_statistic;
    out.summary["ks_critical_1pct"] = hist.ks_critical_1pct;
    return out;
}

ExperimentOutput run_lipschitz_probe(const CampaignConfig& config,
                                     const std::filesystem::path& csv_path) {
    ExperimentOutput out;
    const int n = config.n_grid.front();
    const int chi = config.chi_rule.chi_for(n, config.window_len);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<LipschitzProbeResult> results =
        lipschitz_probe(n, config.phys_dim, chi, config.window_len, config.observable,
                        config.pairs, config.perturbation_scales, config.master_seed,
                        config.workers);
    out.grid_seconds.push_back(seconds_since(t0));
    CsvWriter csv(csv_path, {"scale", "pairs", "skipped", "max_ratio", "mean_ratio", "bound"});
    double worst = 0.0;
    for (const LipschitzProbeResult& r : results) {
        worst = std::max(worst, r.max_ratio);
        csv.row({fmt17(r.scale), std::to_string(r.pairs), std::to_string(r.skipped),
                 fmt17(r.max_ratio), fmt17(r.mean_ratio), fmt17(r.bound)});
    }
    if (!results.empty()) {
        out.summary["bound"] = results.front().bound;
        out.summary["max_ratio"] = worst;
        out.summary["slack_factor"] = results.front().bound / std::max(worst, 1e-300);
    }
    return out;
}

ExperimentOutput run_concentration_tail(const CampaignConfig& config,
                                        const std::filesystem::path& csv_path) {
    ExperimentOutput out;
    auto t0 = std::chrono::steady_clock::now();
    TailScan scan = concentration_tail(config);
    out.grid_seconds.assign(scan.records.size(),
                            seconds_since(t0) / std::max<size_t>(1, scan.records.size()));
    CsvWriter csv(csv_path, {"N", "chi", "samples", "epsilon", "tail_count", "tail_fraction"});
    for (const EnsembleRecord& r : scan.records) {
        for (size_t e = 0; e < config.epsilon_grid.size(); ++e) {
            csv.row({std::to_string(r.num_sites), std::to_string(r.chi),
                     std::to_string(r.samples), fmt17(config.epsilon_grid[e]),
                     std::to_string(r.tail_counts[e]),
                     fmt17(static_cast<double>(r.tail_counts[e]) /
                           static_cast<double>(r.samples))});
        }
    }
    out.summary["c1"] = scan.fit.c1;
    out.summary["c2"] = scan.fit.c2;
    out.summary["c2_lcb95"] = scan.fit.c2_lcb95;
    out.summary["points_used"] = scan.fit.points_used;
    out.summary["concentrating"] = scan.fit.concentrating;
    return out;
}

ExperimentOutput run_weingarten_check(const CampaignConfig& config,
                                      const std::filesystem::path& csv_path) {
    ExperimentOutput out;
    auto t0 = std::chrono::steady_clock::now();
    const int n = config.n_grid.front();
    const int chi = config.chi_rule.chi_for(n, config.window_len);
    const int d = config.phys_dim;

    CsvWriter csv(csv_path, {"name", "value", "reference", "delta", "tolerance", "pass"});
    auto emit = [&](const std::string& name, double value, double reference, double tol) {
        double delta = std::abs(value - reference);
        csv.row({name, fmt17(value), fmt17(reference), fmt17(delta), fmt17(tol),
                 delta <= tol ? "1" : "0"});
        out.summary[name] = json{{"value", value}, {"reference", reference}, {"pass", delta <= tol}};
        return delta <= tol;
    };

    WeingartenTable wg2 = weingarten_function(2, 2);
    emit("wg_s2_identity", wg2.value(std::vector<int>{1, 1}), 1.0 / 3.0, 1e-12);
    emit("wg_s2_swap", wg2.value(std::vector<int>{2}), -1.0 / 6.0, 1e-12);
    emit("e_abs_u11_pow4_exact",
         haar_moment(2, {0, 0, 0, 0}, {0, 0, 0, 0}).real(), 1.0 / 3.0, 1e-12);

    // Monte-Carlo fourth moment of |U_11| at d = 2.
    {
        const long mc_n = config.samples;
        double sum = 0.0, sum2 = 0.0;
        for (long s = 0; s < mc_n; ++s) {
            RngStream rng(config.master_seed, (7ULL << 56) | static_cast<uint64_t>(s));
            CMatrix u = haar_unitary(2, rng);
            double v = std::norm(u(0, 0));
            v *= v;
            sum += v;
            sum2 += v * v;
        }
        double mean = sum / mc_n;
        double se = std::sqrt(std::max(0.0, sum2 / mc_n - mean * mean) / mc_n);
        emit("e_abs_u11_pow4_mc", mean, 1.0 / 3.0, 3.0 * se);
    }

    // Exact average state vs Monte Carlo.
    CVector e1 = CVector::Zero(chi);
    e1[0] = 1.0;
    AverageStateExact exact = average_state_exact(n, d, chi, e1, e1);
    AverageStateMc mc = average_state_mc(n, d, chi, config.boundary, config.samples,
                                         config.master_seed, 0, config.workers);
    CMatrix exact_normalized = exact.rho / exact.trace;
    {
        CMatrix ratio = mc.ratio_estimate();
        double max_z = 0.0;
        for (Eigen::Index i = 0; i < ratio.rows(); ++i) {
            for (Eigen::Index j = 0; j < ratio.cols(); ++j) {
                double se = std::max(mc.stderr_ratio(i, j), 1e-30);
                max_z = std::max(max_z, std::abs(ratio(i, j) - exact_normalized(i, j)) / se);
            }
        }
        emit("exact_vs_mc_ratio_max_z", max_z, 0.0, 3.0);
    }
    {
        RMatrix sys = mc.normalization_systematic();
        double max_excess = 0.0;
        for (Eigen::Index i = 0; i < sys.rows(); ++i) {
            for (Eigen::Index j = 0; j < sys.cols(); ++j) {
                double se = std::max(mc.stderr_normalized(i, j), 1e-30);
                double dev = std::abs(mc.mean_normalized(i, j) - exact_normalized(i, j));
                max_excess = std::max(max_excess, (dev - sys(i, j)) / se);
            }
        }
        emit("exact_vs_mc_normalized_max_excess_z", max_excess, 0.0, 3.0);
    }
    emit("exact_trace_vs_mc_mean_norm_sq", mc.mean_norm_sq, exact.trace,
         3.0 * mc.stddev_norm_sq / std::sqrt(static_cast<double>(mc.samples)));

    out.grid_seconds.push_back(seconds_since(t0));
    return out;
}

}  // namespace

int run_experiment(const RunOptions& options) {
    try {
        if (options.config_path.empty()) {
            throw ConfigError("--config: a config file is required");
        }
        std::ifstream in(options.config_path);
        if (!in) {
            throw ConfigError("--config: cannot read " + options.config_path);
        }
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("config: invalid JSON: " + std::string(e.what()));
        }
        for (const std::string& assignment : options.overrides) {
            doc = apply_override(doc, assignment);
        }
        if (!options.experiment.empty()) doc["experiment"] = options.experiment;
        if (options.seed.has_value()) doc["master_seed"] = *options.seed;
        if (options.workers.has_value()) doc["workers"] = *options.workers;

        std::string experiment;
        if (doc.contains("experiment") && doc["experiment"].is_string()) {
            experiment = doc["experiment"].get<std::string>();
        }
        if (experiment.empty()) {
            throw ConfigError("experiment: missing (set in the config or via --experiment)");
        }
        const std::vector<ExperimentInfo>& catalog = experiment_catalog();
        auto found = std::find_if(catalog.begin(), catalog.end(), [&](const ExperimentInfo& e) {
            return e.name == experiment;
        });
        if (found == catalog.end()) {
            throw ConfigError("experiment: unknown name '" + experiment + "'");
        }
        // Keys the document does not set fall back to the experiment's own
        // defaults, so a minimal config runs the catalog configuration.
        json effective = found->defaults;
        for (auto it = doc.begin(); it != doc.end(); ++it) effective[it.key()] = it.value();

        ParsedConfig parsed = parse_config(effective);

        std::filesystem::path out_dir = options.out_dir.empty() ? "." : options.out_dir;
        std::filesystem::create_directories(out_dir);
        std::filesystem::path csv_path = out_dir / (parsed.experiment + ".csv");

        ExperimentOutput result;
        if (parsed.experiment == "variance-scan") {
            result = run_variance_scan(parsed.campaign, csv_path);
        } else if (parsed.experiment == "distance-scan") {
            result = run_distance_scan(parsed.campaign, csv_path);
        } else if (parsed.experiment == "average-state-distance") {
            result = run_average_state_distance(parsed.campaign, csv_path);
        } else if (parsed.experiment == "eigen-histogram") {
            result = run_eigen_histogram(parsed.campaign, csv_path);
        } else if (parsed.experiment == "lipschitz-probe") {
            result = run_lipschitz_probe(parsed.campaign, csv_path);
        } else if (parsed.experiment == "concentration-tail") {
            result = run_concentration_tail(parsed.campaign, csv_path);
        } else {
            result = run_weingarten_check(parsed.campaign, csv_path);
        }

        json manifest;
        manifest["tool_version"] = kToolVersion;
        manifest["experiment"] = parsed.experiment;
        char hash_buf[20];
        std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                      static_cast<unsigned long long>(fnv1a64(parsed.canonical.dump())));
        manifest["config_hash"] = std::string("fnv1a64:") + hash_buf;
        manifest["master_seed"] = parsed.campaign.master_seed;
        manifest["artifacts"] = json::array({csv_path.string()});
        manifest["wall_clock_seconds_per_grid_point"] = result.grid_seconds;
        manifest["interrupted"] = interrupt_flag().load();
        manifest["summary"] = result.summary;
        std::ofstream mf(out_dir / "manifest.json", std::ios::binary);
        mf << manifest.dump(2) << '\n';

        return interrupt_flag().load() ? 130 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace rmps
