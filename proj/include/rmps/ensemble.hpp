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

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

#include "rmps/mps.hpp"
#include "rmps/stats.hpp"

namespace rmps {

/// Bond-dimension rule per grid point.
struct ChiRule {
    enum class Kind { Fixed, LinearBath, Poly };
    Kind kind = Kind::Fixed;
    int fixed_chi = 2;
    double power = 2.5;

    int chi_for(int num_sites, int window_len) const;
};

struct CampaignConfig {
    int phys_dim = 2;
    int window_len = 1;
    BoundaryKind boundary = BoundaryKind::Open;
    bool homogeneous = true;
    std::vector<int> n_grid;
    ChiRule chi_rule;
    long samples = 500;
    uint64_t master_seed = 20260810;
    std::string observable = "sigma_x";
    std::vector<double> epsilon_grid;
    std::vector<long> sample_grid;  // checkpoints for the average-state curve
    int bins = 50;
    int pairs = 200;
    std::vector<double> perturbation_scales = {1e-2, 1e-3, 1e-4};
    int workers = 0;  // 0 = all cores

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Per-grid-point results. Fields not produced by a given experiment are left
/// at their defaults.
struct EnsembleRecord {
    int num_sites = 0;
    int chi = 0;
    long samples = 0;
    double f_mean = 0.0;
    double f_variance = 0.0;
    double f_stderr = 0.0;      // SE of f_mean
    double f_var_stderr = 0.0;  // SE of f_variance
    CMatrix rho_bar;            // mean reduced state (distance scan)
    double d1_mean = 0.0;       // E ||rho_s - rho_bar_s||_1
    double d1_stderr = 0.0;
    std::vector<double> eigenvalues;  // pooled reduced-state eigenvalues
    std::vector<long> tail_counts;    // per epsilon in the config grid
};

struct ConcentrationFit {
    double c1 = 0.0;       // fitted prefactor
    double c2 = 0.0;       // fitted exponent of exp(-c2 eps^2 chi / N^2)
    double c2_lcb95 = 0.0; // bootstrap 95% lower confidence bound
    double rms_residual = 0.0;
    int points_used = 0;
    bool concentrating = false;  // c2 > 0 with positive lower bound
};

struct TailScan {
    std::vector<EnsembleRecord> records;
    ConcentrationFit fit;
};

struct LipschitzProbeResult {
    double scale = 0.0;
    int pairs = 0;
    int skipped = 0;  // degenerate pairs ||U1-U2|| < 1e-13
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    double bound = 0.0;  // 4 D^{2L+2} N ||O||_inf^L
};

struct DistanceCurvePoint {
    long checkpoint = 0;
    double rmps_distance = 0.0;
    double rmps_stderr = 0.0;
    double haar_distance = 0.0;
    double haar_stderr = 0.0;
};

struct HistogramResult {
    int bins = 0;
    long samples = 0;
    std::vector<double> rmps_fraction;  // per bin, sums to 1
    std::vector<double> haar_fraction;
    std::vector<double> rmps_eigenvalues;  // pooled samples
    std::vector<double> haar_eigenvalues;
    double ks_statistic = 0.0;
    double ks_critical_1pct = 0.0;
};

struct PauliChainReport {
    double max_abs_p = 0.0;       // max |Tr(P_x delta)/2^L|
    double frobenius = 0.0;       // ||delta||_2
    double trace_norm = 0.0;      // ||delta||_1
    double orthogonality_defect = 0.0;  // | ||delta||_2^2 - 2^L sum p_x^2 |
    bool chain_holds = false;     // ||delta||_1 <= sqrt(4^L) ||delta||_2
};

/// D x D operator template by name: identity, sigma_x, sigma_y, sigma_z
/// (Paulis require D = 2). Throws ConfigError for unknown names.
CMatrix observable_from_name(const std::string& name, int phys_dim);

/// Cooperative interrupt flag; scans stop between grid points when set and
/// return the records completed so far.
std::atomic<bool>& interrupt_flag();

/// Fig. 5: ensemble variance of f = <O_window> per grid point.
std::vector<EnsembleRecord> variance_scan(const CampaignConfig& config);

/// Fig. 6: E ||rho_s - rho_bar_s||_1 per grid point; rho_bar_s is the
/// empirical mean at the same grid point (two passes over identical streams).
std::vector<EnsembleRecord> distance_scan(const CampaignConfig& config);

/// Fig. 2: running || mean state - I/D^N ||_1 at sample checkpoints, for the
/// RMPS ensemble and for Haar pure states (independent streams, same seed).
std::vector<DistanceCurvePoint> average_state_distance_curve(int num_sites, int phys_dim,
                                                             int bond_dim,
                                                             const std::vector<long>& checkpoints,
                                                             uint64_t master_seed);

/// Figs. 3-4: pooled reduced-state eigenvalue distributions on [0, 1] for the
/// RMPS and Haar ensembles, plus their two-sample KS statistic.
HistogramResult eigenvalue_histogram(int num_sites, int phys_dim, int bond_dim, int window_len,
                                     long samples, int bins, uint64_t master_seed, int workers);

/// Empirical Lipschitz ratios |f(U1) - f(U2)| / ||U1 - U2||_2 over geodesic
/// perturbation pairs U2 = U1 exp(i s H), one result per scale. Pair pools are
/// reused across scales so the small-scale limit probes differentiability.
std::vector<LipschitzProbeResult> lipschitz_probe(int num_sites, int phys_dim, int bond_dim,
                                                  int window_len, const std::string& observable,
                                                  int pairs, const std::vector<double>& scales,
                                                  uint64_t master_seed, int workers);

/// Eq. (2) probe: empirical tail fractions Pr[|f - fbar| >= eps] per grid
/// point and the fitted tail model c1 exp(-c2 eps^2 chi / N^2).
TailScan concentration_tail(const CampaignConfig& config);

/// Appendix C chain: Pauli expansion of delta = rho - rho_bar (standard
/// convention Tr(P_x P_y) = 2^L delta_xy, p_x = Tr(P_x delta)/2^L), the
/// orthogonality identity ||delta||_2^2 = 2^L sum p_x^2, and the
/// ||delta||_1 <= sqrt(4^L) ||delta||_2 chain. Requires D = 2 inputs.
PauliChainReport pauli_norm_chain_check(const CMatrix& rho, const CMatrix& rho_bar,
                                        int window_len);

}  // namespace rmps
