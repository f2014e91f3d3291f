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

#include "rmps/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "rmps/parallel.hpp"
#include "rmps/weingarten.hpp"

namespace rmps {

namespace {

// Stream index layout: (purpose << 56) | (grid << 32) | sample.
constexpr uint64_t kPurposeRmps = 0;
constexpr uint64_t kPurposeHaar = 1;
constexpr uint64_t kPurposePairs = 2;
constexpr uint64_t kPurposeBootstrap = 3;

uint64_t stream_of(uint64_t purpose, uint64_t grid, uint64_t sample) {
    return (purpose << 56) | (grid << 32) | sample;
}

ObservableSpec centered_observable(const CampaignConfig& config, int num_sites) {
    CMatrix op = observable_from_name(config.observable, config.phys_dim);
    std::vector<CMatrix> ops(static_cast<size_t>(config.window_len), op);
    return ObservableSpec::centered(num_sites, std::move(ops));
}

// f values for one grid point, filled by sample index (deterministic for any
// worker count).
std::vector<double> sample_f_values(const CampaignConfig& config, int num_sites, int chi,
                                    uint64_t grid_index) {
    ObservableSpec obs = centered_observable(config, num_sites);
    std::vector<double> fs(static_cast<size_t>(config.samples));
    parallel_chunks(config.samples, config.workers, [&](long, long begin, long end) {
        for (long s = begin; s < end; ++s) {
            RngStream rng(config.master_seed,
                          stream_of(kPurposeRmps, grid_index, static_cast<uint64_t>(s)));
            Mps mps = sample_rmps(num_sites, config.phys_dim, chi, config.boundary,
                                  config.homogeneous, rng);
            fs[static_cast<size_t>(s)] = expectation(mps, obs).real();
        }
    });
    return fs;
}

int window_start_centered(int num_sites, int window_len) {
    return (num_sites - window_len) / 2 + 1;
}

// Reduced density matrix of a dense pure state over the window of sites
// [w0, w0+L-1] (0-based), same digit convention as the MPS code.
CMatrix dense_reduced(const CVector& psi, int num_sites, int phys_dim, int w0, int window_len) {
    long dl = 1;
    for (int m = 0; m < window_len; ++m) dl *= phys_dim;
    long denv = psi.size() / dl;
    std::vector<long> win_stride(static_cast<size_t>(window_len));
    {
        long st = 1;
        for (int k = 0; k < num_sites; ++k) {
            if (k >= w0 && k < w0 + window_len) win_stride[static_cast<size_t>(k - w0)] = st;
            st *= phys_dim;
        }
    }
    std::vector<long> env_stride;
    {
        long st = 1;
        for (int k = 0; k < num_sites; ++k) {
            if (k < w0 || k >= w0 + window_len) env_stride.push_back(st);
            st *= phys_dim;
        }
    }
    auto flat = [&](long win, long env) {
        long m = 0;
        long wr = win;
        for (int i = 0; i < window_len; ++i) {
            m += (wr % phys_dim) * win_stride[static_cast<size_t>(i)];
            wr /= phys_dim;
        }
        long er = env;
        for (long stride : env_stride) {
            m += (er % phys_dim) * stride;
            er /= phys_dim;
        }
        return m;
    };
    CMatrix rho = CMatrix::Zero(dl, dl);
    for (long e = 0; e < denv; ++e) {
        for (long a = 0; a < dl; ++a) {
            Complex pa = psi[flat(a, e)];
            for (long b = 0; b < dl; ++b) {
                rho(a, b) += pa * std::conj(psi[flat(b, e)]);
            }
        }
    }
    return rho;
}

long pow_long(int base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

int ChiRule::chi_for(int num_sites, int window_len) const {
    switch (kind) {
        case Kind::Fixed:
            return fixed_chi;
        case Kind::LinearBath:
            return num_sites - window_len;
        case Kind::Poly:
            return static_cast<int>(std::ceil(std::pow(static_cast<double>(num_sites), power)));
    }
    return fixed_chi;
}

void CampaignConfig::validate() const {
    if (phys_dim < 2) {
        throw ConfigError("phys_dim: must be >= 2, got " + std::to_string(phys_dim));
    }
    if (window_len < 1) {
        throw ConfigError("window_len: must be >= 1, got " + std::to_string(window_len));
    }
    if (n_grid.empty()) {
        throw ConfigError("n_grid: must be nonempty");
    }
    for (int n : n_grid) {
        if (n <= window_len) {
            throw ConfigError("n_grid: every grid point must satisfy N > L; got N=" +
                              std::to_string(n) + ", L=" + std::to_string(window_len));
        }
    }
    if (samples < 2) {
        throw ConfigError("samples: must be >= 2 for variance, got " + std::to_string(samples));
    }
    switch (chi_rule.kind) {
        case ChiRule::Kind::Fixed:
            if (chi_rule.fixed_chi < 1) {
                throw ConfigError("chi: must be >= 1, got " + std::to_string(chi_rule.fixed_chi));
            }
            break;
        case ChiRule::Kind::Poly:
            if (!(chi_rule.power > 0.0)) {
                throw ConfigError("chi_power: must be > 0, got " + std::to_string(chi_rule.power));
            }
            break;
        case ChiRule::Kind::LinearBath:
            break;  // N > L already guarantees chi = N - L >= 1
    }
    observable_from_name(observable, phys_dim);  // throws on unknown names
    for (size_t i = 0; i < epsilon_grid.size(); ++i) {
        if (epsilon_grid[i] < 0.0) {
            throw ConfigError("epsilon_grid: entries must be >= 0");
        }
        if (i > 0 && epsilon_grid[i] <= epsilon_grid[i - 1]) {
            throw ConfigError("epsilon_grid: entries must be strictly increasing");
        }
    }
    for (size_t i = 0; i < sample_grid.size(); ++i) {
        if (sample_grid[i] < 1 || (i > 0 && sample_grid[i] <= sample_grid[i - 1])) {
            throw ConfigError("sample_grid: checkpoints must be positive and increasing");
        }
    }
    if (bins < 2) {
        throw ConfigError("bins: must be >= 2, got " + std::to_string(bins));
    }
    if (pairs < 1) {
        throw ConfigError("pairs: must be >= 1, got " + std::to_string(pairs));
    }
    for (double s : perturbation_scales) {
        if (!(s > 0.0)) {
            throw ConfigError("perturbation_scales: entries must be > 0");
        }
    }
    if (workers < 0) {
        throw ConfigError("workers: must be >= 0, got " + std::to_string(workers));
    }
}

CMatrix observable_from_name(const std::string& name, int phys_dim) {
    if (name == "identity") {
        return CMatrix::Identity(phys_dim, phys_dim);
    }
    if (name == "sigma_x" || name == "sigma_y" || name == "sigma_z") {
        if (phys_dim != 2) {
            throw ConfigError("observable: " + name + " requires phys_dim = 2");
        }
        CMatrix m(2, 2);
        if (name == "sigma_x") {
            m << 0, 1, 1, 0;
        } else if (name == "sigma_y") {
            m << 0, Complex(0, -1), Complex(0, 1), 0;
        } else {
            m << 1, 0, 0, -1;
        }
        return m;
    }
    throw ConfigError("observable: unknown name '" + name + "'");
}

std::atomic<bool>& interrupt_flag() {
    static std::atomic<bool> flag{false};
    return flag;
}

std::vector<EnsembleRecord> variance_scan(const CampaignConfig& config) {
    config.validate();
    std::vector<EnsembleRecord> records;
    for (size_t g = 0; g < config.n_grid.size(); ++g) {
        if (interrupt_flag().load()) break;
        const int n = config.n_grid[g];
        const int chi = config.chi_rule.chi_for(n, config.window_len);
        std::vector<double> fs = sample_f_values(config, n, chi, static_cast<uint64_t>(g));
        Moments mom = compute_moments(fs);
        EnsembleRecord rec;
        rec.num_sites = n;
        rec.chi = chi;
        rec.samples = config.samples;
        rec.f_mean = mom.mean;
        rec.f_variance = mom.variance;
        rec.f_stderr = mom.stderr_mean;
        rec.f_var_stderr = mom.stderr_var;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<EnsembleRecord> distance_scan(const CampaignConfig& config) {
    config.validate();
    if (config.window_len > 3) {
        throw WindowTooLargeError("distance_scan: window_len must be <= 3");
    }
    std::vector<EnsembleRecord> records;
    const long dl = pow_long(config.phys_dim, config.window_len);
    for (size_t g = 0; g < config.n_grid.size(); ++g) {
        if (interrupt_flag().load()) break;
        const int n = config.n_grid[g];
        const int chi = config.chi_rule.chi_for(n, config.window_len);
        const int ws = window_start_centered(n, config.window_len);

        auto sample_rho = [&](long s) {
            RngStream rng(config.master_seed,
                          stream_of(kPurposeRmps, static_cast<uint64_t>(g),
                                    static_cast<uint64_t>(s)));
            Mps mps = sample_rmps(n, config.phys_dim, chi, config.boundary, config.homogeneous,
                                  rng);
            return reduced_density_matrix(mps, ws, config.window_len);
        };

        // Pass 1: empirical mean reduced state.
        const long n_chunks = (config.samples + kSampleChunk - 1) / kSampleChunk;
        std::vector<CMatrix> partial_sums(static_cast<size_t>(n_chunks));
        parallel_chunks(config.samples, config.workers, [&](long chunk, long begin, long end) {
            CMatrix sum = CMatrix::Zero(dl, dl);
            for (long s = begin; s < end; ++s) sum += sample_rho(s);
            partial_sums[static_cast<size_t>(chunk)] = std::move(sum);
        });
        CMatrix rho_bar = CMatrix::Zero(dl, dl);
        for (const CMatrix& p : partial_sums) rho_bar += p;
        rho_bar /= static_cast<double>(config.samples);

        // Pass 2: identical streams, distances to the pass-1 mean.
        std::vector<double> d1(static_cast<size_t>(config.samples));
        parallel_chunks(config.samples, config.workers, [&](long, long begin, long end) {
            for (long s = begin; s < end; ++s) {
                d1[static_cast<size_t>(s)] = hermitian_trace_norm(sample_rho(s) - rho_bar);
            }
        });
        Moments mom = compute_moments(d1);
        EnsembleRecord rec;
        rec.num_sites = n;
        rec.chi = chi;
        rec.samples = config.samples;
        rec.rho_bar = std::move(rho_bar);
        rec.d1_mean = mom.mean;
        rec.d1_stderr = mom.stderr_mean;
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<DistanceCurvePoint> average_state_distance_curve(int num_sites, int phys_dim,
                                                             int bond_dim,
                                                             const std::vector<long>& checkpoints,
                                                             uint64_t master_seed) {
    const long dim = pow_long(phys_dim, num_sites);
    if (dim > 256) {
        throw StateTooLargeError("average_state_distance_curve: D^N exceeds dense cap 256");
    }
    if (checkpoints.empty()) {
        throw ConfigError("sample_grid: must be nonempty");
    }
    const long total = checkpoints.back();
    const CMatrix mixed = CMatrix::Identity(dim, dim) / static_cast<double>(dim);

    std::vector<DistanceCurvePoint> out(checkpoints.size());
    for (size_t c = 0; c < checkpoints.size(); ++c) out[c].checkpoint = checkpoints[c];

    for (int ensemble = 0; ensemble < 2; ++ensemble) {
        const uint64_t purpose = ensemble == 0 ? kPurposeRmps : kPurposeHaar;
        auto sample_projector = [&](long s) {
            RngStream rng(master_seed, stream_of(purpose, 0, static_cast<uint64_t>(s)));
            CVector psi;
            if (ensemble == 0) {
                Mps mps = sample_rmps(num_sites, phys_dim, bond_dim, BoundaryKind::Open, true,
                                      rng);
                psi = dense_statevector(mps);
            } else {
                psi = haar_state(static_cast<int>(dim), rng);
            }
            return CMatrix(psi * psi.adjoint());
        };

        // Pass 1: running mean snapshots at the checkpoints.
        std::vector<CMatrix> means;
        {
            CMatrix sum = CMatrix::Zero(dim, dim);
            size_t next_cp = 0;
            for (long s = 0; s < total; ++s) {
                sum += sample_projector(s);
                while (next_cp < checkpoints.size() && s + 1 == checkpoints[next_cp]) {
                    means.push_back(sum / static_cast<double>(s + 1));
                    ++next_cp;
                }
            }
        }
        // Distances and delta-method sign matrices.
        std::vector<CMatrix> sign(checkpoints.size());
        for (size_t c = 0; c < checkpoints.size(); ++c) {
            CMatrix diff = means[c] - mixed;
            HermitianEig eig = hermitian_eig(diff, true, 1e-8);
            double dist = eig.values.cwiseAbs().sum();
            CMatrix s = CMatrix::Zero(dim, dim);
            for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
                double sg = eig.values[i] >= 0 ? 1.0 : -1.0;
                s += sg * (eig.vectors.col(i) * eig.vectors.col(i).adjoint());
            }
            sign[c] = std::move(s);
            if (ensemble == 0) {
                out[c].rmps_distance = dist;
            } else {
                out[c].haar_distance = dist;
            }
        }
        // Pass 2: identical streams; SE of the linearized distance
        // g_s = Re tr(S_c P_s) over the first k_c samples.
        std::vector<double> sum_g(checkpoints.size(), 0.0), sum_g2(checkpoints.size(), 0.0);
        for (long s = 0; s < total; ++s) {
            CMatrix proj = sample_projector(s);
            for (size_t c = 0; c < checkpoints.size(); ++c) {
                if (s < checkpoints[c]) {
                    double gval = (sign[c] * proj).trace().real();
                    sum_g[c] += gval;
                    sum_g2[c] += gval * gval;
                }
            }
        }
        for (size_t c = 0; c < checkpoints.size(); ++c) {
            const double k = static_cast<double>(checkpoints[c]);
            double mean_g = sum_g[c] / k;
            double var_g = std::max(0.0, sum_g2[c] / k - mean_g * mean_g);
            double se = std::sqrt(var_g / k);
            if (ensemble == 0) {
                out[c].rmps_stderr = se;
            } else {
                out[c].haar_stderr = se;
            }
        }
    }
    return out;
}

HistogramResult eigenvalue_histogram(int num_sites, int phys_dim, int bond_dim, int window_len,
                                     long samples, int bins, uint64_t master_seed, int workers) {
    if (window_len > 3) {
        throw WindowTooLargeError("eigenvalue_histogram: window_len must be <= 3");
    }
    const long dim = pow_long(phys_dim, num_sites);
    if (dim > 256) {
        throw StateTooLargeError("eigenvalue_histogram: D^N exceeds dense cap 256");
    }
    const int ws = window_start_centered(num_sites, window_len);
    const long dl = pow_long(phys_dim, window_len);
    const long n_chunks = (samples + kSampleChunk - 1) / kSampleChunk;

    HistogramResult res;
    res.bins = bins;
    res.samples = samples;

    for (int ensemble = 0; ensemble < 2; ++ensemble) {
        const uint64_t purpose = ensemble == 0 ? kPurposeRmps : kPurposeHaar;
        std::vector<std::vector<double>> chunk_eigs(static_cast<size_t>(n_chunks));
        parallel_chunks(samples, workers, [&](long chunk, long begin, long end) {
            std::vector<double>& eigs = chunk_eigs[static_cast<size_t>(chunk)];
            eigs.reserve(static_cast<size_t>((end - begin) * dl));
            for (long s = begin; s < end; ++s) {
                RngStream rng(master_seed, stream_of(purpose, 0, static_cast<uint64_t>(s)));
                CMatrix rho;
                if (ensemble == 0) {
                    Mps mps = sample_rmps(num_sites, phys_dim, bond_dim, BoundaryKind::Open,
                                          true, rng);
                    rho = reduced_density_matrix(mps, ws, window_len);
                } else {
                    CVector psi = haar_state(static_cast<int>(dim), rng);
                    rho = dense_reduced(psi, num_sites, phys_dim, ws - 1, window_len);
                }
                RVector ev = hermitian_eigenvalues(rho, 1e-8);
                for (Eigen::Index i = 0; i < ev.size(); ++i) eigs.push_back(ev[i]);
            }
        });
        std::vector<double>& pooled = ensemble == 0 ? res.rmps_eigenvalues : res.haar_eigenvalues;
        for (const auto& v : chunk_eigs) pooled.insert(pooled.end(), v.begin(), v.end());

        std::vector<double>& frac = ensemble == 0 ? res.rmps_fraction : res.haar_fraction;
        frac.assign(static_cast<size_t>(bins), 0.0);
        for (double x : pooled) {
            long b = static_cast<long>(std::floor(x * bins));
            b = std::max<long>(0, std::min<long>(bins - 1, b));
            frac[static_cast<size_t>(b)] += 1.0;
        }
        for (double& fcount : frac) fcount /= static_cast<double>(pooled.size());
    }
    res.ks_statistic = two_sample_ks(res.rmps_eigenvalues, res.haar_eigenvalues);
    res.ks_critical_1pct = ks_critical_1pct(static_cast<long>(res.rmps_eigenvalues.size()),
                                            static_cast<long>(res.haar_eigenvalues.size()));
    return res;
}

std::vector<LipschitzProbeResult> lipschitz_probe(int num_sites, int phys_dim, int bond_dim,
                                                  int window_len, const std::string& observable,
                                                  int pairs, const std::vector<double>& scales,
                                                  uint64_t master_seed, int workers) {
    if (pairs < 1) {
        throw ConfigError("pairs: must be >= 1");
    }
    for (double s : scales) {
        if (!(s > 0.0)) throw ConfigError("perturbation_scales: entries must be > 0");
    }
    CMatrix op = observable_from_name(observable, phys_dim);
    std::vector<CMatrix> window_ops(static_cast<size_t>(window_len), op);
    ObservableSpec obs = ObservableSpec::centered(num_sites, window_ops);
    double op_norm = 0.0;
    for (const CMatrix& o : window_ops) op_norm = std::max(op_norm, matrix_norm(o, NormKind::Operator));
    const double bound = 4.0 * std::pow(static_cast<double>(phys_dim), 2 * window_len + 2) *
                         num_sites * std::pow(op_norm, window_len);
    const int d = phys_dim * bond_dim;

    auto f_of = [&](const CMatrix& u) {
        Mps mps;
        mps.num_sites = num_sites;
        mps.phys_dim = phys_dim;
        mps.bond_dim = bond_dim;
        mps.boundary = BoundaryKind::Open;
        mps.homogeneous = true;
        mps.phi_initial = CVector::Zero(bond_dim);
        mps.phi_initial[0] = 1.0;
        mps.phi_final = mps.phi_initial;
        mps.tensors.push_back(extract_site_tensors(u, phys_dim, bond_dim));
        mps.normalize();
        return expectation(mps, obs).real();
    };

    struct ScaleAccum {
        double max_ratio = 0.0;
        double sum_ratio = 0.0;
        long count = 0;
        int skipped = 0;
    };
    const long n_chunks = (static_cast<long>(pairs) + kSampleChunk - 1) / kSampleChunk;
    std::vector<std::vector<ScaleAccum>> chunk_acc(
        static_cast<size_t>(n_chunks), std::vector<ScaleAccum>(scales.size()));

    parallel_chunks(pairs, workers, [&](long chunk, long begin, long end) {
        auto& acc = chunk_acc[static_cast<size_t>(chunk)];
        for (long p = begin; p < end; ++p) {
            RngStream rng(master_seed, stream_of(kPurposePairs, 0, static_cast<uint64_t>(p)));
            CMatrix u1 = haar_unitary(d, rng);
            CMatrix g(d, d);
            for (int j = 0; j < d; ++j) {
                for (int i = 0; i < d; ++i) g(i, j) = rng.complex_gaussian();
            }
            CMatrix h = 0.5 * (g + g.adjoint());
            h /= h.norm();  // ||H||_F = 1 so ||U1 - U2||_2 ~ scale
            HermitianEig eh = hermitian_eig(h);
            const double f1 = f_of(u1);
            for (size_t sc = 0; sc < scales.size(); ++sc) {
                CVector phases(eh.values.size());
                for (Eigen::Index i = 0; i < eh.values.size(); ++i) {
                    phases[i] = std::exp(Complex(0.0, scales[sc] * eh.values[i]));
                }
                CMatrix u2 = u1 * (eh.vectors * phases.asDiagonal() * eh.vectors.adjoint());
                double dist = (u1 - u2).norm();
                if (dist < 1e-13) {
                    ++acc[sc].skipped;
                    continue;
                }
                double ratio = std::abs(f1 - f_of(u2)) / dist;
                acc[sc].max_ratio = std::max(acc[sc].max_ratio, ratio);
                acc[sc].sum_ratio += ratio;
                ++acc[sc].count;
            }
        }
    });

    std::vector<LipschitzProbeResult> out(scales.size());
    for (size_t sc = 0; sc < scales.size(); ++sc) {
        ScaleAccum total;
        for (const auto& acc : chunk_acc) {
            total.max_ratio = std::max(total.max_ratio, acc[sc].max_ratio);
            total.sum_ratio += acc[sc].sum_ratio;
            total.count += acc[sc].count;
            total.skipped += acc[sc].skipped;
        }
        out[sc].scale = scales[sc];
        out[sc].pairs = pairs;
        out[sc].skipped = total.skipped;
        out[sc].max_ratio = total.max_ratio;
        out[sc].mean_ratio = total.count > 0 ? total.sum_ratio / static_cast<double>(total.count)
                                             : 0.0;
        out[sc].bound = bound;
    }
    return out;
}

namespace {

ConcentrationFit fit_tails(const std::vector<EnsembleRecord>& records,
                           const std::vector<double>& epsilon_grid, long samples) {
    std::vector<double> xs, ys;
    for (const EnsembleRecord& rec : records) {
        for (size_t e = 0; e < epsilon_grid.size(); ++e) {
            long count = rec.tail_counts[e];
            if (count < 5) continue;  // too few events for a stable log
            double x = epsilon_grid[e] * epsilon_grid[e] * rec.chi /
                       (static_cast<double>(rec.num_sites) * rec.num_sites);
            xs.push_back(x);
            ys.push_back(std::log(static_cast<double>(count) / static_cast<double>(samples)));
        }
    }
    ConcentrationFit fit;
    fit.points_used = static_cast<int>(xs.size());
    if (xs.size() < 2) {
        throw InsufficientTailError("concentration_tail: fewer than two usable tail points");
    }
    LineFit line = fit_line(xs, ys);
    fit.c1 = std::exp(line.intercept);
    fit.c2 = -line.slope;
    fit.rms_residual = line.rms_residual;
    return fit;
}

}  // namespace

TailScan concentration_tail(const CampaignConfig& config) {
    config.validate();
    if (config.epsilon_grid.empty()) {
        throw ConfigError("epsilon_grid: must be nonempty for concentration_tail");
    }
    if (config.samples < 100) {
        throw ConfigError("samples: concentration_tail needs >= 100, got " +
                          std::to_string(config.samples));
    }

    TailScan scan;
    std::vector<std::vector<double>> all_fs;
    for (size_t g = 0; g < config.n_grid.size(); ++g) {
        if (interrupt_flag().load()) break;
        const int n = config.n_grid[g];
        const int chi = config.chi_rule.chi_for(n, config.window_len);
        std::vector<double> fs = sample_f_values(config, n, chi, static_cast<uint64_t>(g));
        Moments mom = compute_moments(fs);
        EnsembleRecord rec;
        rec.num_sites = n;
        rec.chi = chi;
        rec.samples = config.samples;
        rec.f_mean = mom.mean;
        rec.f_variance = mom.variance;
        rec.f_stderr = mom.stderr_mean;
        rec.f_var_stderr = mom.stderr_var;
        rec.tail_counts.resize(config.epsilon_grid.size(), 0);
        for (double f : fs) {
            double dev = std::abs(f - mom.mean);
            for (size_t e = 0; e < config.epsilon_grid.size(); ++e) {
                if (dev >= config.epsilon_grid[e]) ++rec.tail_counts[e];
            }
        }
        scan.records.push_back(std::move(rec));
        all_fs.push_back(std::move(fs));
    }

    bool any_beyond_first = false;
    for (const EnsembleRecord& rec : scan.records) {
        for (size_t e = 1; e < rec.tail_counts.size(); ++e) {
            if (rec.tail_counts[e] > 0) any_beyond_first = true;
        }
    }
    if (!any_beyond_first) {
        throw InsufficientTailError("concentration_tail: all tail counts are 0 beyond the first epsilon");
    }

    scan.fit = fit_tails(scan.records, config.epsilon_grid, config.samples);

    // Nonparametric bootstrap over samples, 200 resamples, for the c2 lower bound.
    constexpr int kResamples = 200;
    std::vector<double> c2s;
    c2s.reserve(kResamples);
    for (int b = 0; b < kResamples; ++b) {
        std::vector<EnsembleRecord> boot_records;
        for (size_t g = 0; g < scan.records.size(); ++g) {
            const std::vector<double>& fs = all_fs[g];
            RngStream rng(config.master_seed,
                          stream_of(kPurposeBootstrap, static_cast<uint64_t>(g),
                                    static_cast<uint64_t>(b)));
            std::vector<double> resampled(fs.size());
            double sum = 0.0;
            for (size_t s = 0; s < fs.size(); ++s) {
                resampled[s] = fs[rng.next_u64() % fs.size()];
                sum += resampled[s];
            }
            double mean = sum / static_cast<double>(fs.size());
            EnsembleRecord rec;
            rec.num_sites = scan.records[g].num_sites;
            rec.chi = scan.records[g].chi;
            rec.samples = config.samples;
            rec.tail_counts.resize(config.epsilon_grid.size(), 0);
            for (double f : resampled) {
                double dev = std::abs(f - mean);
                for (size_t e = 0; e < config.epsilon_grid.size(); ++e) {
                    if (dev >= config.epsilon_grid[e]) ++rec.tail_counts[e];
                }
            }
            boot_records.push_back(std::move(rec));
        }
        try {
            c2s.push_back(fit_tails(boot_records, config.epsilon_grid, config.samples).c2);
        } catch (const InsufficientTailError&) {
            c2s.push_back(0.0);  // conservative: counts as non-concentrating
        }
    }
    std::sort(c2s.begin(), c2s.end());
    scan.fit.c2_lcb95 = c2s[static_cast<size_t>(0.05 * kResamples)];
    scan.fit.concentrating = scan.fit.c2 > 0.0 && scan.fit.c2_lcb95 > 0.0;
    return scan;
}

PauliChainReport pauli_norm_chain_check(const CMatrix& rho, const CMatrix& rho_bar,
                                        int window_len) {
    const long dim = pow_long(2, window_len);
    auto check_density = [&](const CMatrix& m, const char* which) {
        if (m.rows() != dim || m.cols() != dim) {
            throw NotDensityMatrixError(std::string(which) + ": expected a 2^L x 2^L matrix");
        }
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
            throw NotDensityMatrixError(std::string(which) + ": not Hermitian");
        }
        if (std::abs(m.trace().real() - 1.0) > 1e-8) {
            throw NotDensityMatrixError(std::string(which) + ": trace != 1");
        }
        RVector ev = hermitian_eigenvalues(m, 1e-8);
        if (ev.minCoeff() < -1e-8) {
            throw NotDensityMatrixError(std::string(which) + ": negative eigenvalue");
        }
    };
    check_density(rho, "rho");
    check_density(rho_bar, "rho_bar");

    CMatrix delta = rho - rho_bar;
    CMatrix paulis[4];
    paulis[0] = CMatrix::Identity(2, 2);
    paulis[1] = observable_from_name("sigma_x", 2);
    paulis[2] = observable_from_name("sigma_y", 2);
    paulis[3] = observable_from_name("sigma_z", 2);

    const double dl = static_cast<double>(dim);
    PauliChainReport rep;
    double sum_p2 = 0.0;
    long n_strings = 1;
    for (int m = 0; m < window_len; ++m) n_strings *= 4;
    for (long x = 0; x < n_strings; ++x) {
        CMatrix p = CMatrix::Identity(1, 1);
        long xr = x;
        for (int m = 0; m < window_len; ++m) {
            p = kron(paulis[xr % 4], p);  // window digit m varies fastest
            xr /= 4;
        }
        double px = (p * delta).trace().real() / dl;
        rep.max_abs_p = std::max(rep.max_abs_p, std::abs(px));
        sum_p2 += px * px;
    }
    rep.frobenius = delta.norm();
    rep.trace_norm = hermitian_trace_norm(delta);
    rep.orthogonality_defect = std::abs(rep.frobenius * rep.frobenius - dl * sum_p2);
    rep.chain_holds = rep.trace_norm <= dl * rep.frobenius + 1e-10;
    return rep;
}

}  // namespace rmps
