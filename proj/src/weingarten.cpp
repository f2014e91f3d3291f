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

#include "rmps/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmps/parallel.hpp"

namespace rmps {

Permutation Permutation::identity(int n) {
    Permutation p;
    p.images.resize(static_cast<size_t>(n));
    std::iota(p.images.begin(), p.images.end(), 0);
    return p;
}

Permutation Permutation::compose(const Permutation& q) const {
    Permutation r;
    r.images.resize(images.size());
    for (size_t k = 0; k < images.size(); ++k) {
        r.images[k] = images[static_cast<size_t>(q.images[k])];
    }
    return r;
}

Permutation Permutation::inverse() const {
    Permutation r;
    r.images.resize(images.size());
    for (size_t k = 0; k < images.size(); ++k) {
        r.images[static_cast<size_t>(images[k])] = static_cast<int>(k);
    }
    return r;
}

int Permutation::cycle_count() const {
    std::vector<bool> seen(images.size(), false);
    int count = 0;
    for (size_t i = 0; i < images.size(); ++i) {
        if (seen[i]) continue;
        ++count;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<size_t>(images[j]);
        }
    }
    return count;
}

std::vector<int> Permutation::cycle_type() const {
    std::vector<bool> seen(images.size(), false);
    std::vector<int> lengths;
    for (size_t i = 0; i < images.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = static_cast<size_t>(images[j]);
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.rbegin(), lengths.rend());
    return lengths;
}

std::vector<Permutation> all_permutations(int n) {
    std::vector<int> base(static_cast<size_t>(n));
    std::iota(base.begin(), base.end(), 0);
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation{base});
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

WeingartenTable::WeingartenTable(int order, int dim, std::map<std::vector<int>, double> values,
                                 bool pseudo, double gram_residual)
    : order_(order), dim_(dim), values_(std::move(values)), pseudo_(pseudo),
      gram_residual_(gram_residual) {}

double WeingartenTable::value(const Permutation& p) const { return value(p.cycle_type()); }

double WeingartenTable::value(const std::vector<int>& cycle_type) const {
    auto it = values_.find(cycle_type);
    if (it == values_.end()) {
        throw DimensionMismatchError("WeingartenTable: cycle type of wrong order");
    }
    return it->second;
}

WeingartenTable weingarten_function(int order, int dim) {
    if (order < 1 || order > kMaxWeingartenOrder) {
        throw OrderTooLargeError("weingarten_function: order must be in [1, " +
                                 std::to_string(kMaxWeingartenOrder) + "]");
    }
    if (dim < 1) {
        throw DimensionMismatchError("weingarten_function: dim must be >= 1");
    }
    const std::vector<Permutation> perms = all_permutations(order);
    const int n = static_cast<int>(perms.size());
    RMatrix gram(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int cycles = perms[static_cast<size_t>(i)]
                             .inverse()
                             .compose(perms[static_cast<size_t>(j)])
                             .cycle_count();
            gram(i, j) = std::pow(static_cast<double>(dim), cycles);
        }
    }
    const bool pseudo = dim < order;
    RMatrix winv;
    if (pseudo) {
        winv = gram.completeOrthogonalDecomposition().pseudoInverse();
    } else {
        winv = gram.inverse();
    }
    // Residual: G W == I exactly when invertible; a projector onto the support
    // otherwise, in which case G W G == G is the defining check.
    double residual;
    if (pseudo) {
        residual = (gram * winv * gram - gram).cwiseAbs().maxCoeff() /
                   gram.cwiseAbs().maxCoeff();
    } else {
        residual = (gram * winv - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    }
    // Wg(sigma) = W[id, sigma]; collapse onto cycle types (class function).
    std::map<std::vector<int>, double> values;
    for (int j = 0; j < n; ++j) {
        values[perms[static_cast<size_t>(j)].cycle_type()] = winv(0, j);
    }
    return WeingartenTable(order, dim, std::move(values), pseudo, residual);
}

Complex haar_moment(int dim, const std::vector<int>& rows, const std::vector<int>& cols) {
    if (rows.size() != cols.size() || rows.size() % 2 != 0 || rows.empty()) {
        throw DimensionMismatchError("haar_moment: rows/cols must be equal-length 2N-tuples");
    }
    const int order = static_cast<int>(rows.size()) / 2;
    if (order > kMaxWeingartenOrder) {
        throw OrderTooLargeError("haar_moment: order exceeds " +
                                 std::to_string(kMaxWeingartenOrder));
    }
    for (int v : rows) {
        if (v < 0 || v >= dim) throw DimensionMismatchError("haar_moment: row index out of range");
    }
    for (int v : cols) {
        if (v < 0 || v >= dim) throw DimensionMismatchError("haar_moment: col index out of range");
    }
    WeingartenTable wg = weingarten_function(order, dim);
    std::vector<Permutation> perms = all_permutations(order);
    const int* a = rows.data();
    const int* c = rows.data() + order;
    const int* b = cols.data();
    const int* e = cols.data() + order;
    double total = 0.0;
    for (const Permutation& sigma : perms) {
        bool rows_match = true;
        for (int k = 0; k < order; ++k) {
            if (a[k] != c[sigma(k)]) {
                rows_match = false;
                break;
            }
        }
        if (!rows_match) continue;
        for (const Permutation& tau : perms) {
            bool cols_match = true;
            for (int k = 0; k < order; ++k) {
                if (b[k] != e[tau(k)]) {
                    cols_match = false;
                    break;
                }
            }
            if (!cols_match) continue;
            total += wg.value(tau.compose(sigma.inverse()));
        }
    }
    return {total, 0.0};
}

namespace {

// Union-find over the 2(N+1) ancilla path variables of one (sigma, tau) term.
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int x, int y) {
        int rx = find(x), ry = find(y);
        if (rx != ry) parent[static_cast<size_t>(rx)] = ry;
    }
};

}  // namespace

AverageStateExact average_state_exact(int num_sites, int phys_dim, int bond_dim,
                                      const CVector& phi_initial, const CVector& phi_final) {
    if (num_sites < 1 || num_sites > 4) {
        throw OrderTooLargeError("average_state_exact: N must be in [1, 4]");
    }
    long dn = 1;
    for (int k = 0; k < num_sites; ++k) dn *= phys_dim;
    if (dn > 256) {
        throw OrderTooLargeError("average_state_exact: D^N exceeds dense cap 256");
    }
    if (phi_initial.size() != bond_dim || phi_final.size() != bond_dim) {
        throw DimensionMismatchError("average_state_exact: boundary vector size != chi");
    }

    const int n = num_sites;
    const int chi = bond_dim;
    WeingartenTable wg = weingarten_function(n, chi * phys_dim);
    std::vector<Permutation> perms = all_permutations(n);

    CMatrix rho = CMatrix::Zero(dn, dn);
    // Ancilla variables: alpha_0..alpha_N are ids 0..N, alpha'_0..alpha'_N are
    // ids N+1..2N+1. Row constraint of site k (1-based): alpha_k = alpha'_{sigma(k)}
    // (and i_k = j_{sigma(k)}); column constraint: alpha_{k-1} = alpha'_{tau(k)-1}.
    for (const Permutation& sigma : perms) {
        for (const Permutation& tau : perms) {
            const double w = wg.value(tau.compose(sigma.inverse()));
            if (w == 0.0) continue;

            UnionFind uf(2 * (n + 1));
            for (int k = 1; k <= n; ++k) {
                uf.unite(k, (n + 1) + (sigma(k - 1) + 1));
                uf.unite(k - 1, (n + 1) + tau(k - 1));
            }
            // Boundary weights: phiI at alpha_0, conj(phiI) at alpha'_0,
            // conj(phiF) at alpha_N, phiF at alpha'_N.
            std::map<int, std::vector<const CVector*>> comp_vecs;
            std::map<int, std::vector<bool>> comp_conj;
            auto add = [&](int var, const CVector& vec, bool conj) {
                int r = uf.find(var);
                comp_vecs[r].push_back(&vec);
                comp_conj[r].push_back(conj);
            };
            add(0, phi_initial, false);
            add(n + 1, phi_initial, true);
            add(n, phi_final, true);
            add(2 * n + 1, phi_final, false);

            Complex network(1.0, 0.0);
            std::vector<bool> root_seen(static_cast<size_t>(2 * (n + 1)), false);
            for (int v = 0; v < 2 * (n + 1); ++v) {
                int r = uf.find(v);
                if (root_seen[static_cast<size_t>(r)]) continue;
                root_seen[static_cast<size_t>(r)] = true;
                auto it = comp_vecs.find(r);
                if (it == comp_vecs.end()) {
                    network *= static_cast<double>(chi);
                } else {
                    Complex s(0.0, 0.0);
                    for (int alpha = 0; alpha < chi; ++alpha) {
                        Complex term(1.0, 0.0);
                        for (size_t m = 0; m < it->second.size(); ++m) {
                            Complex x = (*it->second[m])[alpha];
                            term *= comp_conj[r][m] ? std::conj(x) : x;
                        }
                        s += term;
                    }
                    network *= s;
                }
            }
            if (network == Complex(0.0, 0.0)) continue;

            // Physical deltas: i_k = j_{sigma(k)} for every k.
            for (long j = 0; j < dn; ++j) {
                long jr = j;
                int jd[8];
                for (int k = 0; k < n; ++k) {
                    jd[k] = static_cast<int>(jr % phys_dim);
                    jr /= phys_dim;
                }
                long i = 0;
                long weight = 1;
                for (int k = 0; k < n; ++k) {
                    i += static_cast<long>(jd[sigma(k)]) * weight;
                    weight *= phys_dim;
                }
                rho(i, j) += w * network;
            }
        }
    }
    AverageStateExact out;
    out.trace = rho.trace().real();
    out.rho = std::move(rho);
    return out;
}

AverageStateMc average_state_mc(int num_sites, int phys_dim, int bond_dim,
                                BoundaryKind boundary, long samples, uint64_t master_seed,
                                uint64_t stream_base, int workers) {
    long dn = 1;
    for (int k = 0; k < num_sites; ++k) dn *= phys_dim;
    if (dn > 256) {
        throw OrderTooLargeError("average_state_mc: D^N exceeds dense cap 256");
    }
    if (samples < 1) {
        throw DimensionMismatchError("average_state_mc: samples must be >= 1");
    }

    struct Partial {
        CMatrix sum_norm, sum_raw;
        RMatrix sum_abs2_norm, sum_abs2_raw;
        CMatrix sum_raw_t;  // sum of t * P (P unnormalized) for ratio SE
        double sum_t = 0.0, sum_t2 = 0.0;
        bool used = false;
    };
    const long n_chunks = (samples + kSampleChunk - 1) / kSampleChunk;
    std::vector<Partial> partials(static_cast<size_t>(n_chunks));

    parallel_chunks(samples, workers, [&](long chunk, long begin, long end) {
        Partial p;
        p.sum_norm = CMatrix::Zero(dn, dn);
        p.sum_raw = CMatrix::Zero(dn, dn);
        p.sum_abs2_norm = RMatrix::Zero(dn, dn);
        p.sum_abs2_raw = RMatrix::Zero(dn, dn);
        p.sum_raw_t = CMatrix::Zero(dn, dn);
        for (long s = begin; s < end; ++s) {
            RngStream rng(master_seed, stream_base + static_cast<uint64_t>(s));
            Mps mps = sample_rmps(num_sites, phys_dim, bond_dim, boundary, true, rng);
            const double t = mps.norm_factor * mps.norm_factor;
            CVector psi = dense_statevector(mps);  // normalized
            CMatrix proj_norm = psi * psi.adjoint();
            CMatrix proj_raw = t * proj_norm;
            p.sum_norm += proj_norm;
            p.sum_raw += proj_raw;
            p.sum_abs2_norm += proj_norm.cwiseAbs2();
            p.sum_abs2_raw += proj_raw.cwiseAbs2();
            p.sum_raw_t += t * proj_raw;
            p.sum_t += t;
            p.sum_t2 += t * t;
        }
        p.used = true;
        partials[static_cast<size_t>(chunk)] = std::move(p);
    });

    CMatrix sum_norm = CMatrix::Zero(dn, dn), sum_raw = CMatrix::Zero(dn, dn),
            sum_raw_t = CMatrix::Zero(dn, dn);
    RMatrix sum_abs2_norm = RMatrix::Zero(dn, dn), sum_abs2_raw = RMatrix::Zero(dn, dn);
    double sum_t = 0.0, sum_t2 = 0.0;
    for (const Partial& p : partials) {
        sum_norm += p.sum_norm;
        sum_raw += p.sum_raw;
        sum_raw_t += p.sum_raw_t;
        sum_abs2_norm += p.sum_abs2_norm;
        sum_abs2_raw += p.sum_abs2_raw;
        sum_t += p.sum_t;
        sum_t2 += p.sum_t2;
    }

    const double n = static_cast<double>(samples);
    AverageStateMc out;
    out.samples = samples;
    out.mean_normalized = sum_norm / n;
    out.mean_unnormalized = sum_raw / n;
    out.mean_norm_sq = sum_t / n;
    out.stddev_norm_sq = std::sqrt(std::max(0.0, sum_t2 / n - out.mean_norm_sq * out.mean_norm_sq));
    out.stderr_normalized =
        ((sum_abs2_norm / n - out.mean_normalized.cwiseAbs2()).cwiseMax(0.0) / n).cwiseSqrt();
    // Cov(t, rho_hat_ij) = E[t * rho_hat] - E[t] E[rho_hat]; t * rho_hat = P.
    out.cov_norm_sq = out.mean_unnormalized - out.mean_norm_sq * out.mean_normalized;
    // Delta-method SE of r = mean(P)/mean(t): Var(P_ij - r_ij t) / (n tbar^2).
    CMatrix r = out.mean_unnormalized / out.mean_norm_sq;
    RMatrix cross = r.conjugate().cwiseProduct(sum_raw_t / n).real();
    RMatrix var_num = sum_abs2_raw / n - 2.0 * cross + r.cwiseAbs2() * (sum_t2 / n);
    out.stderr_ratio =
        (var_num.cwiseMax(0.0) / (n * out.mean_norm_sq * out.mean_norm_sq)).cwiseSqrt();
    return out;
}

}  // namespace rmps
