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

#include <cstdint>
#include <map>
#include <vector>

#include "rmps/linalg.hpp"
#include "rmps/mps.hpp"

namespace rmps {

/// Permutation of {0, ..., n-1}; images[i] = sigma(i).
struct Permutation {
    std::vector<int> images;

    static Permutation identity(int n);
    int size() const { return static_cast<int>(images.size()); }
    int operator()(int i) const { return images[static_cast<size_t>(i)]; }

    /// (p.compose(q))(k) = p(q(k)).
    Permutation compose(const Permutation& q) const;
    Permutation inverse() const;
    int cycle_count() const;
    /// Cycle lengths sorted descending (the conjugacy class label).
    std::vector<int> cycle_type() const;
};

std::vector<Permutation> all_permutations(int n);

/// Weingarten function values Wg(sigma, d) for S_N, the (pseudo)inverse of the
/// Gram matrix G(sigma, tau) = d^{#cycles(sigma^-1 tau)}. Values depend only
/// on cycle type. pseudo_inverse_used is set when d < N (the Gram matrix is
/// then singular and the Moore-Penrose convention applies).
class WeingartenTable {
  public:
    WeingartenTable(int order, int dim, std::map<std::vector<int>, double> values,
                    bool pseudo, double gram_residual);

    int order() const { return order_; }
    int dim() const { return dim_; }
    bool pseudo_inverse_used() const { return pseudo_; }
    /// max |G W - I| (projector residual on the support when pseudo-inverted).
    double gram_residual() const { return gram_residual_; }

    double value(const Permutation& p) const;
    double value(const std::vector<int>& cycle_type) const;

  private:
    int order_;
    int dim_;
    std::map<std::vector<int>, double> values_;
    bool pseudo_;
    double gram_residual_;
};

constexpr int kMaxWeingartenOrder = 6;

/// Builds the table by numerically (pseudo)inverting the N! x N! Gram matrix.
/// Throws OrderTooLargeError for order > 6.
WeingartenTable weingarten_function(int order, int dim);

/// Exact Haar moment
///   E[U_{a1 b1} ... U_{aN bN} conj(U_{c1 e1}) ... conj(U_{cN eN})]
/// with rows = (a1..aN, c1..cN) and cols = (b1..bN, e1..eN):
///   sum_{sigma,tau} [a = c o sigma][b = e o tau] Wg(tau sigma^-1, d).
Complex haar_moment(int dim, const std::vector<int>& rows, const std::vector<int>& cols);

/// Exact ensemble average of the unnormalized projector |psi><psi| over the
/// homogeneous OBC construction, computed per (sigma, tau) by contracting the
/// boundary/physical delta networks of
/// <phiF|A^{i_N}...A^{i_1}|phiI> * conj(<phiF|A^{j_N}...A^{j_1}|phiI>).
/// rho is Hermitian PSD; trace = E<psi|psi> is reported for renormalization.
struct AverageStateExact {
    CMatrix rho;
    double trace;
};
AverageStateExact average_state_exact(int num_sites, int phys_dim, int bond_dim,
                                      const CVector& phi_initial, const CVector& phi_final);

/// Monte-Carlo ensemble average over sampled RMPS. mean_normalized is the
/// streaming mean of normalized projectors (with entrywise standard errors);
/// the unnormalized mean, norm^2 statistics, and the covariance-based
/// normalization systematic support the comparison against the exact average,
/// whose Weingarten form averages unnormalized projectors.
struct AverageStateMc {
    CMatrix mean_normalized;
    RMatrix stderr_normalized;      // entrywise SE: sqrt((E|X|^2 - |EX|^2)/n)
    CMatrix mean_unnormalized;      // = estimate of average_state_exact output
    double mean_norm_sq = 0.0;      // empirical E<psi|psi>
    double stddev_norm_sq = 0.0;
    CMatrix cov_norm_sq;            // entrywise Cov(<psi|psi>, rho_hat_ij)
    RMatrix stderr_ratio;           // delta-method SE of mean_unnormalized/mean_norm_sq
    long samples = 0;

    /// Ratio estimator of exact/trace (unbiased to O(1/n)).
    CMatrix ratio_estimate() const { return mean_unnormalized / mean_norm_sq; }
    /// |Cov(t, rho_hat)| / mean t: the normalization systematic of
    /// mean_normalized relative to the renormalized exact average.
    RMatrix normalization_systematic() const {
        return cov_norm_sq.cwiseAbs() / mean_norm_sq;
    }
};
AverageStateMc average_state_mc(int num_sites, int phys_dim, int bond_dim,
                                BoundaryKind boundary, long samples, uint64_t master_seed,
                                uint64_t stream_base, int workers);

}  // namespace rmps
