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

#include <vector>

#include "rmps/haar.hpp"
#include "rmps/linalg.hpp"
#include "rmps/rng.hpp"

namespace rmps {

enum class BoundaryKind { Open, Periodic };

/// Matrix product state. OBC amplitudes are <phiF| A^{i_N} ... A^{i_1} |phiI>
/// (site 1 applied first); PBC amplitudes are Tr[A^{i_1} ... A^{i_N}]. In flat
/// indices site k carries digit weight D^(k-1).
///
/// Site tensors are stored as extracted (isometric); normalization is the
/// recorded scalar norm_factor dividing the raw state, so the isometry
/// invariant of SiteTensors survives normalization.
struct Mps {
    int num_sites = 0;
    int phys_dim = 0;
    int bond_dim = 0;
    BoundaryKind boundary = BoundaryKind::Open;
    CVector phi_initial;  // unit norm; unused for PBC
    CVector phi_final;
    bool homogeneous = true;
    std::vector<SiteTensors> tensors;  // one entry if homogeneous, else num_sites
    double norm_factor = 1.0;          // |psi_normalized> = |psi_raw> / norm_factor

    const SiteTensors& site(int k) const;  // k in [0, num_sites)

    /// Sets norm_factor so that norm_squared() == 1. Returns the raw norm^2.
    double normalize(int pbc_dense_chi_limit = 64);
};

/// A window of local D x D operators on contiguous sites, identity elsewhere.
struct ObservableSpec {
    int window_start = 1;  // 1-based first site of the window
    std::vector<CMatrix> ops;
    std::vector<bool> hermitian;  // recorded per op

    int window_length() const { return static_cast<int>(ops.size()); }

    static ObservableSpec single_site(int site, const CMatrix& op);
    /// Window of the given ops centered in the chain:
    /// window_start = floor((N - L) / 2) + 1.
    static ObservableSpec centered(int num_sites, std::vector<CMatrix> window_ops);

    void validate(int num_sites, int phys_dim) const;
    bool all_hermitian() const;
};

/// Transfer matrix E_O of one site. The implicit form is the map
/// X -> sum_{p,q} <q|O|p> A^p X A^q†, which for O = I is the CP map
/// E(X) = sum_i A^i X A^i†. The dense form (built on demand, chi^2 x chi^2)
/// is E_O = sum_{p,q} <q|O|p> kron(A^p, conj(A^q)) and satisfies
/// vec_row(apply(X)) = dense * vec_row(X).
struct TransferMatrix {
    const SiteTensors* site = nullptr;
    CMatrix op;

    CMatrix apply(const CMatrix& x) const;
    CMatrix dense() const;
};

/// sum_{p,q} <q|op|p> A^p X A^q†, cost O(D^2 chi^3); never materializes
/// the chi^2 x chi^2 transfer matrix.
CMatrix cp_apply(const CMatrix& x, const CMatrix& op, const SiteTensors& site);

/// Sample one RMPS by extracting site tensors from Haar unitaries of size
/// chi*D (one unitary if homogeneous, else num_sites independent ones).
/// Boundary vectors default to the first standard basis vector. The state is
/// explicitly normalized; norm_factor records the raw norm.
Mps sample_rmps(int num_sites, int phys_dim, int bond_dim, BoundaryKind boundary,
                bool homogeneous, RngStream& rng);

/// <psi|O|psi> for the (normalized) state. OBC: boundary sweep through
/// cp_apply with identity weights outside the window. PBC: trace of composed
/// dense transfer matrices, guarded by chi <= pbc_dense_chi_limit.
Complex expectation(const Mps& mps, const ObservableSpec& obs, int pbc_dense_chi_limit = 64);

double norm_squared(const Mps& mps, int pbc_dense_chi_limit = 64);

/// Reduced density matrix of the window [window_start, window_start+L-1]
/// (1-based), entry (i, j) = <psi| (|j><i|)_window |psi>. Window digit m
/// (site window_start+m) carries weight D^m.
CMatrix reduced_density_matrix(const Mps& mps, int window_start, int window_len,
                               int max_window = 3, int pbc_dense_chi_limit = 64);

struct TransferSpectrum {
    std::vector<Complex> eigenvalues;  // modulus-descending
    bool degenerate_leading = false;   // |lambda_2| within 1e-8 of 1
};

/// k leading eigenvalues of E_I via implicit_top_eigs on the CP map; for
/// isometric tensors the leading one is 1 and epsilon_2 = |eigenvalues[1]|.
TransferSpectrum transfer_spectrum(const SiteTensors& site, int k, double tol = 1e-10);

/// Brute-force oracle: all D^N amplitudes of the normalized state.
/// Throws StateTooLargeError above max_dim (default 2^14).
CVector dense_statevector(const Mps& mps, long max_dim = 1 << 14);

}  // namespace rmps
