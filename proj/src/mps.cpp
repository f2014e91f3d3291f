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

#include "rmps/mps.hpp"

#include <cmath>
#include <string>

namespace rmps {

const SiteTensors& Mps::site(int k) const {
    if (k < 0 || k >= num_sites) {
        throw DimensionMismatchError("Mps::site: index out of range");
    }
    return homogeneous ? tensors[0] : tensors[static_cast<size_t>(k)];
}

namespace {

CMatrix dense_transfer(const SiteTensors& st, const CMatrix& op) {
    const int chi = st.bond_dim;
    CMatrix e = CMatrix::Zero(chi * chi, chi * chi);
    for (int p = 0; p < st.phys_dim; ++p) {
        for (int q = 0; q < st.phys_dim; ++q) {
            Complex w = op(q, p);
            if (w != Complex(0, 0)) {
                e += w * kron(st[p], st[q].conjugate());
            }
        }
    }
    return e;
}

// Raw (unnormalized) OBC sweep value of prod_k E_{O[k]} closed by boundaries.
Complex obc_sweep(const Mps& mps, const std::vector<const CMatrix*>& ops) {
    CMatrix x = mps.phi_initial * mps.phi_initial.adjoint();
    for (int k = 0; k < mps.num_sites; ++k) {
        x = cp_apply(x, *ops[static_cast<size_t>(k)], mps.site(k));
    }
    return (mps.phi_final.adjoint() * x * mps.phi_final)(0, 0);
}

Complex pbc_trace(const Mps& mps, const std::vector<const CMatrix*>& ops, int chi_limit) {
    if (mps.bond_dim > chi_limit) {
        throw ChiTooLargeForPbcError("PBC contraction needs chi <= " + std::to_string(chi_limit) +
                                     ", got " + std::to_string(mps.bond_dim));
    }
    const int chi2 = mps.bond_dim * mps.bond_dim;
    CMatrix prod = CMatrix::Identity(chi2, chi2);
    // amplitude Tr[A^{i_1} ... A^{i_N}]  =>  Tr[E_1 E_2 ... E_N]
    for (int k = 0; k < mps.num_sites; ++k) {
        prod = prod * dense_transfer(mps.site(k), *ops[static_cast<size_t>(k)]);
    }
    return prod.trace();
}

std::vector<const CMatrix*> ops_for_window(const Mps& mps, const ObservableSpec& obs,
                                           const CMatrix& identity) {
    std::vector<const CMatrix*> ops(static_cast<size_t>(mps.num_sites), &identity);
    for (int m = 0; m < obs.window_length(); ++m) {
        ops[static_cast<size_t>(obs.window_start - 1 + m)] = &obs.ops[static_cast<size_t>(m)];
    }
    return ops;
}

}  // namespace

double Mps::normalize(int pbc_dense_chi_limit) {
    norm_factor = 1.0;
    double raw = norm_squared(*this, pbc_dense_chi_limit);
    if (!(raw > 0.0)) {
        throw Error("Mps::normalize: raw norm^2 is not positive");
    }
    norm_factor = std::sqrt(raw);
    return raw;
}

ObservableSpec ObservableSpec::single_site(int site, const CMatrix& op) {
    ObservableSpec s;
    s.window_start = site;
    s.ops.push_back(op);
    s.hermitian.push_back((op - op.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    return s;
}

ObservableSpec ObservableSpec::centered(int num_sites, std::vector<CMatrix> window_ops) {
    ObservableSpec s;
    const int len = static_cast<int>(window_ops.size());
    s.window_start = (num_sites - len) / 2 + 1;
    s.ops = std::move(window_ops);
    for (const CMatrix& op : s.ops) {
        s.hermitian.push_back((op - op.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
    return s;
}

void ObservableSpec::validate(int num_sites, int phys_dim) const {
    if (ops.empty()) {
        throw DimensionMismatchError("ObservableSpec: empty window");
    }
    if (window_start < 1 || window_start + window_length() - 1 > num_sites) {
        throw DimensionMismatchError("ObservableSpec: window [" + std::to_string(window_start) +
                                     ", " + std::to_string(window_start + window_length() - 1) +
                                     "] outside chain of " + std::to_string(num_sites) + " sites");
    }
    for (const CMatrix& op : ops) {
        if (op.rows() != phys_dim || op.cols() != phys_dim) {
            throw DimensionMismatchError("ObservableSpec: operator is not D x D");
        }
        if (!op.allFinite()) {
            throw Error("ObservableSpec: operator has non-finite entries");
        }
    }
}

bool ObservableSpec::all_hermitian() const {
    for (bool h : hermitian) {
        if (!h) return false;
    }
    return true;
}

CMatrix cp_apply(const CMatrix& x, const CMatrix& op, const SiteTensors& site) {
    const int chi = site.bond_dim;
    const int d = site.phys_dim;
    if (x.rows() != chi || x.cols() != chi || op.rows() != d || op.cols() != d) {
        throw DimensionMismatchError("cp_apply: dimension mismatch");
    }
    CMatrix y = CMatrix::Zero(chi, chi);
    for (int p = 0; p < d; ++p) {
        CMatrix ax = site[p] * x;
        for (int q = 0; q < d; ++q) {
            Complex w = op(q, p);
            if (w != Complex(0, 0)) {
                y.noalias() += w * (ax * site[q].adjoint());
            }
        }
    }
    return y;
}

CMatrix TransferMatrix::apply(const CMatrix& x) const { return cp_apply(x, op, *site); }

CMatrix TransferMatrix::dense() const { return dense_transfer(*site, op); }

Mps sample_rmps(int num_sites, int phys_dim, int bond_dim, BoundaryKind boundary,
                bool homogeneous, RngStream& rng) {
    if (num_sites < 1 || phys_dim < 2 || bond_dim < 1) {
        throw DimensionMismatchError("sample_rmps: need N >= 1, D >= 2, chi >= 1");
    }
    Mps mps;
    mps.num_sites = num_sites;
    mps.phys_dim = phys_dim;
    mps.bond_dim = bond_dim;
    mps.boundary = boundary;
    mps.homogeneous = homogeneous;
    mps.phi_initial = CVector::Zero(bond_dim);
    mps.phi_initial[0] = 1.0;
    mps.phi_final = mps.phi_initial;
    const int n_tensors = homogeneous ? 1 : num_sites;
    for (int k = 0; k < n_tensors; ++k) {
        CMatrix u = haar_unitary(bond_dim * phys_dim, rng);
        mps.tensors.push_back(extract_site_tensors(u, phys_dim, bond_dim));
    }
    mps.normalize();
    return mps;
}

Complex expectation(const Mps& mps, const ObservableSpec& obs, int pbc_dense_chi_limit) {
    obs.validate(mps.num_sites, mps.phys_dim);
    CMatrix identity = CMatrix::Identity(mps.phys_dim, mps.phys_dim);
    auto ops = ops_for_window(mps, obs, identity);
    Complex raw = mps.boundary == BoundaryKind::Open ? obc_sweep(mps, ops)
                                                     : pbc_trace(mps, ops, pbc_dense_chi_limit);
    return raw / (mps.norm_factor * mps.norm_factor);
}

double norm_squared(const Mps& mps, int pbc_dense_chi_limit) {
    CMatrix identity = CMatrix::Identity(mps.phys_dim, mps.phys_dim);
    std::vector<const CMatrix*> ops(static_cast<size_t>(mps.num_sites), &identity);
    Complex raw = mps.boundary == BoundaryKind::Open ? obc_sweep(mps, ops)
                                                     : pbc_trace(mps, ops, pbc_dense_chi_limit);
    return raw.real() / (mps.norm_factor * mps.norm_factor);
}

CMatrix reduced_density_matrix(const Mps& mps, int window_start, int window_len,
                               int max_window, int pbc_dense_chi_limit) {
    if (window_len < 1 || window_len > max_window) {
        throw WindowTooLargeError("reduced_density_matrix: window length " +
                                  std::to_string(window_len) + " exceeds max " +
                                  std::to_string(max_window));
    }
    if (window_start < 1 || window_start + window_len - 1 > mps.num_sites) {
        throw DimensionMismatchError("reduced_density_matrix: window outside chain");
    }
    const int d = mps.phys_dim;
    const int chi = mps.bond_dim;
    const int w = window_start - 1;  // 0-based
    long dl = 1;
    for (int m = 0; m < window_len; ++m) dl *= d;
    CMatrix rho(dl, dl);

    if (mps.boundary == BoundaryKind::Open) {
        CMatrix left = mps.phi_initial * mps.phi_initial.adjoint();
        CMatrix identity = CMatrix::Identity(d, d);
        for (int k = 0; k < w; ++k) left = cp_apply(left, identity, mps.site(k));
        // right environment: pull |phiF><phiF| back through the tail with the
        // adjoint map Y -> sum_i A^i† Y A^i, so the closure is Tr(X * Y).
        CMatrix right = mps.phi_final * mps.phi_final.adjoint();
        for (int k = mps.num_sites - 1; k >= w + window_len; --k) {
            CMatrix y = CMatrix::Zero(chi, chi);
            for (int p = 0; p < d; ++p) {
                y.noalias() += mps.site(k)[p].adjoint() * right * mps.site(k)[p];
            }
            right = y;
        }
        for (long a = 0; a < dl; ++a) {
            for (long b = 0; b < dl; ++b) {
                CMatrix x = left;
                long ar = a, br = b;
                for (int m = 0; m < window_len; ++m) {
                    const SiteTensors& st = mps.site(w + m);
                    x = st[static_cast<int>(ar % d)] * x * st[static_cast<int>(br % d)].adjoint();
                    ar /= d;
                    br /= d;
                }
                rho(a, b) = (x * right).trace();
            }
        }
    } else {
        if (chi > pbc_dense_chi_limit) {
            throw ChiTooLargeForPbcError("reduced_density_matrix: PBC needs chi <= " +
                                         std::to_string(pbc_dense_chi_limit));
        }
        const int chi2 = chi * chi;
        CMatrix pre = CMatrix::Identity(chi2, chi2);
        CMatrix identity = CMatrix::Identity(d, d);
        for (int k = 0; k < w; ++k) pre = pre * dense_transfer(mps.site(k), identity);
        CMatrix post = CMatrix::Identity(chi2, chi2);
        for (int k = w + window_len; k < mps.num_sites; ++k) {
            post = post * dense_transfer(mps.site(k), identity);
        }
        for (long a = 0; a < dl; ++a) {
            for (long b = 0; b < dl; ++b) {
                CMatrix mid = CMatrix::Identity(chi2, chi2);
                long ar = a, br = b;
                for (int m = 0; m < window_len; ++m) {
                    const SiteTensors& st = mps.site(w + m);
                    mid = mid * kron(st[static_cast<int>(ar % d)],
                                     st[static_cast<int>(br % d)].conjugate());
                    ar /= d;
                    br /= d;
                }
                rho(a, b) = (pre * mid * post).trace();
            }
        }
    }
    rho /= mps.norm_factor * mps.norm_factor;
    return rho;
}

TransferSpectrum transfer_spectrum(const SiteTensors& st, int k, double tol) {
    const int chi = st.bond_dim;
    const Eigen::Index dim = static_cast<Eigen::Index>(chi) * chi;
    if (k < 1 || k > dim) {
        throw DimensionMismatchError("transfer_spectrum: need 1 <= k <= chi^2");
    }
    CMatrix identity = CMatrix::Identity(st.phys_dim, st.phys_dim);
    LinearMap apply = [&](const CVector& v) {
        return vec_row(cp_apply(unvec_row(v, chi, chi), identity, st));
    };
    TransferSpectrum out;
    out.eigenvalues = implicit_top_eigs(apply, dim, k, tol);
    if (out.eigenvalues.size() >= 2) {
        out.degenerate_leading = std::abs(std::abs(out.eigenvalues[1]) - 1.0) < 1e-8;
    }
    return out;
}

CVector dense_statevector(const Mps& mps, long max_dim) {
    long dim = 1;
    for (int k = 0; k < mps.num_sites; ++k) {
        dim *= mps.phys_dim;
        if (dim > max_dim) {
            throw StateTooLargeError("dense_statevector: D^N exceeds cap " +
                                     std::to_string(max_dim));
        }
    }
    CVector psi(dim);
    if (mps.boundary == BoundaryKind::Open) {
        for (long m = 0; m < dim; ++m) {
            CVector v = mps.phi_initial;
            long mr = m;
            for (int k = 0; k < mps.num_sites; ++k) {
                v = mps.site(k)[static_cast<int>(mr % mps.phys_dim)] * v;
                mr /= mps.phys_dim;
            }
            psi[m] = mps.phi_final.dot(v);
        }
    } else {
        for (long m = 0; m < dim; ++m) {
            CMatrix prod = CMatrix::Identity(mps.bond_dim, mps.bond_dim);
            long mr = m;
            for (int k = 0; k < mps.num_sites; ++k) {
                prod = prod * mps.site(k)[static_cast<int>(mr % mps.phys_dim)];
                mr /= mps.phys_dim;
            }
            psi[m] = prod.trace();
        }
    }
    return psi / mps.norm_factor;
}

}  // namespace rmps
