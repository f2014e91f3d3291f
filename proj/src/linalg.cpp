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

#include "rmps/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "rmps/rng.hpp"

namespace rmps {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    if (a.size() == 0 || b.size() == 0) {
        throw DimensionMismatchError("kron: operands must be nonempty");
    }
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

namespace {

// Largest singular value by power iteration on A†A, for matrices too large
// for a full SVD. Deterministic start vector.
double operator_norm_iterative(const CMatrix& a) {
    RngStream rng(0x6f706e6f726dULL, 0);  // fixed internal stream
    CVector v(a.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.complex_gaussian();
    v.normalize();
    double sigma = 0.0;
    for (int it = 0; it < 200; ++it) {
        CVector w = a.adjoint() * (a * v);
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        w /= nw;
        double next = std::sqrt(nw);
        if (std::abs(next - sigma) <= 1e-12 * std::max(1.0, next)) {
            return next;
        }
        sigma = next;
        v = w;
    }
    return sigma;
}

}  // namespace

double matrix_norm(const CMatrix& a, NormKind kind) {
    switch (kind) {
        case NormKind::Frobenius:
            return a.norm();
        case NormKind::Operator:
            if (std::max(a.rows(), a.cols()) > 512) {
                return operator_norm_iterative(a);
            }
            return Eigen::JacobiSVD<CMatrix>(a).singularValues()(0);
        case NormKind::Trace:
            return Eigen::JacobiSVD<CMatrix>(a).singularValues().sum();
    }
    return 0.0;
}

HermitianEig hermitian_eig(const CMatrix& a, bool want_vectors, double tol) {
    if (a.rows() != a.cols()) {
        throw DimensionMismatchError("hermitian_eig: matrix must be square");
    }
    double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol * scale) {
        throw NotHermitianError("hermitian_eig: asymmetry " + std::to_string(asym) +
                                " exceeds tolerance");
    }
    CMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(
        h, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    HermitianEig out;
    out.values = es.eigenvalues();
    if (want_vectors) out.vectors = es.eigenvectors();
    return out;
}

RVector hermitian_eigenvalues(const CMatrix& a, double tol) {
    return hermitian_eig(a, false, tol).values;
}

CVector vec_row(const CMatrix& m) {
    CVector v(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            v[r * m.cols() + c] = m(r, c);
        }
    }
    return v;
}

CMatrix unvec_row(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw DimensionMismatchError("unvec_row: size mismatch");
    }
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = v[r * cols + c];
        }
    }
    return m;
}

namespace {

struct RitzPair {
    Complex value;
    CVector vector;  // in the Krylov basis
    double residual;
};

bool modulus_greater(const Complex& x, const Complex& y) {
    double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
}

}  // namespace

std::vector<Complex> implicit_top_eigs(const LinearMap& apply, Eigen::Index dim, int k,
                                       double tol, long max_matvecs) {
    if (k < 1 || k > dim) {
        throw DimensionMismatchError("implicit_top_eigs: need 1 <= k <= dim");
    }
    if (max_matvecs <= 0) max_matvecs = 10 * static_cast<long>(dim);

    RngStream rng(0x41726e6f6c6469ULL, 0);  // fixed stream: results are deterministic
    std::vector<Complex> locked_values;
    std::vector<CVector> locked_vectors;
    long matvecs = 0;
    CVector restart;  // empty -> fresh random start

    auto orth_against_locked = [&](CVector& w) {
        for (const CVector& q : locked_vectors) {
            w -= q * q.dot(w);
        }
    };

    while (static_cast<int>(locked_values.size()) < k) {
        const int want = k - static_cast<int>(locked_values.size());
        const Eigen::Index free_dim = dim - static_cast<Eigen::Index>(locked_vectors.size());
        const Eigen::Index m =
            std::min<Eigen::Index>(free_dim, std::max<Eigen::Index>(2 * want + 10, 16));

        CVector v0;
        if (restart.size() == dim) {
            v0 = restart;
        } else {
            v0 = CVector(dim);
            for (Eigen::Index i = 0; i < dim; ++i) v0[i] = rng.complex_gaussian();
        }
        orth_against_locked(v0);
        double n0 = v0.norm();
        if (n0 < 1e-14) {
            restart.resize(0);
            continue;  // unlucky start inside the locked subspace; redraw
        }
        v0 /= n0;

        std::vector<CVector> basis{v0};
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
        Eigen::Index steps = 0;
        bool breakdown = false;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (matvecs >= max_matvecs) break;
            CVector w = apply(basis[j]);
            ++matvecs;
            if (w.size() != dim) {
                throw DimensionMismatchError("implicit_top_eigs: map changed dimension");
            }
            orth_against_locked(w);
            // modified Gram-Schmidt with one re-orthogonalization pass
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index i = 0; i <= j; ++i) {
                    Complex c = basis[i].dot(w);
                    h(i, j) += c;
                    w -= c * basis[i];
                }
            }
            double nw = w.norm();
            h(j + 1, j) = nw;
            steps = j + 1;
            if (nw < 1e-12) {
                breakdown = true;  // exact invariant subspace
                break;
            }
            basis.push_back(w / nw);
        }
        if (steps == 0) {
            throw NoConvergenceError("implicit_top_eigs: matvec cap reached");
        }

        Eigen::MatrixXcd hm = h.topLeftCorner(steps, steps);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(hm);
        double beta = breakdown ? 0.0 : std::abs(h(steps, steps - 1));

        std::vector<RitzPair> ritz(steps);
        for (Eigen::Index i = 0; i < steps; ++i) {
            ritz[i].value = es.eigenvalues()(i);
            ritz[i].vector = es.eigenvectors().col(i);
            ritz[i].residual = beta * std::abs(ritz[i].vector(steps - 1));
        }
        std::sort(ritz.begin(), ritz.end(),
                  [](const RitzPair& x, const RitzPair& y) { return modulus_greater(x.value, y.value); });

        // Lock converged leading Ritz pairs in modulus order; stop at the first
        // unconverged one so eigenvalues are locked largest-first.
        int newly_locked = 0;
        for (const RitzPair& rp : ritz) {
            if (static_cast<int>(locked_values.size()) >= k) break;
            if (rp.residual > tol * std::max(1.0, std::abs(rp.value))) break;
            CVector x = CVector::Zero(dim);
            for (Eigen::Index i = 0; i < steps; ++i) x += rp.vector(i) * basis[i];
            orth_against_locked(x);
            double nx = x.norm();
            if (nx < 1e-12) continue;  // linearly dependent with locked space
            locked_values.push_back(rp.value);
            locked_vectors.push_back(x / nx);
            ++newly_locked;
        }
        if (static_cast<int>(locked_values.size()) >= k) break;

        if (matvecs >= max_matvecs) {
            throw NoConvergenceError("implicit_top_eigs: no convergence within " +
                                     std::to_string(max_matvecs) + " applications");
        }
        if (breakdown && newly_locked == 0) {
            // Invariant subspace exhausted without new converged pairs; the
            // remaining spectrum lives elsewhere, restart fresh.
            restart.resize(0);
            continue;
        }
        // Restart towards the still-wanted part of the spectrum.
        restart = CVector::Zero(dim);
        int used = 0;
        for (const RitzPair& rp : ritz) {
            if (used >= want) break;
            if (rp.residual <= tol * std::max(1.0, std::abs(rp.value))) continue;
            CVector x = CVector::Zero(dim);
            for (Eigen::Index i = 0; i < steps; ++i) x += rp.vector(i) * basis[i];
            restart += x;
            ++used;
        }
        if (used == 0 || restart.norm() < 1e-14) restart.resize(0);
    }

    std::sort(locked_values.begin(), locked_values.end(), modulus_greater);
    locked_values.resize(k);
    return locked_values;
}

}  // namespace rmps
