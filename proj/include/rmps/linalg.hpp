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

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <vector>

#include "rmps/errors.hpp"

namespace rmps {

// Dense storage layout is Eigen's default (column-major) everywhere.
// Flattening conventions that kron/vec identities depend on are row-major and
// go through vec_row/unvec_row below; see mps.hpp for the transfer-matrix use.
using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

enum class NormKind { Operator, Frobenius, Trace };

/// Kronecker product with the standard block layout:
/// (a ⊗ b)[i*p+k, j*q+l] = a(i,j) * b(k,l) for b of size p x q.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Operator (largest singular value), Frobenius, or trace (sum of singular
/// values) norm. Operator norm on matrices larger than 512 falls back to an
/// iterative largest-singular-value estimate; the trace norm is only ever
/// needed on subsystem-sized matrices and always goes through the full SVD.
double matrix_norm(const CMatrix& a, NormKind kind);

struct HermitianEig {
    RVector values;   // ascending
    CMatrix vectors;  // orthonormal columns; empty if not requested
};

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitianError when the
/// asymmetry max|A - A†| exceeds tol * max(1, max|A|); otherwise (A+A†)/2 is
/// decomposed.
HermitianEig hermitian_eig(const CMatrix& a, bool want_vectors = true, double tol = 1e-10);
RVector hermitian_eigenvalues(const CMatrix& a, double tol = 1e-10);

using LinearMap = std::function<CVector(const CVector&)>;

/// k largest-modulus eigenvalues of an implicitly applied linear map, sorted
/// by modulus descending (ties: larger real part, then larger imaginary part
/// first). Restarted Arnoldi with explicit deflation of converged eigenpairs;
/// complex spectra supported since the maps of interest are not Hermitian.
/// max_matvecs <= 0 selects the default cap of 10 * dim applications.
/// Throws NoConvergenceError when the cap is reached.
std::vector<Complex> implicit_top_eigs(const LinearMap& apply, Eigen::Index dim, int k,
                                       double tol, long max_matvecs = 0);

/// Row-major flattening: vec_row(M)[r*cols + c] = M(r, c).
CVector vec_row(const CMatrix& m);
CMatrix unvec_row(const CVector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace rmps
