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

#include "rmps/linalg.hpp"
#include "rmps/rng.hpp"

namespace rmps {

/// The set {A^0, ..., A^{D-1}} of chi x chi matrices defining one site.
/// Extracted from a unitary they satisfy the isometry sum_i A^i† A^i = I_chi.
struct SiteTensors {
    int phys_dim = 0;
    int bond_dim = 0;
    std::vector<CMatrix> a;

    const CMatrix& operator[](int i) const { return a[static_cast<size_t>(i)]; }

    /// max |sum_i A^i† A^i - I|, the isometry defect.
    double isometry_defect() const;
};

/// Haar-distributed unitary: complex Ginibre matrix, QR, then the R-diagonal
/// phase correction Q <- Q diag(r_ii/|r_ii|) (plain QR alone is not Haar).
CMatrix haar_unitary(int dim, RngStream& rng);

/// Unit vector uniform on the sphere (normalized complex Gaussian).
CVector haar_state(int dim, RngStream& rng);

/// Site tensors as sub-blocks of a chi*D x chi*D unitary. The joint index is
/// ancilla-major, flat = alpha*D + i, so A^i(alpha, beta) = U(alpha*D + i, beta*D).
/// Throws DimensionMismatchError on a size mismatch and NotHermitianError-like
/// unitarity violations are reported via Error when U†U deviates from I by
/// more than 1e-10.
SiteTensors extract_site_tensors(const CMatrix& u, int phys_dim, int bond_dim);

}  // namespace rmps
