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

#include "rmps/haar.hpp"

#include <Eigen/QR>

#include <cmath>

namespace rmps {

double SiteTensors::isometry_defect() const {
    CMatrix s = CMatrix::Zero(bond_dim, bond_dim);
    for (const CMatrix& m : a) s += m.adjoint() * m;
    s -= CMatrix::Identity(bond_dim, bond_dim);
    return s.cwiseAbs().maxCoeff();
}

CMatrix haar_unitary(int dim, RngStream& rng) {
    if (dim < 1) {
        throw DimensionMismatchError("haar_unitary: dim must be >= 1");
    }
    CMatrix g(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            g(i, j) = rng.complex_gaussian();
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR();
    for (int j = 0; j < dim; ++j) {
        Complex d = r(j, j);
        double ad = std::abs(d);
        Complex phase = ad > 0 ? d / ad : Complex(1, 0);
        q.col(j) *= phase;
    }
    return q;
}

CVector haar_state(int dim, RngStream& rng) {
    if (dim < 1) {
        throw DimensionMismatchError("haar_state: dim must be >= 1");
    }
    CVector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.complex_gaussian();
    v.normalize();
    return v;
}

SiteTensors extract_site_tensors(const CMatrix& u, int phys_dim, int bond_dim) {
    const int d = phys_dim * bond_dim;
    if (u.rows() != d || u.cols() != d) {
        throw DimensionMismatchError("extract_site_tensors: unitary must be chi*D x chi*D");
    }
    double unit_defect = (u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (unit_defect > 1e-10) {
        throw Error("extract_site_tensors: input is not unitary (defect " +
                    std::to_string(unit_defect) + ")");
    }
    SiteTensors st;
    st.phys_dim = phys_dim;
    st.bond_dim = bond_dim;
    st.a.reserve(static_cast<size_t>(phys_dim));
    for (int i = 0; i < phys_dim; ++i) {
        CMatrix ai(bond_dim, bond_dim);
        for (int alpha = 0; alpha < bond_dim; ++alpha) {
            for (int beta = 0; beta < bond_dim; ++beta) {
                ai(alpha, beta) = u(alpha * phys_dim + i, beta * phys_dim);
            }
        }
        st.a.push_back(std::move(ai));
    }
    return st;
}

}  // namespace rmps
