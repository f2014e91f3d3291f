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

#include "rmps/stats.hpp"

#include <algorithm>
#include <cmath>

namespace rmps {

Moments compute_moments(const std::vector<double>& x) {
    Moments m;
    m.n = static_cast<long>(x.size());
    if (m.n == 0) return m;
    double sum = 0.0;
    for (double v : x) sum += v;
    m.mean = sum / static_cast<double>(m.n);
    if (m.n < 2) return m;
    double s2 = 0.0, s4 = 0.0;
    for (double v : x) {
        double c = v - m.mean;
        double c2 = c * c;
        s2 += c2;
        s4 += c2 * c2;
    }
    const double n = static_cast<double>(m.n);
    m.variance = s2 / (n - 1.0);
    m.stderr_mean = std::sqrt(m.variance / n);
    double m2 = s2 / n, m4 = s4 / n;
    m.stderr_var = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    return m;
}

double hermitian_trace_norm(const CMatrix& m) {
    RVector ev = hermitian_eigenvalues(m, 1e-8);
    return ev.cwiseAbs().sum();
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double t = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= t) ++i;
        while (j < b.size() && b[j] <= t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_1pct(long n, long m) {
    double c = std::sqrt(-0.5 * std::log(0.005));
    double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    const size_t n = x.size();
    if (n != y.size() || n < 2) {
        throw DimensionMismatchError("fit_line: need two or more (x, y) points");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double nn = static_cast<double>(n);
    double denom = nn * sxx - sx * sx;
    if (denom == 0.0) {
        throw DimensionMismatchError("fit_line: degenerate abscissae");
    }
    f.slope = (nn * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / nn;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms_residual = std::sqrt(ss / nn);
    return f;
}

}  // namespace rmps
