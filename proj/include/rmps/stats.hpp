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

namespace rmps {

struct Moments {
    long n = 0;
    double mean = 0.0;
    double variance = 0.0;     // unbiased, sum (x-mean)^2 / (n-1)
    double stderr_mean = 0.0;  // sqrt(variance / n)
    double stderr_var = 0.0;   // sqrt((m4 - m2^2) / n), asymptotic SE of the variance
};

/// Two-pass central moments, accumulated in index order.
Moments compute_moments(const std::vector<double>& x);

/// Trace norm of a (numerically) Hermitian matrix via its eigenvalues.
double hermitian_trace_norm(const CMatrix& m);

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double two_sample_ks(std::vector<double> a, std::vector<double> b);

/// Asymptotic two-sample KS critical value at 1%:
/// c(0.01) sqrt((n+m)/(n m)) with c = sqrt(-ln(0.005)/2).
double ks_critical_1pct(long n, long m);

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rms_residual = 0.0;
};

/// Least-squares fit y = intercept + slope * x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rmps
