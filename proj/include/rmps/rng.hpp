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

#include <array>
#include <complex>
#include <cstdint>

namespace rmps {

/// Philox4x64-10 counter-based generator. A (key, counter) pair maps to four
/// 64-bit outputs through a fixed bijection, so streams keyed by
/// (master_seed, stream_index) are independent and reproducible regardless of
/// evaluation order or thread count.
struct Philox4x64 {
    static std::array<uint64_t, 4> block(const std::array<uint64_t, 4>& counter,
                                         const std::array<uint64_t, 2>& key);
};

/// One reproducible random stream. Identical (master_seed, stream_index)
/// reproduce identical draws; distinct stream indices give statistically
/// independent streams (counter-based, no jump-ahead bookkeeping needed).
class RngStream {
  public:
    RngStream(uint64_t master_seed, uint64_t stream_index);

    uint64_t master_seed() const { return key_[0]; }
    uint64_t stream_index() const { return key_[1]; }

    uint64_t next_u64();

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    /// Standard normal via Box-Muller (explicit formulas, so draws do not
    /// depend on the standard library's distribution implementation).
    double gaussian();

    /// Standard complex Gaussian: real and imaginary parts ~ N(0, 1/2).
    std::complex<double> complex_gaussian();

  private:
    std::array<uint64_t, 2> key_;
    std::array<uint64_t, 4> counter_{0, 0, 0, 0};
    std::array<uint64_t, 4> block_{};
    int pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace rmps
