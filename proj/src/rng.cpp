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

#include "rmps/rng.hpp"

#include <cmath>

namespace rmps {

namespace {

constexpr uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mul_hi_lo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<uint64_t>(p >> 64);
    lo = static_cast<uint64_t>(p);
}

}  // namespace

std::array<uint64_t, 4> Philox4x64::block(const std::array<uint64_t, 4>& counter,
                                          const std::array<uint64_t, 2>& key) {
    std::array<uint64_t, 4> c = counter;
    std::array<uint64_t, 2> k = key;
    for (int round = 0; round < 10; ++round) {
        uint64_t hi0, lo0, hi1, lo1;
        mul_hi_lo(kPhiloxM0, c[0], hi0, lo0);
        mul_hi_lo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

RngStream::RngStream(uint64_t master_seed, uint64_t stream_index)
    : key_{master_seed, stream_index} {}

uint64_t RngStream::next_u64() {
    if (pos_ == 4) {
        block_ = Philox4x64::block(counter_, key_);
        pos_ = 0;
        // 256-bit counter increment; wraparound is unreachable in practice.
        for (int i = 0; i < 4; ++i) {
            if (++counter_[i] != 0) break;
        }
    }
    return block_[pos_++];
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0,1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

std::complex<double> RngStream::complex_gaussian() {
    constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;
    double re = gaussian();
    double im = gaussian();
    return {re * inv_sqrt2, im * inv_sqrt2};
}

}  // namespace rmps
