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

#include "gtest/gtest.h"

namespace rmps {
namespace {

// Known-answer blocks for philox4x64-10, frozen from an independent
// implementation of the same algorithm.
TEST(Philox, KnownAnswerBlocks) {
    auto b0 = Philox4x64::block({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(b0[0], 0x16554d9eca36314cULL);
    EXPECT_EQ(b0[1], 0xdb20fe9d672d0fdcULL);
    EXPECT_EQ(b0[2], 0xd7e772cee186176bULL);
    EXPECT_EQ(b0[3], 0x7e68b68aec7ba23bULL);

    auto b1 = Philox4x64::block({3, 0, 0, 0}, {0x123456789abcdef0ULL, 7});
    EXPECT_EQ(b1[0], 0x923d48e6a285757bULL);
    EXPECT_EQ(b1[1], 0xf3c436f97db3f4b9ULL);
    EXPECT_EQ(b1[2], 0x757ed03cf863c637ULL);
    EXPECT_EQ(b1[3], 0x30f212b1e82866bfULL);

    auto b2 = Philox4x64::block({0, 0, 0, 0}, {42, 1});
    EXPECT_EQ(b2[0], 0x5f7936e09aba407fULL);
    EXPECT_EQ(b2[1], 0x318bf7d38098fe0bULL);
    EXPECT_EQ(b2[2], 0xa767807799fc0f9fULL);
    EXPECT_EQ(b2[3], 0x3621918cb941dcf8ULL);
}

TEST(RngStream, FirstUniformsMatchFrozenValues) {
    RngStream rng(42, 1);
    EXPECT_DOUBLE_EQ(rng.uniform(), 0.3729433344221684);
    EXPECT_DOUBLE_EQ(rng.uniform(), 0.1935419932711716);
    EXPECT_DOUBLE_EQ(rng.uniform(), 0.6539230625148634);
    EXPECT_DOUBLE_EQ(rng.uniform(), 0.2114497154773355);
}

TEST(RngStream, ReproducibleAndStreamsDistinct) {
    RngStream a(0xdeadbeef, 17), b(0xdeadbeef, 17);
    for (int i = 0; i < 100; ++i) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
    }
    RngStream c(0xdeadbeef, 17), d(0xdeadbeef, 18);
    bool all_equal = true;
    for (int i = 0; i < 16; ++i) {
        all_equal = all_equal && (c.next_u64() == d.next_u64());
    }
    EXPECT_FALSE(all_equal);
}

TEST(RngStream, UniformRangeAndMean) {
    RngStream rng(1, 0);
    double sum = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 4.0 / std::sqrt(12.0 * n));
}

TEST(RngStream, GaussianMoments) {
    RngStream rng(2, 0);
    const int n = 200000;
    double s1 = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        double g = rng.gaussian();
        s1 += g;
        s2 += g * g;
        s4 += g * g * g * g;
    }
    EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(static_cast<double>(n)));
    EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(s4 / n, 3.0, 4.0 * std::sqrt(96.0 / n));
}

TEST(RngStream, ComplexGaussianUnitVariance) {
    RngStream rng(3, 5);
    const int n = 100000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::norm(rng.complex_gaussian());
    EXPECT_NEAR(s / n, 1.0, 4.0 / std::sqrt(static_cast<double>(n)));
}

}  // namespace
}  // namespace rmps
