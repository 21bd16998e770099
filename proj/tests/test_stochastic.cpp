// Copyright 2026 The spfilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "spf/stochastic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include "spf/qcore.hpp"

using namespace spf;

TEST(Philox, KnownAnswerZero) {
    const Philox4x32 out = philox4x32_10({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (Philox4x32{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
    const std::uint32_t f = 0xffffffffu;
    const Philox4x32 out = philox4x32_10({f, f, f, f}, {f, f});
    EXPECT_EQ(out, (Philox4x32{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
    const Philox4x32 out =
        philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out, (Philox4x32{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Uniform, OpenInterval) {
    EXPECT_GT(uniform53(0, 0), 0.0);
    EXPECT_LT(uniform53(0xffffffffu, 0xffffffffu), 1.0);
    EXPECT_DOUBLE_EQ(uniform53(0, 0), std::ldexp(1.0, -53));
    EXPECT_DOUBLE_EQ(uniform53(0xffffffffu, 0xffffffffu), 1.0 - std::ldexp(1.0, -53));
}

TEST(Stream, DeterministicPerSeedAndIndex) {
    RngStream a = derive_stream(42, 3), b = derive_stream(42, 3);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.normal(), b.normal());
    const auto d1 = derive_stream(42, 3).step_draws(17), d2 = RngStream(42, 3).step_draws(17);
    EXPECT_EQ(d1.z1, d2.z1);
    EXPECT_EQ(d1.z2, d2.z2);
    EXPECT_EQ(d1.u, d2.u);
}

TEST(Stream, DistinctIndicesAndSeedsDiffer) {
    RngStream s0 = derive_stream(1, 0), s1 = derive_stream(1, 1), t0 = derive_stream(2, 0);
    int same01 = 0, same_seed = 0;
    for (int i = 0; i < 100; ++i) {
        const double a = s0.uniform(), b = s1.uniform(), c = t0.uniform();
        same01 += a == b;
        same_seed += a == c;
    }
    EXPECT_EQ(same01, 0);
    EXPECT_EQ(same_seed, 0);
}

TEST(Stream, StepDrawsDoNotDependOnSequentialUse) {
    RngStream s = derive_stream(5, 9);
    const auto before = s.step_draws(4);
    for (int i = 0; i < 50; ++i) s.normal();
    const auto after = s.step_draws(4);
    EXPECT_EQ(before.z1, after.z1);
    EXPECT_EQ(before.u, after.u);
    EXPECT_NE(s.step_draws(4).z1, s.step_draws(5).z1);
}

TEST(Wiener, MeanAndVariance) {
    RngStream s = derive_stream(11, 0);
    const double dt = 1e-3;
    const int n = 1000000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = wiener_increment(s, dt);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n, var = sq / n - mean * mean;
    EXPECT_LT(std::abs(mean), 3.0 * std::sqrt(dt / n));
    EXPECT_NEAR(var / dt, 1.0, 0.01);
}

TEST(Wiener, CrossStreamCorrelationSmall) {
    const int n = 1000000;
    RngStream a = derive_stream(3, 0), b = derive_stream(3, 1);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = a.normal(), y = b.normal();
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    EXPECT_LT(std::abs(sab / std::sqrt(saa * sbb)), 3.0 / std::sqrt(n));
}

TEST(Wiener, StepDrawNormalsUncorrelated) {
    RngStream s = derive_stream(8, 2);
    const int n = 100000;
    double s12 = 0.0, s11 = 0.0, s22 = 0.0, su = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto d = s.step_draws(i);
        s12 += d.z1 * d.z2;
        s11 += d.z1 * d.z1;
        s22 += d.z2 * d.z2;
        su += d.u;
    }
    EXPECT_LT(std::abs(s12 / std::sqrt(s11 * s22)), 3.0 / std::sqrt(n));
    EXPECT_NEAR(su / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Wiener, NoFirstDrawCollisionsAcrossStreams) {
    std::set<double> seen;
    for (int k = 0; k < 1024; ++k) {
        RngStream s = derive_stream(99, k);
        seen.insert(s.uniform());
    }
    EXPECT_EQ(seen.size(), 1024u);
}

TEST(Wiener, RejectsNonPositiveStep) {
    RngStream s = derive_stream(1, 0);
    EXPECT_THROW(wiener_increment(s, 0.0), ValidationError);
}

TEST(Jump, CategoricalBoundaries) {
    const std::vector<double> rates{2.0, 3.0};
    const double dt = 0.01;
    EXPECT_EQ(jump_decision(0.01, rates, dt), std::optional<std::size_t>(0));
    EXPECT_EQ(jump_decision(0.03, rates, dt), std::optional<std::size_t>(1));
    EXPECT_EQ(jump_decision(0.06, rates, dt), std::nullopt);
    EXPECT_EQ(jump_decision(0.5, {0.0, 0.0}, dt), std::nullopt);
}

TEST(Jump, Frequencies) {
    RngStream s = derive_stream(21, 0);
    const std::vector<double> rates{1.0, 0.5};
    const double dt = 0.02;
    const int n = 400000;
    int c0 = 0, c1 = 0;
    for (int i = 0; i < n; ++i) {
        const auto j = jump_decision(s, rates, dt);
        if (j == std::optional<std::size_t>(0)) ++c0;
        if (j == std::optional<std::size_t>(1)) ++c1;
    }
    const double p0 = 0.02, p1 = 0.01;
    EXPECT_NEAR(double(c0) / n, p0, 4.0 * std::sqrt(p0 * (1 - p0) / n));
    EXPECT_NEAR(double(c1) / n, p1, 4.0 * std::sqrt(p1 * (1 - p1) / n));
}

TEST(Jump, SingleChannelFrequency) {
    RngStream s = derive_stream(22, 0);
    const int n = 1000000;
    int c0 = 0, c1 = 0;
    for (int i = 0; i < n; ++i) {
        const auto j = jump_decision(s, {1.0, 0.0}, 1e-3);
        c0 += j == std::optional<std::size_t>(0);
        c1 += j == std::optional<std::size_t>(1);
    }
    EXPECT_NEAR(double(c0) / n, 1e-3, 3.0 * std::sqrt(1e-3 * (1 - 1e-3) / n));
    EXPECT_EQ(c1, 0);
}

TEST(Jump, EqualRatesSplitEvenly) {
    RngStream s = derive_stream(23, 0);
    const int n = 1000000;
    int c0 = 0, c1 = 0;
    for (int i = 0; i < n; ++i) {
        const auto j = jump_decision(s, {20.0, 20.0}, 1e-3);
        c0 += j == std::optional<std::size_t>(0);
        c1 += j == std::optional<std::size_t>(1);
    }
    const double m = c0 + c1;
    EXPECT_NEAR(c0 / m, 0.5, 3.0 * std::sqrt(0.25 / m));
}

TEST(Jump, Rejects) {
    EXPECT_THROW(jump_decision(0.5, {-1.0}, 0.01), ValidationError);
    EXPECT_THROW(jump_decision(0.5, {1.0}, 0.0), ValidationError);
    EXPECT_THROW(jump_decision(0.5, {5.0, 6.0}, 0.01), ValidationError);
}
