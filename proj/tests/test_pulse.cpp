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

#include "spf/pulse.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

using namespace spf;

namespace {

// Composite Simpson rule on [a, b] with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

double energy(const PulseShape& p, double a, double b, int n = 20000) {
    return simpson([&](double t) { return std::norm(p.xi(t)); }, a, b, n);
}

const PulseShape gauss = PulseShape::gaussian(1.5, 3.0);

// Arbitrary-precision evaluations of the closed forms (30 digits, rounded).
constexpr double kXiAtPeak = 0.773571858719116680;
constexpr double kLambdaAtPeak = 1.093995814070738588;
constexpr double kEnergyZeroToTen = 0.999996602326875270;

std::string temp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST(Gaussian, PeakValue) {
    EXPECT_NEAR(xi_gaussian(1.5, 3.0, 3.0).real(), kXiAtPeak, 1e-14);
    EXPECT_EQ(xi_gaussian(1.5, 3.0, 3.0).imag(), 0.0);
    EXPECT_NEAR(gauss.xi(3.0).real(), kXiAtPeak, 1e-14);
}

TEST(Gaussian, MaximumAtPeakAndVanishingTails) {
    for (double d : {0.01, 0.1, 1.0}) {
        EXPECT_LT(std::abs(gauss.xi(3.0 + d)), std::abs(gauss.xi(3.0)));
        EXPECT_LT(std::abs(gauss.xi(3.0 - d)), std::abs(gauss.xi(3.0)));
    }
    EXPECT_LT(std::abs(gauss.xi(60.0)), 1e-300);
    EXPECT_LT(std::abs(gauss.xi(-60.0)), 1e-300);
}

TEST(Gaussian, EnergyOnHorizonAndFullLine) {
    EXPECT_NEAR(energy(gauss, 0.0, 10.0), kEnergyZeroToTen, 1e-10);
    EXPECT_NEAR(energy(gauss, -20.0, 26.0, 40000), 1.0, 1e-10);
    EXPECT_DOUBLE_EQ(gauss.norm(), 1.0);
    EXPECT_NEAR(gauss.w(-40.0), 1.0, 1e-15);
}

TEST(Gaussian, RejectsNonPositiveBandwidth) {
    EXPECT_THROW(xi_gaussian(0.0, 3.0, 1.0), ValidationError);
    EXPECT_THROW(PulseShape::gaussian(-1.0, 3.0), ValidationError);
}

TEST(Exponential, RisingValues) {
    EXPECT_DOUBLE_EQ(xi_exponential(1.0, 4.0, true, 4.0).real(), 1.0);
    EXPECT_EQ(xi_exponential(1.0, 4.0, true, 4.5), cplx(0.0));
    EXPECT_NEAR(xi_exponential(2.0, 4.0, true, 3.0).real(), std::sqrt(2.0) * std::exp(-1.0), 1e-15);
}

TEST(Exponential, DecayingValues) {
    EXPECT_EQ(xi_exponential(1.0, 4.0, false, 3.9), cplx(0.0));
    EXPECT_NEAR(xi_exponential(2.0, 4.0, false, 5.0).real(), std::sqrt(2.0) * std::exp(-1.0), 1e-15);
}

TEST(Exponential, UnitNorm) {
    const PulseShape r = PulseShape::exponential(1.3, 25.0, true);
    const PulseShape d = PulseShape::exponential(1.3, 0.0, false);
    EXPECT_NEAR(energy(r, -10.0, 25.0, 200000), 1.0, 1e-6);
    EXPECT_NEAR(energy(d, 0.0, 35.0, 200000), 1.0, 1e-6);
    EXPECT_NEAR(r.w(-100.0), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(d.w(-1.0), 1.0);
}

TEST(Exponential, RejectsNonPositiveRate) {
    EXPECT_THROW(xi_exponential(0.0, 1.0, true, 0.0), ValidationError);
    EXPECT_THROW(PulseShape::exponential(-2.0, 1.0, false), ValidationError);
}

TEST(TailWeight, GaussianValues) {
    EXPECT_NEAR(gauss.w(3.0), 0.5, 1e-15);
    EXPECT_NEAR(w_of(gauss, 0.0), 1.0, 1e-5);
    EXPECT_LT(gauss.w(40.0), 1e-300);
}

TEST(TailWeight, NonIncreasingAndBounded) {
    for (const PulseShape& p : {gauss, PulseShape::exponential(1.0, 5.0, true), PulseShape::exponential(1.0, 2.0, false)}) {
        double prev = p.w(0.0);
        EXPECT_LE(prev, 1.0);
        for (int i = 1; i <= 2000; ++i) {
            const double w = p.w(i * 0.005);
            EXPECT_LE(w, prev);
            EXPECT_GE(w, 0.0);
            prev = w;
        }
    }
}

TEST(TailWeight, DerivativeIsMinusIntensity) {
    const double h = 1e-4;
    for (const PulseShape& p : {gauss, PulseShape::exponential(1.0, 6.0, true), PulseShape::exponential(0.7, 2.0, false)}) {
        for (int i = 1; i < 100; ++i) {
            const double t = 0.1 * i + 0.0123;
            const double dw = (p.w(t + h) - p.w(t - h)) / (2 * h);
            EXPECT_NEAR(dw, -std::norm(p.xi(t)), 1e-6) << "t = " << t;
        }
    }
}

TEST(Coupling, PeakValueAndClamp) {
    EXPECT_NEAR(gauss.lambda(3.0).real(), kLambdaAtPeak, 1e-13);
    EXPECT_NEAR(lambda_of(gauss, 3.0).real(), gauss.xi(3.0).real() / std::sqrt(gauss.w(3.0)), 1e-15);
    EXPECT_GT(gauss.w(7.6), kEpsW);
    EXPECT_NE(gauss.lambda(7.6), cplx(0.0));
    EXPECT_LE(gauss.w(7.8), kEpsW);
    EXPECT_EQ(gauss.lambda(7.8), cplx(0.0));
    EXPECT_EQ(PulseShape::exponential(1.0, 2.0, true).lambda(2.5), cplx(0.0));
}

TEST(Coupling, ConsistencyWithTailWeight) {
    for (const PulseShape& p : {gauss, PulseShape::exponential(1.0, 6.0, true), PulseShape::exponential(0.7, 2.0, false)}) {
        for (int i = 0; i <= 1000; ++i) {
            const double t = 0.01 * i;
            if (p.w(t) <= kEpsW) continue;
            EXPECT_NEAR(std::norm(p.xi(t)), std::norm(p.lambda(t)) * p.w(t), 1e-9);
        }
    }
}

TEST(Coupling, DecayingExponentialHasConstantCoupling) {
    const double gamma = 1.7;
    const PulseShape d = PulseShape::exponential(gamma, 2.0, false);
    for (double t : {2.0, 2.5, 4.0, 9.0}) EXPECT_NEAR(d.lambda(t).real(), std::sqrt(gamma), 1e-12);
    EXPECT_EQ(d.lambda(1.0), cplx(0.0));
}

TEST(Coupling, RisingExponentialCouplingGrows) {
    const PulseShape r = PulseShape::exponential(1.0, 5.0, true);
    EXPECT_LT(r.lambda(1.0).real(), r.lambda(3.0).real());
    EXPECT_LT(r.lambda(3.0).real(), r.lambda(4.9).real());
}

TEST(Tabulated, LoadsNormalizesAndInterpolates) {
    const std::string path = temp_file("spf_pulse_table.csv");
    {
        std::ofstream out(path);
        out << "t,xi\n";
        for (int i = 0; i <= 100; ++i) {
            const double t = 0.1 * i;
            out << t << "," << 2.0 * xi_gaussian(1.5, 3.0, t).real() << "\n";
        }
    }
    const PulseShape p = PulseShape::from_csv(path);
    EXPECT_EQ(p.kind(), PulseShape::Kind::Tabulated);
    EXPECT_NEAR(p.norm(), 1.0, 1e-12);
    EXPECT_NEAR(energy(p, 0.0, 10.0, 100000), 1.0, 1e-8);
    EXPECT_NEAR(p.w(0.0), 1.0, 1e-12);
    EXPECT_EQ(p.w(10.5), 0.0);
    EXPECT_EQ(p.xi(-0.5), cplx(0.0));
    const double mid = 0.5 * (p.xi(3.0).real() + p.xi(3.1).real());
    EXPECT_NEAR(p.xi(3.05).real(), mid, 1e-15);
    for (double t : {0.37, 2.95, 3.0, 6.01}) EXPECT_NEAR(p.w(t), energy(p, t, 10.0, 100000), 1e-8);
    std::filesystem::remove(path);
}

TEST(Tabulated, RejectsNonUniformGridAndBadRows) {
    const std::string path = temp_file("spf_pulse_bad.csv");
    {
        std::ofstream out(path);
        out << "t,xi\n0,1\n0.1,1\n0.3,1\n";
    }
    EXPECT_THROW(PulseShape::from_csv(path), ValidationError);
    {
        std::ofstream out(path);
        out << "t,xi\n0,1\n0.1,abc\n";
    }
    EXPECT_THROW(PulseShape::from_csv(path), ValidationError);
    std::filesystem::remove(path);
    EXPECT_THROW(PulseShape::from_csv(path), ValidationError);
    EXPECT_THROW(PulseShape::tabulated(0.0, 0.1, {0.0, 0.0}), ValidationError);
}

TEST(Vacuum, Empty) {
    const PulseShape v = PulseShape::vacuum();
    EXPECT_EQ(v.xi(1.0), cplx(0.0));
    EXPECT_EQ(v.w(1.0), 0.0);
    EXPECT_EQ(v.lambda(1.0), cplx(0.0));
}
