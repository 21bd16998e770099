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

#include "spf/qcore.hpp"

#include <cmath>
#include <numbers>

namespace spf {

namespace {
constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}
}  // namespace

Philox4x32 philox4x32_10(Philox4x32 c, std::array<std::uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

double uniform53(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
    return (static_cast<double>(bits >> 1) + 0.5) * 0x1.0p-52;
}

std::array<double, 2> box_muller(double u1, double u2) {
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t trajectory_index)
    : seed_(master_seed), index_(trajectory_index) {}

Philox4x32 RngStream::block(std::uint64_t counter) const {
    const Philox4x32 ctr{static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
                         static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32)};
    return philox4x32_10(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
}

std::uint32_t RngStream::next_word() {
    if (used_ == 4) {
        buffer_ = block(counter_++);
        used_ = 0;
    }
    return buffer_[used_++];
}

double RngStream::uniform() {
    const std::uint32_t hi = next_word();
    const std::uint32_t lo = next_word();
    return uniform53(hi, lo);
}

double RngStream::normal() {
    if (spare_normal_) {
        const double z = *spare_normal_;
        spare_normal_.reset();
        return z;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const auto z = box_muller(u1, u2);
    spare_normal_ = z[1];
    return z[0];
}

RngStream::StepDraws RngStream::step_draws(std::uint64_t step) const {
    const Philox4x32 g = block(2 * step);
    const Philox4x32 j = block(2 * step + 1);
    const auto z = box_muller(uniform53(g[0], g[1]), uniform53(g[2], g[3]));
    return {z[0], z[1], uniform53(j[0], j[1])};
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t trajectory_index) {
    return RngStream(master_seed, trajectory_index);
}

double wiener_increment(RngStream& stream, double dt) {
    if (!(dt > 0.0)) throw ValidationError("wiener_increment: dt must be > 0");
    return std::sqrt(dt) * stream.normal();
}

std::optional<std::size_t> jump_decision(double u, const std::vector<double>& rates, double dt) {
    if (!(dt > 0.0)) throw ValidationError("jump_decision: dt must be > 0");
    double total = 0.0;
    for (double r : rates) {
        if (!(r >= 0.0)) throw ValidationError("jump_decision: rates must be >= 0");
        total += r;
    }
    if (total * dt >= 0.1) throw ValidationError("jump_decision: rate * dt >= 0.1, reduce dt");
    double edge = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        edge += rates[i] * dt;
        if (u < edge) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> jump_decision(RngStream& stream, const std::vector<double>& rates, double dt) {
    return jump_decision(stream.uniform(), rates, dt);
}

}  // namespace spf
