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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace spf {

using Philox4x32 = std::array<std::uint32_t, 4>;

/// Philox4x32-10 block function.
Philox4x32 philox4x32_10(Philox4x32 counter, std::array<std::uint32_t, 2> key);

/// Uniform in (0, 1): odd multiples of 2^-53 drawn from two words.
double uniform53(std::uint32_t hi, std::uint32_t lo);

/// Counter-based stream. The key is the master seed and the upper counter
/// words hold the trajectory index, so every (seed, index) pair addresses a
/// disjoint block sequence.
class RngStream {
   public:
    RngStream(std::uint64_t master_seed, std::uint64_t trajectory_index);

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t trajectory_index() const { return index_; }

    /// Random block number `counter` of this stream; does not advance the stream.
    Philox4x32 block(std::uint64_t counter) const;

    /// Sequential draws.
    double uniform();
    /// Standard normal via Box-Muller; consumes uniforms in pairs.
    double normal();

    /// Per-step addressed draws: two standard normals from block 2*step and
    /// one uniform from block 2*step+1. Independent of any sequential use.
    struct StepDraws {
        double z1, z2, u;
    };
    StepDraws step_draws(std::uint64_t step) const;

   private:
    std::uint32_t next_word();

    std::uint64_t seed_;
    std::uint64_t index_;
    std::uint64_t counter_ = 0;
    Philox4x32 buffer_{};
    int used_ = 4;
    std::optional<double> spare_normal_;
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t trajectory_index);

/// Box-Muller pair from two uniforms in (0, 1).
std::array<double, 2> box_muller(double u1, double u2);

/// Sample of N(0, dt).
double wiener_increment(RngStream& stream, double dt);

/// Channel index (0-based) that fires in this step, or none. Channel i fires
/// with probability rates[i] * dt and at most one channel fires.
/// Rejects negative rates, dt <= 0 and sum(rates) * dt >= 0.1.
std::optional<std::size_t> jump_decision(double u, const std::vector<double>& rates, double dt);
std::optional<std::size_t> jump_decision(RngStream& stream, const std::vector<double>& rates, double dt);

}  // namespace spf
