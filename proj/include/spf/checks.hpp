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

#include "spf/filters.hpp"
#include "spf/stochastic.hpp"

namespace spf {

// Random draws for property checks. Entries are standard normal.
Op2 random_operator(RngStream& rng);
Op2 random_hermitian(RngStream& rng);
/// Unit-trace positive operator.
Op2 random_density(RngStream& rng);
Op2 random_unitary(RngStream& rng);
BeamSplitter random_splitter(RngStream& rng);
/// rho11, rho00 random densities, rho10 random with norm below one.
FilterState random_filter_state(RngStream& rng);

/// |Tr[(drho^{jk})^dag X] - dpi^{jk}(X)| for one state, operator and increment set.
double duality_residual(const MeasurementConfig& config, const SystemModel& model, const FilterState& st,
                        const Op2& X, cplx xi, const Innovations& inc, double dt);

struct DualityReport {
    Scheme scheme;
    std::size_t draws = 0;
    double max_residual = 0.0;
};
/// Random (state, X, S, splitter, xi, innovations) draws. Counting schemes keep S = I.
DualityReport duality_check(Scheme scheme, std::uint64_t seed, std::size_t draws);

}  // namespace spf
