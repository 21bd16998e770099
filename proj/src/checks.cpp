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

#include "spf/checks.hpp"

#include <cmath>
#include <numbers>

namespace spf {

Op2 random_operator(RngStream& rng) {
    Op2 a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double re = rng.normal();
            a(i, j) = cplx(re, rng.normal());
        }
    return a;
}

Op2 random_hermitian(RngStream& rng) {
    const Op2 a = random_operator(rng);
    return 0.5 * (a + a.adjoint());
}

Op2 random_density(RngStream& rng) {
    const Op2 a = random_operator(rng);
    const Op2 p = a * a.adjoint();
    return p / p.trace().real();
}

Op2 random_unitary(RngStream& rng) {
    Eigen::HouseholderQR<Op2> qr(random_operator(rng));
    return qr.householderQ() * Op2::Identity();
}

BeamSplitter random_splitter(RngStream& rng) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double theta = std::numbers::pi * rng.uniform();
    const double psi = two_pi * rng.uniform();
    const double phi = two_pi * rng.uniform();
    return BeamSplitter::from_angles(theta, psi, phi, two_pi * rng.uniform());
}

FilterState random_filter_state(RngStream& rng) {
    FilterState st;
    st.rho11 = random_density(rng);
    st.rho00 = random_density(rng);
    const Op2 r = random_operator(rng);
    st.rho10 = 0.5 * r / std::max(1.0, r.norm());
    return st;
}

double duality_residual(const MeasurementConfig& config, const SystemModel& model, const FilterState& st,
                        const Op2& X, cplx xi, const Innovations& inc, double dt) {
    const FilterState d = filter_increment(config, model, st, xi, inc, dt);
    const HeisenbergIncrement h = heisenberg_increment(config, model, st, X, xi, inc, dt);
    const cplx s11 = (d.rho11.adjoint() * X).trace();
    const cplx s10 = (d.rho10.adjoint() * X).trace();
    const cplx s00 = (d.rho00.adjoint() * X).trace();
    return std::max({std::abs(s11 - h.d11), std::abs(s10 - h.d10), std::abs(s00 - h.d00)});
}

DualityReport duality_check(Scheme scheme, std::uint64_t seed, std::size_t draws) {
    RngStream rng = derive_stream(seed, static_cast<std::uint64_t>(scheme));
    DualityReport rep{scheme, draws, 0.0};
    const double dt = 1e-3;
    for (std::size_t i = 0; i < draws; ++i) {
        SystemModel model;
        model.kappa = 0.5 + rng.uniform();
        model.H = random_hermitian(rng);
        MeasurementConfig config{scheme, random_splitter(rng)};
        if (!config.has_counting()) model.S = random_unitary(rng);
        const FilterState st = random_filter_state(rng);
        const Op2 X = random_operator(rng);
        const cplx xi(rng.normal(), rng.normal());
        Innovations inc;
        inc.dW1 = std::sqrt(dt) * rng.normal();
        inc.dW2 = std::sqrt(dt) * rng.normal();
        inc.dN1 = rng.uniform() < 0.5 ? 1.0 - dt : -dt;
        inc.dN2 = -dt * rng.uniform();
        rep.max_residual = std::max(rep.max_residual, duality_residual(config, model, st, X, xi, inc, dt));
    }
    return rep;
}

}  // namespace spf
