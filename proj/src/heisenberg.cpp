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

// Heisenberg-picture increments written against the expectations
// pi^{jk}(X) = Tr[(rho^{jk})^dag X]. Nothing here reuses the Schrodinger
// brackets, so the two forms can check each other.

#include "spf/filters.hpp"

namespace spf {

namespace {

struct Expectations {
    const FilterState& st;
    cplx p11(const Op2& x) const { return (st.rho11.adjoint() * x).trace(); }
    cplx p10(const Op2& x) const { return (st.rho10.adjoint() * x).trace(); }
    cplx p01(const Op2& x) const { return (st.rho10 * x).trace(); }
    cplx p00(const Op2& x) const { return (st.rho00.adjoint() * x).trace(); }
};

}  // namespace

HeisenbergIncrement heisenberg_increment(const MeasurementConfig& config, const SystemModel& model,
                                         const FilterState& st, const Op2& X, cplx xi, const Innovations& inc,
                                         double dt) {
    const Expectations pi{st};
    const Op2 L = model.L();
    const Op2 Ld = L.adjoint();
    const Op2& S = model.S;
    const Op2 Sd = S.adjoint();
    const Op2 I = Op2::Identity();
    const cplx xic = std::conj(xi);
    const double xi2 = std::norm(xi);

    // Lindbladian -i[X, H] + L^dag X L - (L^dag L X + X L^dag L) / 2
    const Op2 LX = -kI * (X * model.H - model.H * X) + Ld * X * L - 0.5 * (Ld * L * X + X * Ld * L);
    const Op2 XL_comm = X * L - L * X;
    const Op2 LdX_comm = Ld * X - X * Ld;

    HeisenbergIncrement h;
    h.d11 = (pi.p11(LX) + pi.p01(Sd * XL_comm) * xic + pi.p10(LdX_comm * S) * xi + pi.p00(Sd * X * S - X) * xi2) * dt;
    h.d10 = (pi.p10(LX) + pi.p00(Sd * XL_comm) * xic) * dt;
    h.d00 = pi.p00(LX) * dt;

    const ChannelLayout ch = channel_layout(config);
    const std::array<double, 2> dW{inc.dW1, inc.dW2};
    for (int i = 0; i < 2; ++i) {
        if (!ch.homodyne_used[i]) continue;
        const cplx c = ch.homodyne[i];
        const cplx cc = std::conj(c);
        const cplx k = c * pi.p11(L) + cc * pi.p11(Ld) + c * xi * pi.p10(S) + cc * xic * pi.p01(Sd);
        h.d11 += (c * pi.p11(X * L) + cc * pi.p11(Ld * X) + c * xi * pi.p10(X * S) + cc * xic * pi.p01(Sd * X) -
                  k * pi.p11(X)) *
                 dW[i];
        h.d10 += (c * pi.p10(X * L) + cc * pi.p10(Ld * X) + cc * xic * pi.p00(Sd * X) - k * pi.p10(X)) * dW[i];
        h.d00 += (c * pi.p00(X * L) + cc * pi.p00(Ld * X) - k * pi.p00(X)) * dW[i];
    }

    if (ch.counting_used[0] || ch.counting_used[1]) {
        const cplx kp_raw = pi.p11(Ld * L) + xi * pi.p10(Ld) + xic * pi.p01(L) + xi2 * pi.p00(I);
        const double kp = std::max(0.0, kp_raw.real());
        if (kp > kEpsK) {
            const Op2 LdXL = Ld * X * L;
            const cplx j11 = (pi.p11(LdXL) + xic * pi.p01(X * L) + xi * pi.p10(Ld * X) + xi2 * pi.p00(X)) / kp -
                             pi.p11(X);
            const cplx j10 = (pi.p10(LdXL) + xic * pi.p00(X * L)) / kp - pi.p10(X);
            const cplx j00 = pi.p00(LdXL) / kp - pi.p00(X);
            const std::array<double, 2> dN{inc.dN1, inc.dN2};
            for (int i = 0; i < 2; ++i) {
                if (!ch.counting_used[i]) continue;
                h.d11 += j11 * dN[i];
                h.d10 += j10 * dN[i];
                h.d00 += j00 * dN[i];
            }
        }
    }
    return h;
}

}  // namespace spf
