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

#include "spf/qcore.hpp"

#include <array>
#include <string>
#include <vector>

namespace spf {

inline constexpr double kEpsK = 1e-12;

/// Conditional operator triple. rho01 is always (rho10)^dag and never stored.
struct FilterState {
    Op2 rho11 = basis::ground();
    Op2 rho10 = Op2::Zero();
    Op2 rho00 = basis::ground();

    Op2 rho01() const { return rho10.adjoint(); }
    static FilterState initial() { return {}; }
    static FilterState zero() { return {Op2::Zero(), Op2::Zero(), Op2::Zero()}; }

    FilterState& operator+=(const FilterState& o);
    friend FilterState operator+(FilterState a, const FilterState& b) { return a += b; }
    friend FilterState operator*(double s, const FilterState& a);
};

enum class Scheme { QP, QQ, HomodynePlusCounting, TwoCounting, SingleHomodyneQ, MasterEquationOnly };

/// Short names used in configs and on the command line: qp, qq, hp, pp, sh, me.
std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct MeasurementConfig {
    Scheme scheme = Scheme::MasterEquationOnly;
    BeamSplitter splitter = BeamSplitter::identity();

    Op2 F() const;
    Op2 G() const;
    bool has_counting() const;
    bool is_diffusive() const;
};

/// Rejects counting schemes with S != I.
void validate(const MeasurementConfig& config, const SystemModel& model);

struct Gains {
    double k1 = 0.0, k2 = 0.0;  // QP (k1 also for single homodyne)
    double K1 = 0.0, K2 = 0.0;  // QQ
    double Kh = 0.0;            // homodyne part of homodyne + counting
    double Kp = 0.0;            // photon counting, clamped at 0
};

/// Per-step increments. dN are compensated counting increments.
struct Innovations {
    double dW1 = 0.0, dW2 = 0.0;
    double dN1 = 0.0, dN2 = 0.0;
};

/// Homodyne coefficients c_i and counting weights |s_i1|^2 per channel.
/// A zero coefficient or weight marks an inactive channel.
struct ChannelLayout {
    std::array<cplx, 2> homodyne{0.0, 0.0};
    std::array<double, 2> counting{0.0, 0.0};
    std::array<bool, 2> homodyne_used{false, false};
    std::array<bool, 2> counting_used{false, false};
};
ChannelLayout channel_layout(const MeasurementConfig& config);

/// Averaged (unconditional) generator for arbitrary S.
FilterState unconditional_rhs(const SystemModel& model, const FilterState& st, cplx xi);
/// The master equation; requires S = I.
FilterState me_rhs(const SystemModel& model, const FilterState& st, cplx xi);

/// c Tr[L rho11] + c* Tr[L^dag rho11] + c Tr[S rho01] xi + c* Tr[S^dag rho10] xi*
double homodyne_gain(const SystemModel& model, const FilterState& st, cplx xi, cplx c);
FilterState homodyne_bracket(const SystemModel& model, const FilterState& st, cplx xi, cplx c);
/// Tr[L^dag L rho11] + Tr[L^dag rho01] xi + Tr[L rho10] xi* + Tr[rho00] |xi|^2, clamped at 0.
double counting_rate(const SystemModel& model, const FilterState& st, cplx xi);
/// Jump bracket shared by every counting channel. Zero when the rate is <= kEpsK.
FilterState counting_bracket(const SystemModel& model, const FilterState& st, cplx xi);
/// Exact post-jump state. Rejects a rate <= kEpsK.
FilterState jump_map(const SystemModel& model, const FilterState& st, cplx xi);

Gains gains(const MeasurementConfig& config, const SystemModel& model, const FilterState& st, cplx xi);

/// Unsymmetrized increment drift dt + sum brackets * innovations.
FilterState filter_increment(const MeasurementConfig& config, const SystemModel& model, const FilterState& st,
                             cplx xi, const Innovations& inc, double dt);
/// st + d with rho11 and rho00 symmetrized. Optionally reports the rho11
/// hermiticity residual before symmetrization.
FilterState apply_increment(const FilterState& st, const FilterState& d, double* residual = nullptr);

FilterState me_euler_step(const SystemModel& model, const FilterState& st, cplx xi, double dt);
FilterState step_qp(const SystemModel& model, const FilterState& st, cplx xi, double dW1, double dW2, double dt,
                    const BeamSplitter& sb);
FilterState step_qq(const SystemModel& model, const FilterState& st, cplx xi, double dW1, double dW2, double dt,
                    const BeamSplitter& sb);
FilterState step_hp(const SystemModel& model, const FilterState& st, cplx xi, double dW, bool jump, double dt,
                    const BeamSplitter& sb);
FilterState step_pp(const SystemModel& model, const FilterState& st, cplx xi, bool jump1, bool jump2, double dt,
                    const BeamSplitter& sb);
FilterState step_single_homodyne(const SystemModel& model, const FilterState& st, cplx xi, double dW1, double dt,
                                 const BeamSplitter& sb);

/// Compensated counting increments for the given jump flags.
Innovations counting_innovations(const MeasurementConfig& config, const SystemModel& model, const FilterState& st,
                                 cplx xi, bool jump1, bool jump2, double dt);

/// <e|rho11|e>
double pe(const FilterState& st);
/// Smallest eigenvalue of the Hermitian part.
double min_eig(const Op2& a);

/// d pi^{11}(X), d pi^{10}(X), d pi^{00}(X) with pi^{jk}(X) = Tr[(rho^{jk})^dag X].
struct HeisenbergIncrement {
    cplx d11, d10, d00;
};
HeisenbergIncrement heisenberg_increment(const MeasurementConfig& config, const SystemModel& model,
                                         const FilterState& st, const Op2& X, cplx xi, const Innovations& inc,
                                         double dt);

// Extended (ancilla ⊗ atom) vacuum filter.

struct ExtendedState {
    Op4 rho = tensor_embed(basis::excited(), basis::ground());
    static ExtendedState initial() { return {}; }
};

/// Measured operators c_i and total Hamiltonian of the whole network at coupling lambda.
struct ExtendedChannels {
    std::vector<Op4> dissipators;  // every output channel, measured or not
    std::vector<Op4> measured;     // quadrature operators c_i
    Op4 H;
};
ExtendedChannels extended_channels(const MeasurementConfig& config, const SystemModel& model, cplx lambda);

/// Tr[(c + c^dag) rho]
double extended_gain(const Op4& rho, const Op4& c);

/// drho = L*rho dt + sum_i (c_i rho + rho c_i^dag - Tr[(c_i + c_i^dag) rho] rho) dW_i / sigma_i.
/// sigma holds the diagonal of Sigma / dt (empty means unit). A non-positive entry is rejected.
ExtendedState vacuum_filter_step(const ExtendedState& ext, const std::vector<Op4>& dissipators,
                                 const std::vector<Op4>& c_ops, const Op4& H, const std::vector<double>& dW, double dt,
                                 const std::vector<double>& sigma = {});

/// Tr[rho^dag (A_mn ⊗ X)] / d_mn, A = [[s+s-, s+], [s-, I]], d = [[w, sqrt w], [sqrt w, 1]].
/// m, n are 0 or 1. Rejects w <= kEpsW unless m = n = 1.
cplx reduced_expectation(const ExtendedState& ext, int m, int n, const Op2& X, double w);

}  // namespace spf
