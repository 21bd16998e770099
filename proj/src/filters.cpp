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

#include "spf/filters.hpp"

#include <cmath>

namespace spf {

FilterState& FilterState::operator+=(const FilterState& o) {
    rho11 += o.rho11;
    rho10 += o.rho10;
    rho00 += o.rho00;
    return *this;
}

FilterState operator*(double s, const FilterState& a) { return {s * a.rho11, s * a.rho10, s * a.rho00}; }

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::QP:
            return "qp";
        case Scheme::QQ:
            return "qq";
        case Scheme::HomodynePlusCounting:
            return "hp";
        case Scheme::TwoCounting:
            return "pp";
        case Scheme::SingleHomodyneQ:
            return "sh";
        case Scheme::MasterEquationOnly:
            return "me";
    }
    return "?";
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : {Scheme::QP, Scheme::QQ, Scheme::HomodynePlusCounting, Scheme::TwoCounting,
                     Scheme::SingleHomodyneQ, Scheme::MasterEquationOnly}) {
        if (scheme_name(s) == name) return s;
    }
    throw ValidationError("unknown scheme '" + name + "' (expected qp, qq, hp, pp, sh or me)");
}

Op2 MeasurementConfig::F() const {
    Op2 f = Op2::Zero();
    switch (scheme) {
        case Scheme::QP:
            f(0, 0) = 1.0;
            f(1, 1) = -kI;
            break;
        case Scheme::QQ:
            f = Op2::Identity();
            break;
        case Scheme::HomodynePlusCounting:
        case Scheme::SingleHomodyneQ:
            f(0, 0) = 1.0;
            break;
        default:
            break;
    }
    return f;
}

Op2 MeasurementConfig::G() const {
    Op2 g = Op2::Zero();
    if (scheme == Scheme::HomodynePlusCounting) g(1, 1) = 1.0;
    if (scheme == Scheme::TwoCounting) g = Op2::Identity();
    return g;
}

bool MeasurementConfig::has_counting() const {
    return scheme == Scheme::HomodynePlusCounting || scheme == Scheme::TwoCounting;
}

bool MeasurementConfig::is_diffusive() const {
    return scheme == Scheme::QP || scheme == Scheme::QQ || scheme == Scheme::SingleHomodyneQ;
}

void validate(const MeasurementConfig& config, const SystemModel& model) {
    model.validate();
    if (config.has_counting() && !model.scattering_is_identity()) {
        throw ValidationError("scheme '" + scheme_name(config.scheme) + "' has a counting channel and requires S = I");
    }
}

ChannelLayout channel_layout(const MeasurementConfig& config) {
    const BeamSplitter& sb = config.splitter;
    ChannelLayout c;
    switch (config.scheme) {
        case Scheme::QP:
            c.homodyne = {sb.s11(), -kI * sb.s21()};
            break;
        case Scheme::QQ:
            c.homodyne = {sb.s11(), sb.s21()};
            break;
        case Scheme::SingleHomodyneQ:
            c.homodyne = {sb.s11(), 0.0};
            break;
        case Scheme::HomodynePlusCounting:
            c.homodyne = {sb.s11(), 0.0};
            c.counting = {0.0, std::norm(sb.s21())};
            break;
        case Scheme::TwoCounting:
            c.counting = {std::norm(sb.s11()), std::norm(sb.s21())};
            break;
        case Scheme::MasterEquationOnly:
            break;
    }
    for (int i = 0; i < 2; ++i) {
        c.homodyne_used[i] = c.homodyne[i] != cplx(0.0);
        c.counting_used[i] = c.counting[i] != 0.0;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Generators and gains

FilterState unconditional_rhs(const SystemModel& model, const FilterState& st, cplx xi) {
    const Op2 L = model.L();
    const Op2 Ld = L.adjoint();
    const Op2& S = model.S;
    const Op2 rho01 = st.rho01();
    const cplx xic = std::conj(xi);

    auto liou = [&](const Op2& r) -> Op2 { return -kI * commutator(model.H, r) + dissipator_adjoint(L, r); };

    FilterState d;
    d.rho11 = liou(st.rho11) + commutator(S * rho01, Ld) * xi + commutator(L, st.rho10 * S.adjoint()) * xic +
              (S * st.rho00 * S.adjoint() - st.rho00) * std::norm(xi);
    d.rho10 = liou(st.rho10) + commutator(S * st.rho00, Ld) * xi;
    d.rho00 = liou(st.rho00);
    return d;
}

FilterState me_rhs(const SystemModel& model, const FilterState& st, cplx xi) {
    if (!model.scattering_is_identity()) {
        throw ValidationError("me_rhs: the master equation form assumes S = I; use unconditional_rhs for general S");
    }
    return unconditional_rhs(model, st, xi);
}

double homodyne_gain(const SystemModel& model, const FilterState& st, cplx xi, cplx c) {
    const Op2 L = model.L();
    const cplx z = c * (L * st.rho11).trace() + c * (model.S * st.rho01()).trace() * xi;
    return 2.0 * z.real();
}

FilterState homodyne_bracket(const SystemModel& model, const FilterState& st, cplx xi, cplx c) {
    const Op2 L = model.L();
    const Op2 Ld = L.adjoint();
    const Op2& S = model.S;
    const cplx cc = std::conj(c);
    const cplx xic = std::conj(xi);
    const double k = homodyne_gain(model, st, xi, c);

    FilterState b;
    b.rho11 = cc * st.rho11 * Ld + c * L * st.rho11 + (cc * xic) * st.rho10 * S.adjoint() +
              (c * xi) * S * st.rho01() - k * st.rho11;
    b.rho10 = cc * st.rho10 * Ld + c * L * st.rho10 + (c * xi) * S * st.rho00 - k * st.rho10;
    b.rho00 = cc * st.rho00 * Ld + c * L * st.rho00 - k * st.rho00;
    return b;
}

double counting_rate(const SystemModel& model, const FilterState& st, cplx xi) {
    const Op2 L = model.L();
    const Op2 Ld = L.adjoint();
    const cplx k = (Ld * L * st.rho11).trace() + (Ld * st.rho01()).trace() * xi +
                   (L * st.rho10).trace() * std::conj(xi) + st.rho00.trace() * std::norm(xi);
    return std::max(0.0, k.real());
}

namespace {

FilterState jump_numerator(const SystemModel& model, const FilterState& st, cplx xi) {
    const Op2 L = model.L();
    const Op2 Ld = L.adjoint();
    FilterState n;
    n.rho11 = L * st.rho11 * Ld + st.rho01() * Ld * xi + L * st.rho10 * std::conj(xi) + st.rho00 * std::norm(xi);
    n.rho10 = L * st.rho10 * Ld + st.rho00 * Ld * xi;
    n.rho00 = L * st.rho00 * Ld;
    return n;
}

}  // namespace

FilterState jump_map(const SystemModel& model, const FilterState& st, cplx xi) {
    const double kp = counting_rate(model, st, xi);
    if (kp <= kEpsK) throw ValidationError("jump_map: counting rate is zero, a detection is impossible");
    return (1.0 / kp) * jump_numerator(model, st, xi);
}

FilterState counting_bracket(const SystemModel& model, const FilterState& st, cplx xi) {
    const double kp = counting_rate(model, st, xi);
    if (kp <= kEpsK) return FilterState::zero();
    FilterState b = (1.0 / kp) * jump_numerator(model, st, xi);
    b.rho11 -= st.rho11;
    b.rho10 -= st.rho10;
    b.rho00 -= st.rho00;
    return b;
}

Gains gains(const MeasurementConfig& config, const SystemModel& model, const FilterState& st, cplx xi) {
    const ChannelLayout ch = channel_layout(config);
    Gains g;
    switch (config.scheme) {
        case Scheme::QP:
            g.k1 = homodyne_gain(model, st, xi, ch.homodyne[0]);
            g.k2 = homodyne_gain(model, st, xi, ch.homodyne[1]);
            break;
        case Scheme::QQ:
            g.K1 = homodyne_gain(model, st, xi, ch.homodyne[0]);
            g.K2 = homodyne_gain(model, st, xi, ch.homodyne[1]);
            break;
        case Scheme::SingleHomodyneQ:
            g.k1 = homodyne_gain(model, st, xi, ch.homodyne[0]);
            break;
        case Scheme::HomodynePlusCounting:
            g.Kh = homodyne_gain(model, st, xi, ch.homodyne[0]);
            g.Kp = counting_rate(model, st, xi);
            break;
        case Scheme::TwoCounting:
            g.Kp = counting_rate(model, st, xi);
            break;
        case Scheme::MasterEquationOnly:
            break;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Steppers

FilterState filter_increment(const MeasurementConfig& config, const SystemModel& model, const FilterState& st,
                             cplx xi, const Innovations& inc, double dt) {
    const ChannelLayout ch = channel_layout(config);
    FilterState d = dt * unconditional_rhs(model, st, xi);

    const std::array<double, 2> dW{inc.dW1, inc.dW2};
    for (int i = 0; i < 2; ++i) {
        if (ch.homodyne_used[i]) d += dW[i] * homodyne_bracket(model, st, xi, ch.homodyne[i]);
    }
    if (ch.counting_used[0] || ch.counting_used[1]) {
        const FilterState b = counting_bracket(model, st, xi);
        const std::array<double, 2> dN{inc.dN1, inc.dN2};
        for (int i = 0; i < 2; ++i) {
            if (ch.counting_used[i]) d += dN[i] * b;
        }
    }
    return d;
}

FilterState apply_increment(const FilterState& st, const FilterState& d, double* residual) {
    FilterState out = st;
    out += d;
    if (residual) *residual = hermiticity_residual(out.rho11);
    out.rho11 = 0.5 * (out.rho11 + out.rho11.adjoint()).eval();
    out.rho00 = 0.5 * (out.rho00 + out.rho00.adjoint()).eval();
    return out;
}

FilterState me_euler_step(const SystemModel& model, const FilterState& st, cplx xi, double dt) {
    return apply_increment(st, dt * me_rhs(model, st, xi));
}

namespace {

FilterState diffusive_step(Scheme scheme, const SystemModel& model, const FilterState& st, cplx xi, double dW1,
                           double dW2, double dt, const BeamSplitter& sb) {
    const MeasurementConfig config{scheme, sb};
    Innovations inc;
    inc.dW1 = dW1;
    inc.dW2 = dW2;
    return apply_increment(st, filter_increment(config, model, st, xi, inc, dt));
}

}  // namespace

FilterState step_qp(const SystemModel& model, const FilterState& st, cplx xi, double dW1, double dW2, double dt,
                    const BeamSplitter& sb) {
    return diffusive_step(Scheme::QP, model, st, xi, dW1, dW2, dt, sb);
}

FilterState step_qq(const SystemModel& model, const FilterState& st, cplx xi, double dW1, double dW2, double dt,
                    const BeamSplitter& sb) {
    return diffusive_step(Scheme::QQ, model, st, xi, dW1, dW2, dt, sb);
}

FilterState step_single_homodyne(const SystemModel& model, const FilterState& st, cplx xi, double dW1, double dt,
                                 const BeamSplitter& sb) {
    return diffusive_step(Scheme::SingleHomodyneQ, model, st, xi, dW1, 0.0, dt, sb);
}

Innovations counting_innovations(const MeasurementConfig& config, const SystemModel& model, const FilterState& st,
                                 cplx xi, bool jump1, bool jump2, double dt) {
    if (jump1 && jump2) throw ValidationError("at most one counting channel may fire per step");
    const ChannelLayout ch = channel_layout(config);
    const double kp = counting_rate(model, st, xi);
    const std::array<bool, 2> jumps{jump1, jump2};
    std::array<double, 2> dN{0.0, 0.0};
    for (int i = 0; i < 2; ++i) {
        if (jumps[i] && (!ch.counting_used[i] || kp <= kEpsK)) {
            throw ValidationError("detection requested on channel " + std::to_string(i + 1) + " with zero rate");
        }
        if (ch.counting_used[i]) dN[i] = (jumps[i] ? 1.0 : 0.0) - ch.counting[i] * kp * dt;
    }
    Innovations inc;
    inc.dN1 = dN[0];
    inc.dN2 = dN[1];
    return inc;
}

FilterState step_hp(const SystemModel& model, const FilterState& st, cplx xi, double dW, bool jump, double dt,
                    const BeamSplitter& sb) {
    const MeasurementConfig config{Scheme::HomodynePlusCounting, sb};
    validate(config, model);
    Innovations inc = counting_innovations(config, model, st, xi, false, jump, dt);
    inc.dW1 = dW;
    return apply_increment(st, filter_increment(config, model, st, xi, inc, dt));
}

FilterState step_pp(const SystemModel& model, const FilterState& st, cplx xi, bool jump1, bool jump2, double dt,
                    const BeamSplitter& sb) {
    const MeasurementConfig config{Scheme::TwoCounting, sb};
    validate(config, model);
    const Innovations inc = counting_innovations(config, model, st, xi, jump1, jump2, dt);
    return apply_increment(st, filter_increment(config, model, st, xi, inc, dt));
}

double pe(const FilterState& st) { return st.rho11(1, 1).real(); }

double min_eig(const Op2& a) {
    const double p = a(0, 0).real();
    const double q = a(1, 1).real();
    const cplx b = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
    const double h = 0.5 * (p - q);
    return 0.5 * (p + q) - std::sqrt(h * h + std::norm(b));
}

}  // namespace spf
