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
#include "spf/pulse.hpp"

#include <cmath>

namespace spf {

ExtendedChannels extended_channels(const MeasurementConfig& config, const SystemModel& model, cplx lambda) {
    if (!config.is_diffusive()) {
        throw ValidationError("extended vacuum filter supports the diffusive schemes qp, qq and sh only");
    }
    const SLHTriple g = build_extended_system(model, lambda, config.splitter);
    ExtendedChannels out;
    out.H = g.H;
    for (const auto& l : g.L) out.dissipators.emplace_back(l);

    const Op4 c1 = g.L[0];
    const Op4 c2 = g.L[1];
    out.measured.push_back(c1);
    if (config.scheme == Scheme::QP) out.measured.push_back(-kI * c2);
    if (config.scheme == Scheme::QQ) out.measured.push_back(c2);
    return out;
}

double extended_gain(const Op4& rho, const Op4& c) { return ((c + c.adjoint()) * rho).trace().real(); }

ExtendedState vacuum_filter_step(const ExtendedState& ext, const std::vector<Op4>& dissipators,
                                 const std::vector<Op4>& c_ops, const Op4& H, const std::vector<double>& dW, double dt,
                                 const std::vector<double>& sigma) {
    if (dW.size() != c_ops.size()) throw ValidationError("vacuum_filter_step: one increment per measured channel");
    if (!sigma.empty() && sigma.size() != c_ops.size()) {
        throw ValidationError("vacuum_filter_step: sigma must list one variance per measured channel");
    }
    for (double s : sigma) {
        if (!(s > 0.0)) throw ValidationError("vacuum_filter_step: measurement covariance is singular");
    }
    const Op4& rho = ext.rho;
    Op4 d = -kI * (H * rho - rho * H);
    for (const auto& l : dissipators) d += dissipator_adjoint(l, rho);
    d *= dt;
    for (std::size_t i = 0; i < c_ops.size(); ++i) {
        const Op4& c = c_ops[i];
        const double beta = sigma.empty() ? 1.0 : 1.0 / sigma[i];
        d += (beta * dW[i]) * (c * rho + rho * c.adjoint() - extended_gain(rho, c) * rho);
    }
    ExtendedState out;
    out.rho = rho + d;
    out.rho = 0.5 * (out.rho + out.rho.adjoint()).eval();
    return out;
}

cplx reduced_expectation(const ExtendedState& ext, int m, int n, const Op2& X, double w) {
    if (m < 0 || m > 1 || n < 0 || n > 1) throw ValidationError("reduced_expectation: indices must be 0 or 1");
    Op2 a;
    double d = 1.0;
    if (m == 1 && n == 1) {
        a = Op2::Identity();
    } else {
        if (w <= kEpsW) throw ValidationError("reduced_expectation: photon fully emitted, extraction is singular");
        if (m == 0 && n == 0) {
            a = basis::excited();
            d = w;
        } else {
            a = (m == 0) ? basis::sigma_plus() : basis::sigma_minus();
            d = std::sqrt(w);
        }
    }
    return (ext.rho.adjoint() * tensor_embed(a, X)).trace() / d;
}

}  // namespace spf
