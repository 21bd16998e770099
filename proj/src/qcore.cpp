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

#include "spf/qcore.hpp"

#include <cmath>

namespace spf {

namespace basis {
Op2 sigma_minus() {
    Op2 m = Op2::Zero();
    m(0, 1) = 1.0;
    return m;
}
Op2 sigma_plus() {
    Op2 m = Op2::Zero();
    m(1, 0) = 1.0;
    return m;
}
Op2 excited() {
    Op2 m = Op2::Zero();
    m(1, 1) = 1.0;
    return m;
}
Op2 ground() {
    Op2 m = Op2::Zero();
    m(0, 0) = 1.0;
    return m;
}
}  // namespace basis

Op4 tensor_embed(const Op2& ancilla, const Op2& system) {
    Op4 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = ancilla(i, j) * system;
        }
    }
    return out;
}

namespace {

Operator identity(Eigen::Index dim) { return Operator::Identity(dim, dim); }
Operator zero(Eigen::Index dim) { return Operator::Zero(dim, dim); }

void require_well_formed(const SLHTriple& g, const char* what) {
    if (g.S.size() != g.channels * g.channels || g.L.size() != g.channels) {
        throw ValidationError(std::string(what) + ": malformed triple");
    }
    const Eigen::Index d = g.dim();
    if (g.H.cols() != d) {
        throw ValidationError(std::string(what) + ": H is not square");
    }
    for (const auto& s : g.S) {
        if (s.rows() != d || s.cols() != d) throw ValidationError(std::string(what) + ": S entry dimension");
    }
    for (const auto& l : g.L) {
        if (l.rows() != d || l.cols() != d) throw ValidationError(std::string(what) + ": L entry dimension");
    }
}

}  // namespace

SLHTriple trivial_system(std::size_t channels, Eigen::Index dim) {
    SLHTriple g;
    g.channels = channels;
    g.S.assign(channels * channels, zero(dim));
    for (std::size_t i = 0; i < channels; ++i) g.s(i, i) = identity(dim);
    g.L.assign(channels, zero(dim));
    g.H = zero(dim);
    return g;
}

SLHTriple single_channel(const Operator& S, const Operator& L, const Operator& H) {
    SLHTriple g;
    g.channels = 1;
    g.S = {S};
    g.L = {L};
    g.H = H;
    require_well_formed(g, "single_channel");
    return g;
}

double channel_unitarity_residual(const SLHTriple& g) {
    require_well_formed(g, "channel_unitarity_residual");
    const std::size_t n = g.channels;
    const Eigen::Index d = g.dim();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Operator sds = zero(d);
            Operator ssd = zero(d);
            for (std::size_t k = 0; k < n; ++k) {
                sds += g.s(k, i).adjoint() * g.s(k, j);
                ssd += g.s(i, k) * g.s(j, k).adjoint();
            }
            if (i == j) {
                sds -= identity(d);
                ssd -= identity(d);
            }
            worst = std::max({worst, sds.cwiseAbs().maxCoeff(), ssd.cwiseAbs().maxCoeff()});
        }
    }
    return worst;
}

Operator liouvillian(const SLHTriple& g, const Operator& rho) {
    require_well_formed(g, "liouvillian");
    require_same_shape(g.H, rho, "liouvillian");
    Operator out = -kI * commutator(g.H, rho);
    for (const auto& l : g.L) out += dissipator_adjoint(l, rho);
    return out;
}

FlaggedOperator liouvillian_checked(const SLHTriple& g, const Operator& rho) {
    return {liouvillian(g, rho), hermiticity_residual(rho) > 1e-12};
}

Operator lindbladian(const SLHTriple& g, const Operator& x) {
    require_well_formed(g, "lindbladian");
    require_same_shape(g.H, x, "lindbladian");
    Operator out = -kI * commutator(x, g.H);
    for (const auto& l : g.L) out += dissipator(l, x);
    return out;
}

SLHTriple series_product(const SLHTriple& g2, const SLHTriple& g1) {
    require_well_formed(g2, "series_product");
    require_well_formed(g1, "series_product");
    if (g1.channels != g2.channels) throw ValidationError("series_product: channel-count mismatch");
    if (g1.dim() != g2.dim()) throw ValidationError("series_product: dimension mismatch");

    const std::size_t n = g1.channels;
    const Eigen::Index d = g1.dim();
    SLHTriple out;
    out.channels = n;
    out.S.assign(n * n, zero(d));
    out.L.assign(n, zero(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) out.s(i, j) += g2.s(i, k) * g1.s(k, j);
        }
        out.L[i] = g2.L[i];
        for (std::size_t k = 0; k < n; ++k) out.L[i] += g2.s(i, k) * g1.L[k];
    }
    Operator cross = zero(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) cross += g2.L[i].adjoint() * g2.s(i, j) * g1.L[j];
    }
    out.H = g1.H + g2.H + operator_imag(cross);
    return out;
}

SLHTriple concatenation_product(const SLHTriple& g1, const SLHTriple& g2) {
    require_well_formed(g1, "concatenation_product");
    require_well_formed(g2, "concatenation_product");
    if (g1.dim() != g2.dim()) throw ValidationError("concatenation_product: dimension mismatch");

    const std::size_t n1 = g1.channels;
    const std::size_t n = n1 + g2.channels;
    const Eigen::Index d = g1.dim();
    SLHTriple out;
    out.channels = n;
    out.S.assign(n * n, zero(d));
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n1; ++j) out.s(i, j) = g1.s(i, j);
    for (std::size_t i = 0; i < g2.channels; ++i)
        for (std::size_t j = 0; j < g2.channels; ++j) out.s(n1 + i, n1 + j) = g2.s(i, j);
    out.L = g1.L;
    out.L.insert(out.L.end(), g2.L.begin(), g2.L.end());
    out.H = g1.H + g2.H;
    return out;
}

// ---------------------------------------------------------------------------
// BeamSplitter

double BeamSplitter::unitarity_residual() const {
    const Op2 id = Op2::Identity();
    return std::max((m_.adjoint() * m_ - id).cwiseAbs().maxCoeff(), (m_ * m_.adjoint() - id).cwiseAbs().maxCoeff());
}

BeamSplitter BeamSplitter::from_entries(cplx s11, cplx s12, cplx s21, cplx s22) {
    Op2 m;
    m << s11, s12, s21, s22;
    BeamSplitter b(m, Entries{});
    const double res = b.unitarity_residual();
    if (!(res <= kInputTolerance)) {
        throw ValidationError("beam splitter entries are not unitary (residual " + std::to_string(res) + ")");
    }
    return b;
}

BeamSplitter BeamSplitter::from_angles(double Theta, double Psi, double Phi, double Lambda) {
    const double c = std::cos(Theta / 2.0);
    const double s = std::sin(Theta / 2.0);
    const cplx sum = std::polar(1.0, (Psi + Phi) / 2.0);
    const cplx diff = std::polar(1.0, (Psi - Phi) / 2.0);
    const cplx global = std::polar(1.0, Lambda / 2.0);
    Op2 m;
    m << c * sum, s * diff, -s * std::conj(diff), c * std::conj(sum);
    return BeamSplitter(global * m, Angles{Theta, Psi, Phi, Lambda});
}

namespace {
void require_reflectivity(double r) {
    if (!(r >= 0.0 && r <= 1.0)) throw ValidationError("beam splitter r must lie in [0, 1]");
}
}  // namespace

BeamSplitter BeamSplitter::from_reduction(double r, double theta) {
    require_reflectivity(r);
    const cplx ph = std::polar(1.0, theta);
    const double t = std::sqrt(1.0 - r * r);
    Op2 m;
    m << t * ph, r * ph, -r * ph, t * ph;
    return BeamSplitter(m, Reduction{r, theta});
}

BeamSplitter BeamSplitter::simulation(double r) {
    require_reflectivity(r);
    const double t = std::sqrt(1.0 - r * r);
    Op2 m;
    m << t, kI * r, kI * r, t;
    return BeamSplitter(m, Simulation{r});
}

BeamSplitter BeamSplitter::with_global_phase(double phi) const {
    return BeamSplitter(std::polar(1.0, phi) * m_, Entries{});
}

BeamSplitter BeamSplitter::with_second_row_phase(double phi) const {
    Op2 m = m_;
    m.row(1) *= std::polar(1.0, phi);
    return BeamSplitter(m, Entries{});
}

// ---------------------------------------------------------------------------
// SystemModel and the extended network

void SystemModel::validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ValidationError("model.kappa must be a finite value >= 0");
    const double ures = (S.adjoint() * S - Op2::Identity()).cwiseAbs().maxCoeff();
    if (!(ures <= BeamSplitter::kInputTolerance)) throw ValidationError("model.S must be unitary");
    if (!(hermiticity_residual(H) <= BeamSplitter::kInputTolerance)) {
        throw ValidationError("model.H must be Hermitian");
    }
}

SLHTriple SystemModel::slh() const { return single_channel(S, L(), H); }

Op4 extended_coupling(const SystemModel& model, cplx lambda) {
    const Op2 id = Op2::Identity();
    return tensor_embed(id, model.L()) + lambda * tensor_embed(basis::sigma_minus(), model.S);
}

SLHTriple build_extended_system(const SystemModel& model, cplx lambda, const BeamSplitter& sb) {
    const Op2 id = Op2::Identity();
    const SLHTriple g1 = single_channel(tensor_embed(id, model.S), tensor_embed(id, model.L()), tensor_embed(id, model.H));
    const SLHTriple ancilla =
        single_channel(Op4::Identity(), lambda * tensor_embed(basis::sigma_minus(), id), Op4::Zero());
    const SLHTriple noise = trivial_system(1, 4);

    SLHTriple splitter = trivial_system(2, 4);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            splitter.s(i, j) = sb.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * Op4::Identity();
        }
    }
    return series_product(splitter, concatenation_product(series_product(g1, ancilla), noise));
}

}  // namespace spf
