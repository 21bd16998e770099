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

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace spf {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + " must be a finite value > 0");
}

// Exact integral of |a + (b - a) s|^2 over s in [0, 1], times h.
double segment_energy(cplx a, cplx b, double h) {
    return h * (std::norm(a) + std::real(a * std::conj(b)) + std::norm(b)) / 3.0;
}

}  // namespace

cplx xi_gaussian(double omega, double t0, double t) {
    require_positive(omega, "pulse.omega");
    const double amp = std::pow(omega * omega / (2.0 * std::numbers::pi), 0.25);
    const double u = t - t0;
    return amp * std::exp(-omega * omega * u * u / 4.0);
}

cplx xi_exponential(double gamma, double t1, bool rising, double t) {
    require_positive(gamma, "pulse.gamma");
    if (rising ? t > t1 : t < t1) return 0.0;
    return std::sqrt(gamma) * std::exp(0.5 * gamma * (rising ? t - t1 : t1 - t));
}

PulseShape PulseShape::gaussian(double omega, double t0) {
    require_positive(omega, "pulse.omega");
    if (!std::isfinite(t0)) throw ValidationError("pulse.t0 must be finite");
    PulseShape p;
    p.kind_ = Kind::Gaussian;
    p.omega_ = omega;
    p.t0_ = t0;
    return p;
}

PulseShape PulseShape::exponential(double gamma, double t1, bool rising) {
    require_positive(gamma, "pulse.gamma");
    if (!std::isfinite(t1)) throw ValidationError("pulse.t1 must be finite");
    PulseShape p;
    p.kind_ = Kind::Exponential;
    p.gamma_ = gamma;
    p.t1_ = t1;
    p.rising_ = rising;
    return p;
}

PulseShape PulseShape::tabulated(double t_start, double step, std::vector<cplx> samples) {
    require_positive(step, "pulse table step");
    if (samples.size() < 2) throw ValidationError("pulse table needs at least two samples");
    double energy = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) energy += segment_energy(samples[i], samples[i + 1], step);
    if (!(energy > 0.0) || !std::isfinite(energy)) throw ValidationError("pulse table has zero or invalid energy");
    const double scale = 1.0 / std::sqrt(energy);
    for (auto& s : samples) s *= scale;

    PulseShape p;
    p.kind_ = Kind::Tabulated;
    p.t_start_ = t_start;
    p.step_ = step;
    p.samples_ = std::move(samples);
    p.tail_.assign(p.samples_.size(), 0.0);
    for (std::size_t i = p.samples_.size() - 1; i-- > 0;) {
        p.tail_[i] = p.tail_[i + 1] + segment_energy(p.samples_[i], p.samples_[i + 1], step);
    }
    return p;
}

PulseShape PulseShape::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open pulse table '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("pulse table '" + path + "' is empty");

    std::vector<double> ts;
    std::vector<cplx> xs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cols;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                cols.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                throw ValidationError(path + ":" + std::to_string(lineno) + ": not a number");
            }
        }
        if (cols.size() != 2 && cols.size() != 3) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected columns t,xi[,xi_im]");
        }
        ts.push_back(cols[0]);
        xs.emplace_back(cols[1], cols.size() == 3 ? cols[2] : 0.0);
    }
    if (ts.size() < 2) throw ValidationError("pulse table needs at least two samples");
    const double step = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (std::abs(ts[i] - ts[i - 1] - step) > 1e-9 * std::max(1.0, std::abs(step))) {
            throw ValidationError(path + ": time column is not a uniform grid");
        }
    }
    return tabulated(ts.front(), step, std::move(xs));
}

PulseShape PulseShape::vacuum() { return PulseShape(); }

cplx PulseShape::xi(double t) const {
    switch (kind_) {
        case Kind::Gaussian:
            return xi_gaussian(omega_, t0_, t);
        case Kind::Exponential:
            return xi_exponential(gamma_, t1_, rising_, t);
        case Kind::Tabulated: {
            const double u = (t - t_start_) / step_;
            const double last = static_cast<double>(samples_.size() - 1);
            if (u < 0.0 || u > last) return 0.0;
            const auto i = std::min(static_cast<std::size_t>(u), samples_.size() - 2);
            const double f = u - static_cast<double>(i);
            return samples_[i] + f * (samples_[i + 1] - samples_[i]);
        }
        case Kind::Vacuum:
            break;
    }
    return 0.0;
}

double PulseShape::w(double t) const {
    switch (kind_) {
        case Kind::Gaussian:
            return 0.5 * std::erfc(omega_ * (t - t0_) / std::numbers::sqrt2);
        case Kind::Exponential:
            if (rising_) return t >= t1_ ? 0.0 : -std::expm1(gamma_ * (t - t1_));
            return t <= t1_ ? 1.0 : std::exp(-gamma_ * (t - t1_));
        case Kind::Tabulated: {
            const double u = (t - t_start_) / step_;
            const double last = static_cast<double>(samples_.size() - 1);
            if (u <= 0.0) return tail_.front();
            if (u >= last) return 0.0;
            const auto i = std::min(static_cast<std::size_t>(u), samples_.size() - 2);
            const double f = u - static_cast<double>(i);
            const cplx here = samples_[i] + f * (samples_[i + 1] - samples_[i]);
            return tail_[i + 1] + segment_energy(here, samples_[i + 1], (1.0 - f) * step_);
        }
        case Kind::Vacuum:
            break;
    }
    return 0.0;
}

cplx PulseShape::lambda(double t) const {
    const double ww = w(t);
    if (ww <= kEpsW) return 0.0;
    return xi(t) / std::sqrt(ww);
}

double PulseShape::norm() const {
    switch (kind_) {
        case Kind::Gaussian:
        case Kind::Exponential:
            return 1.0;
        case Kind::Tabulated:
            return std::sqrt(tail_.front());
        case Kind::Vacuum:
            break;
    }
    return 0.0;
}

double w_of(const PulseShape& pulse, double t) { return pulse.w(t); }
cplx lambda_of(const PulseShape& pulse, double t) { return pulse.lambda(t); }

}  // namespace spf
