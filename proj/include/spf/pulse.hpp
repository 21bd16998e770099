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

#include <string>
#include <vector>

namespace spf {

inline constexpr double kEpsW = 1e-12;

/// (Omega^2 / 2 pi)^{1/4} exp(-Omega^2 (t - t0)^2 / 4)
cplx xi_gaussian(double omega, double t0, double t);
/// sqrt(gamma) e^{gamma (t - t1)/2} for t <= t1 (rising), or
/// sqrt(gamma) e^{-gamma (t - t1)/2} for t >= t1 (decaying); zero elsewhere.
cplx xi_exponential(double gamma, double t1, bool rising, double t);

/// Single-photon wavepacket xi(t) with tail weight w(t) = int_t^inf |xi|^2.
class PulseShape {
   public:
    enum class Kind { Gaussian, Exponential, Tabulated, Vacuum };

    static PulseShape gaussian(double omega, double t0);
    static PulseShape exponential(double gamma, double t1, bool rising);
    /// Uniform grid starting at t_start; samples are rescaled to unit norm.
    static PulseShape tabulated(double t_start, double step, std::vector<cplx> samples);
    /// Two columns (t, xi) with a header row. The t column must be uniform.
    static PulseShape from_csv(const std::string& path);
    static PulseShape vacuum();

    Kind kind() const { return kind_; }
    double omega() const { return omega_; }
    double t0() const { return t0_; }
    double gamma() const { return gamma_; }
    double t1() const { return t1_; }
    bool rising() const { return rising_; }
    const std::vector<cplx>& samples() const { return samples_; }
    double table_start() const { return t_start_; }
    double table_step() const { return step_; }

    cplx xi(double t) const;
    double w(double t) const;
    /// xi / sqrt(w), or 0 once w <= kEpsW.
    cplx lambda(double t) const;
    /// Closed-form (or exact piecewise) L2 norm over the whole support.
    double norm() const;

   private:
    PulseShape() = default;
    Kind kind_ = Kind::Vacuum;
    double omega_ = 0.0, t0_ = 0.0, gamma_ = 0.0, t1_ = 0.0;
    bool rising_ = false;
    double t_start_ = 0.0, step_ = 0.0;
    std::vector<cplx> samples_;
    std::vector<double> tail_;  // tail_[i] = int_{t_i}^{end} |xi|^2
};

double w_of(const PulseShape& pulse, double t);
cplx lambda_of(const PulseShape& pulse, double t);

}  // namespace spf
