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
#include "spf/pulse.hpp"
#include "spf/stochastic.hpp"

#include <cstdint>
#include <vector>

namespace spf {

struct SimulationConfig {
    SystemModel model;
    PulseShape pulse = PulseShape::gaussian(1.5, 3.0);
    MeasurementConfig measurement;
    double dt = 1e-3;
    double T = 10.0;
    std::uint64_t master_seed = 1;
    std::size_t trajectories = 64;
    std::vector<double> thresholds{0.9};
    unsigned workers = 0;     // 0 selects the hardware concurrency
    std::size_t keep = 64;    // full records retained by run_ensemble

    /// Number of steps; T must be a whole multiple of dt to 1e-9.
    std::size_t steps() const;
    double time(std::size_t n) const { return static_cast<double>(n) * dt; }
    void validate() const;
};

struct IncrementRecord {
    std::vector<double> dW1, dW2;
    std::vector<std::int8_t> jump;  // -1 none, else 0-based channel
};

struct TrajectoryDiagnostics {
    double max_trace_drift = 0.0;          // max |Tr rho11 - 1|
    double min_eigenvalue = 1.0;           // min over the path of the smallest rho11 eigenvalue
    double max_hermiticity_residual = 0.0; // before symmetrization
    bool negativity = false;               // min_eigenvalue < -1e-6
};

struct TrajectoryRecord {
    std::size_t index = 0;
    std::vector<double> t;
    std::vector<double> pe;  // clamped to [0, 1]
    std::vector<double> trace_rho11;
    std::vector<double> min_eig;
    std::vector<std::uint8_t> jump1, jump2;  // set at the grid point closing a step with a detection
    std::vector<double> jump_times1, jump_times2;
    IncrementRecord increments;
    TrajectoryDiagnostics diagnostics;
};

struct MasterPath {
    std::vector<double> t;
    std::vector<double> pe;
    std::vector<double> trace_rho11;
    std::vector<double> min_eig;
    std::vector<FilterState> states;
};

/// Classical RK4 on the grid.
MasterPath solve_master(const SimulationConfig& config);

TrajectoryRecord run_trajectory(const SimulationConfig& config, std::size_t index);
/// Re-integrates from recorded increments instead of the random stream.
TrajectoryRecord replay_trajectory(const SimulationConfig& config, const IncrementRecord& increments,
                                   std::size_t index = 0);

struct TrajectorySummary {
    double max_pe = 0.0;
    std::int64_t first_jump_step = -1;  // grid index of the first post-jump point
    double pre_jump_me_deviation = 0.0; // sup over grid points before the first jump
    double post_jump_max_pe = 0.0;
    TrajectoryDiagnostics diagnostics;
};
TrajectorySummary summarize(const TrajectoryRecord& rec, const std::vector<double>& me_pe);

struct EnsembleResult {
    std::vector<double> t;
    std::vector<double> mean_pe;
    std::vector<double> me_pe;
    std::vector<TrajectorySummary> summaries;
    std::vector<TrajectoryRecord> records;  // first `keep` trajectories
    std::vector<double> thresholds;
    std::vector<std::vector<std::uint32_t>> occupancy;  // per threshold, count with pe >= threshold per grid point
    double mean_me_sup = 0.0;
    unsigned workers_used = 1;
};
EnsembleResult run_ensemble(const SimulationConfig& config);

struct Proportion {
    std::size_t count = 0, n = 0;
    double fraction = 0.0, lo = 0.0, hi = 0.0;  // Wilson 95%
};
Proportion wilson_interval(std::size_t count, std::size_t n);

/// Fraction of trajectories whose max P_e >= threshold.
Proportion exceedance_fraction(const EnsembleResult& result, double threshold);
/// max over t of the fraction with P_e(t) >= threshold. The threshold must be
/// one of the configured thresholds.
Proportion peak_occupancy_fraction(const EnsembleResult& result, double threshold, double* at_time = nullptr);

struct OracleReport {
    std::vector<double> t;
    std::vector<double> pe_reduced;
    std::vector<double> pe_extended;
    double sup_deviation = 0.0;
};
/// Drives the reduced filter and the extended vacuum filter with one
/// measurement record. Noise is drawn on a grid of dt / substeps so runs with
/// different dt can share one Brownian path.
OracleReport oracle_compare(const SimulationConfig& config, std::size_t trajectory_index = 0,
                            std::size_t substeps = 1);

}  // namespace spf
