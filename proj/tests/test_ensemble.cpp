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


#include "spf/ensemble.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace spf;

namespace {

SimulationConfig make(Scheme s, double r, std::size_t n = 8) {
    SimulationConfig c;
    c.measurement = {s, BeamSplitter::simulation(r)};
    c.trajectories = n;
    c.master_seed = 7;
    return c;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST(Master, VacuumStaysInGround) {
    SimulationConfig c;
    c.pulse = PulseShape::vacuum();
    const MasterPath p = solve_master(c);
    EXPECT_EQ(max_of(p.pe), 0.0);
    EXPECT_EQ(p.t.size(), 10001u);
}

TEST(Master, GaussianPeakExcitation) {
    const MasterPath p = solve_master(SimulationConfig{});
    EXPECT_NEAR(max_of(p.pe), 0.80, 0.02);
    EXPECT_LE(sup_diff(p.trace_rho11, std::vector<double>(p.t.size(), 1.0)), 1e-12);
}

TEST(Master, RisingExponentialNearlyFullExcitation) {
    SimulationConfig c;
    c.pulse = PulseShape::exponential(1.0, 8.0, true);
    EXPECT_GE(max_of(solve_master(c).pe), 0.99);
}

TEST(Master, RungeKuttaConvergesAtFourthOrder) {
    SimulationConfig a, b, ref;
    a.dt = 0.02;
    b.dt = 0.01;
    ref.dt = 1e-3;
    const MasterPath pa = solve_master(a), pb = solve_master(b), pr = solve_master(ref);
    const double ea = std::abs(pa.pe[200] - pr.pe[4000]);
    const double eb = std::abs(pb.pe[400] - pr.pe[4000]);
    EXPECT_GT(ea / eb, 12.0);
}

TEST(Trajectory, MasterSchemeEqualsSolver) {
    const SimulationConfig c = make(Scheme::MasterEquationOnly, 0.0);
    EXPECT_EQ(run_trajectory(c, 3).pe, solve_master(c).pe);
}

TEST(Trajectory, DeterministicAndReplayable) {
    for (Scheme s : {Scheme::QP, Scheme::HomodynePlusCounting, Scheme::TwoCounting}) {
        const SimulationConfig c = make(s, 0.5);
        const TrajectoryRecord a = run_trajectory(c, 4), b = run_trajectory(c, 4);
        EXPECT_EQ(a.pe, b.pe);
        EXPECT_EQ(a.increments.dW1, b.increments.dW1);
        EXPECT_EQ(a.increments.jump, b.increments.jump);
        const TrajectoryRecord r = replay_trajectory(c, a.increments, 4);
        EXPECT_EQ(r.pe, a.pe) << scheme_name(s);
        EXPECT_NE(run_trajectory(c, 5).pe, a.pe);
    }
}

TEST(Trajectory, SeriesShapes) {
    const TrajectoryRecord r = run_trajectory(make(Scheme::TwoCounting, 0.5), 0);
    const std::size_t n = r.t.size();
    EXPECT_EQ(n, 10001u);
    EXPECT_EQ(r.pe.size(), n);
    EXPECT_EQ(r.trace_rho11.size(), n);
    EXPECT_EQ(r.min_eig.size(), n);
    EXPECT_EQ(r.jump1.size(), n);
    EXPECT_EQ(r.increments.jump.size(), n - 1);
    for (double p : r.pe) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
    for (double t : r.jump_times1) EXPECT_TRUE(std::binary_search(r.t.begin(), r.t.end(), t));
}

TEST(Trajectory, IdealTwoHomodyneEqualsSingleHomodyne) {
    const SimulationConfig qp = make(Scheme::QP, 0.0), sh = make(Scheme::SingleHomodyneQ, 0.0);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(run_trajectory(qp, i).pe, run_trajectory(sh, i).pe);
}

TEST(Trajectory, IdealMixedSchemeNeverJumps) {
    const SimulationConfig hp = make(Scheme::HomodynePlusCounting, 0.0), sh = make(Scheme::SingleHomodyneQ, 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
        const TrajectoryRecord a = run_trajectory(hp, i);
        EXPECT_TRUE(a.jump_times1.empty());
        EXPECT_TRUE(a.jump_times2.empty());
        EXPECT_EQ(a.pe, run_trajectory(sh, i).pe);
    }
}

TEST(Trajectory, TraceDriftBounded) {
    for (Scheme s : {Scheme::QP, Scheme::QQ, Scheme::SingleHomodyneQ, Scheme::HomodynePlusCounting,
                     Scheme::TwoCounting}) {
        const SimulationConfig c = make(s, 1.0 / std::numbers::sqrt2);
        for (std::size_t i = 0; i < 4; ++i) {
            const TrajectoryRecord r = run_trajectory(c, i);
            EXPECT_LE(r.diagnostics.max_trace_drift, 1e-3) << scheme_name(s);
            EXPECT_LE(r.diagnostics.max_hermiticity_residual, 1e-10) << scheme_name(s);
        }
    }
}

TEST(Trajectory, TwoCountingPreJumpFollowsMasterEquation) {
    const SimulationConfig c = make(Scheme::TwoCounting, 0.5);
    const MasterPath me = solve_master(c);
    std::size_t jumped = 0;
    for (std::size_t i = 0; i < 16; ++i) {
        const TrajectorySummary s = summarize(run_trajectory(c, i), me.pe);
        if (s.first_jump_step >= 0) ++jumped;
        EXPECT_LE(s.pre_jump_me_deviation, 5e-3) << "trajectory " << i << ", first jump at step " << s.first_jump_step;
        if (s.first_jump_step >= 0) {
            EXPECT_LT(s.post_jump_max_pe, 1e-3);
        }
    }
    EXPECT_GT(jumped, 0u);
}

TEST(Trajectory, RejectsInvalidConfig) {
    SimulationConfig c = make(Scheme::QP, 0.0);
    c.dt = 0.0;
    EXPECT_THROW(run_trajectory(c, 0), ValidationError);
    c = make(Scheme::QP, 0.0);
    c.T = 10.0005;
    EXPECT_THROW(run_trajectory(c, 0), ValidationError);
    c = make(Scheme::TwoCounting, 0.5);
    c.model.S = -Op2::Identity();
    EXPECT_THROW(run_trajectory(c, 0), ValidationError);
    const SimulationConfig ok = make(Scheme::QP, 0.0);
    IncrementRecord short_record;
    EXPECT_THROW(replay_trajectory(ok, short_record), ValidationError);
}

TEST(Ensemble, SingleMemberMeanIsTheTrajectory) {
    const SimulationConfig c = make(Scheme::QP, 0.3, 1);
    const EnsembleResult r = run_ensemble(c);
    EXPECT_EQ(r.mean_pe, run_trajectory(c, 0).pe);
    ASSERT_EQ(r.records.size(), 1u);
}

TEST(Ensemble, MeanIsArithmeticMean) {
    SimulationConfig c = make(Scheme::HomodynePlusCounting, 0.5, 70);
    c.keep = 70;
    const EnsembleResult r = run_ensemble(c);
    ASSERT_EQ(r.records.size(), 70u);
    double dev = 0.0;
    for (std::size_t k = 0; k < r.t.size(); ++k) {
        double s = 0.0;
        for (const auto& rec : r.records) s += rec.pe[k];
        dev = std::max(dev, std::abs(s / 70.0 - r.mean_pe[k]));
    }
    EXPECT_LE(dev, 1e-12);
}

TEST(Ensemble, WorkerCountInvariant) {
    SimulationConfig c = make(Scheme::TwoCounting, 0.6, 80);
    c.workers = 1;
    const EnsembleResult a = run_ensemble(c);
    c.workers = 3;
    const EnsembleResult b = run_ensemble(c);
    EXPECT_EQ(a.mean_pe, b.mean_pe);
    EXPECT_EQ(a.occupancy, b.occupancy);
    ASSERT_EQ(a.summaries.size(), b.summaries.size());
    for (std::size_t i = 0; i < a.summaries.size(); ++i) EXPECT_EQ(a.summaries[i].max_pe, b.summaries[i].max_pe);
    EXPECT_EQ(b.workers_used, 3u);
}

TEST(Ensemble, OccupancyCountsMembers) {
    SimulationConfig c = make(Scheme::QP, 0.0, 20);
    c.thresholds = {0.5, 0.9};
    c.keep = 20;
    const EnsembleResult r = run_ensemble(c);
    ASSERT_EQ(r.occupancy.size(), 2u);
    for (std::size_t k = 0; k < r.t.size(); k += 997) {
        std::uint32_t n = 0;
        for (const auto& rec : r.records) n += rec.pe[k] >= 0.5;
        EXPECT_EQ(r.occupancy[0][k], n);
    }
    double at = -1.0;
    const Proportion p = peak_occupancy_fraction(r, 0.9, &at);
    EXPECT_GE(at, 0.0);
    EXPECT_LE(p.fraction, exceedance_fraction(r, 0.9).fraction);
    EXPECT_THROW(peak_occupancy_fraction(r, 0.7), ValidationError);
}

TEST(Statistics, WilsonInterval) {
    const Proportion a = wilson_interval(33, 100);
    EXPECT_DOUBLE_EQ(a.fraction, 0.33);
    EXPECT_NEAR(a.lo, 0.2456312273412803, 1e-12);
    EXPECT_NEAR(a.hi, 0.42694656204909476, 1e-12);
    const Proportion b = wilson_interval(0, 256);
    EXPECT_EQ(b.lo, 0.0);
    EXPECT_NEAR(b.hi, 0.014783856425871437, 1e-12);
    const Proportion c = wilson_interval(1, 1);
    EXPECT_NEAR(c.lo, 0.2065493143772374, 1e-12);
    EXPECT_EQ(c.hi, 1.0);
}

TEST(Statistics, ExceedanceEdgeCases) {
    SimulationConfig c = make(Scheme::QP, 0.0, 5);
    c.pulse = PulseShape::vacuum();
    const EnsembleResult vac = run_ensemble(c);
    EXPECT_EQ(exceedance_fraction(vac, 0.5).fraction, 0.0);

    EnsembleResult one;
    one.summaries.resize(1);
    one.summaries[0].max_pe = 0.95;
    EXPECT_EQ(exceedance_fraction(one, 0.9).fraction, 1.0);
    EXPECT_THROW(exceedance_fraction(one, 1.0), ValidationError);
}

TEST(Oracle, VacuumInputAgreesExactly) {
    SimulationConfig c = make(Scheme::QP, 0.4);
    c.pulse = PulseShape::vacuum();
    c.T = 2.0;
    EXPECT_LE(oracle_compare(c).sup_deviation, 1e-10);
}

TEST(Oracle, ShortGaussianRun) {
    SimulationConfig c = make(Scheme::QQ, 0.5);
    c.dt = 1e-4;
    c.T = 4.0;
    EXPECT_LE(oracle_compare(c).sup_deviation, 0.02);
}

TEST(Oracle, RejectsCounting) {
    EXPECT_THROW(oracle_compare(make(Scheme::TwoCounting, 0.5)), ValidationError);
    EXPECT_THROW(oracle_compare(make(Scheme::QP, 0.5), 0, 0), ValidationError);
}
