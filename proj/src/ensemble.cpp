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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace spf {

namespace {
constexpr double kNegativityFloor = -1e-6;
constexpr std::size_t kChunk = 64;
constexpr double kWilsonZ = 1.959963984540054;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
}  // namespace

std::size_t SimulationConfig::steps() const {
    const double n = T / dt;
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9 * std::max(1.0, n)) throw ValidationError("run.T must be a whole multiple of run.dt");
    return static_cast<std::size_t>(r);
}

void SimulationConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("run.dt must be > 0");
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("run.T must be > 0");
    if (trajectories < 1) throw ValidationError("run.trajectories must be >= 1");
    for (double th : thresholds) {
        if (!(th > 0.0 && th < 1.0)) throw ValidationError("run.thresholds entries must lie in (0, 1)");
    }
    (void)steps();
    spf::validate(measurement, model);
    if (!model.scattering_is_identity() && !measurement.is_diffusive()) {
        throw ValidationError("model.S != I is supported for the diffusive schemes qp, qq and sh only");
    }
}

// ---------------------------------------------------------------------------
// Master equation

MasterPath solve_master(const SimulationConfig& config) {
    config.validate();
    const std::size_t n = config.steps();
    const double dt = config.dt;
    const SystemModel& model = config.model;
    auto rhs = [&](const FilterState& s, cplx xi) { return unconditional_rhs(model, s, xi); };

    MasterPath p;
    p.t.reserve(n + 1);
    p.pe.reserve(n + 1);
    p.trace_rho11.reserve(n + 1);
    p.min_eig.reserve(n + 1);
    p.states.reserve(n + 1);
    FilterState st = FilterState::initial();
    auto record = [&](std::size_t k) {
        p.t.push_back(config.time(k));
        p.pe.push_back(clamp01(pe(st)));
        p.trace_rho11.push_back(st.rho11.trace().real());
        p.min_eig.push_back(min_eig(st.rho11));
        p.states.push_back(st);
    };
    record(0);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = config.time(k);
        const cplx x0 = config.pulse.xi(t);
        const cplx xh = config.pulse.xi(t + 0.5 * dt);
        const cplx x1 = config.pulse.xi(t + dt);
        const FilterState k1 = rhs(st, x0);
        const FilterState k2 = rhs(st + (0.5 * dt) * k1, xh);
        const FilterState k3 = rhs(st + (0.5 * dt) * k2, xh);
        const FilterState k4 = rhs(st + dt * k3, x1);
        st = apply_increment(st, (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        record(k + 1);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Trajectories

namespace {

struct StepInput {
    Innovations inc;
    int jump = -1;
};

TrajectoryRecord from_master(const SimulationConfig& config, std::size_t index) {
    const MasterPath m = solve_master(config);
    const std::size_t n = m.t.size();
    TrajectoryRecord rec;
    rec.index = index;
    rec.t = m.t;
    rec.pe = m.pe;
    rec.trace_rho11 = m.trace_rho11;
    rec.min_eig = m.min_eig;
    rec.jump1.assign(n, 0);
    rec.jump2.assign(n, 0);
    rec.increments.dW1.assign(n - 1, 0.0);
    rec.increments.dW2.assign(n - 1, 0.0);
    rec.increments.jump.assign(n - 1, -1);
    for (std::size_t k = 0; k < n; ++k) {
        rec.diagnostics.max_trace_drift = std::max(rec.diagnostics.max_trace_drift, std::abs(m.trace_rho11[k] - 1.0));
        rec.diagnostics.min_eigenvalue = std::min(rec.diagnostics.min_eigenvalue, m.min_eig[k]);
    }
    rec.diagnostics.negativity = rec.diagnostics.min_eigenvalue < kNegativityFloor;
    return rec;
}

template <class Source>
TrajectoryRecord integrate(const SimulationConfig& config, std::size_t index, Source&& source) {
    config.validate();
    if (config.measurement.scheme == Scheme::MasterEquationOnly) return from_master(config, index);

    const std::size_t n = config.steps();
    const double dt = config.dt;
    const MeasurementConfig& mc = config.measurement;
    const SystemModel& model = config.model;

    TrajectoryRecord rec;
    rec.index = index;
    rec.t.reserve(n + 1);
    rec.pe.reserve(n + 1);
    rec.trace_rho11.reserve(n + 1);
    rec.min_eig.reserve(n + 1);
    rec.jump1.reserve(n + 1);
    rec.jump2.reserve(n + 1);
    rec.increments.dW1.reserve(n);
    rec.increments.dW2.reserve(n);
    rec.increments.jump.reserve(n);
    TrajectoryDiagnostics& diag = rec.diagnostics;

    FilterState st = FilterState::initial();
    auto record = [&](std::size_t k, int jump) {
        const double tr = st.rho11.trace().real();
        const double me = min_eig(st.rho11);
        rec.t.push_back(config.time(k));
        rec.pe.push_back(clamp01(pe(st)));
        rec.trace_rho11.push_back(tr);
        rec.min_eig.push_back(me);
        rec.jump1.push_back(jump == 0);
        rec.jump2.push_back(jump == 1);
        if (jump == 0) rec.jump_times1.push_back(config.time(k));
        if (jump == 1) rec.jump_times2.push_back(config.time(k));
        diag.max_trace_drift = std::max(diag.max_trace_drift, std::abs(tr - 1.0));
        diag.min_eigenvalue = std::min(diag.min_eigenvalue, me);
    };
    record(0, -1);

    for (std::size_t k = 0; k < n; ++k) {
        const cplx xi = config.pulse.xi(config.time(k));
        const StepInput in = source(k, st, xi);
        double residual = 0.0;
        st = apply_increment(st, filter_increment(mc, model, st, xi, in.inc, dt), &residual);
        diag.max_hermiticity_residual = std::max(diag.max_hermiticity_residual, residual);
        rec.increments.dW1.push_back(in.inc.dW1);
        rec.increments.dW2.push_back(in.inc.dW2);
        rec.increments.jump.push_back(static_cast<std::int8_t>(in.jump));
        record(k + 1, in.jump);
    }
    diag.negativity = diag.min_eigenvalue < kNegativityFloor;
    return rec;
}

StepInput counting_step(const SimulationConfig& config, const FilterState& st, cplx xi, int jump) {
    StepInput in;
    in.jump = jump;
    in.inc = counting_innovations(config.measurement, config.model, st, xi, jump == 0, jump == 1, config.dt);
    return in;
}

}  // namespace

TrajectoryRecord run_trajectory(const SimulationConfig& config, std::size_t index) {
    const RngStream stream = derive_stream(config.master_seed, index);
    const double sq = std::sqrt(config.dt);
    const ChannelLayout ch = channel_layout(config.measurement);
    const bool counting = config.measurement.has_counting();

    return integrate(config, index, [&](std::size_t k, const FilterState& st, cplx xi) {
        const RngStream::StepDraws d = stream.step_draws(k);
        int jump = -1;
        if (counting) {
            const double kp = counting_rate(config.model, st, xi);
            const double usable = kp > kEpsK ? kp : 0.0;
            const std::vector<double> rates{ch.counting[0] * usable, ch.counting[1] * usable};
            if (const auto c = jump_decision(d.u, rates, config.dt)) jump = static_cast<int>(*c);
        }
        StepInput in = counting ? counting_step(config, st, xi, jump) : StepInput{};
        if (ch.homodyne_used[0]) in.inc.dW1 = sq * d.z1;
        if (ch.homodyne_used[1]) in.inc.dW2 = sq * d.z2;
        return in;
    });
}

TrajectoryRecord replay_trajectory(const SimulationConfig& config, const IncrementRecord& increments,
                                   std::size_t index) {
    const std::size_t n = config.steps();
    if (increments.dW1.size() != n || increments.dW2.size() != n || increments.jump.size() != n) {
        throw ValidationError("replay_trajectory: increment record does not match the grid");
    }
    const bool counting = config.measurement.has_counting();
    return integrate(config, index, [&](std::size_t k, const FilterState& st, cplx xi) {
        StepInput in = counting ? counting_step(config, st, xi, increments.jump[k]) : StepInput{};
        in.inc.dW1 = increments.dW1[k];
        in.inc.dW2 = increments.dW2[k];
        return in;
    });
}

TrajectorySummary summarize(const TrajectoryRecord& rec, const std::vector<double>& me_pe) {
    if (me_pe.size() != rec.pe.size()) throw ValidationError("summarize: reference path length mismatch");
    TrajectorySummary s;
    s.diagnostics = rec.diagnostics;
    for (std::size_t k = 0; k < rec.pe.size(); ++k) {
        s.max_pe = std::max(s.max_pe, rec.pe[k]);
        if (s.first_jump_step < 0 && (rec.jump1[k] || rec.jump2[k])) s.first_jump_step = static_cast<std::int64_t>(k);
        if (s.first_jump_step < 0) {
            s.pre_jump_me_deviation = std::max(s.pre_jump_me_deviation, std::abs(rec.pe[k] - me_pe[k]));
        } else {
            s.post_jump_max_pe = std::max(s.post_jump_max_pe, rec.pe[k]);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Ensemble

EnsembleResult run_ensemble(const SimulationConfig& config) {
    config.validate();
    const MasterPath me = solve_master(config);
    const std::size_t grid = me.t.size();
    const std::size_t total = config.trajectories;
    unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::min(total, kChunk)));

    EnsembleResult res;
    res.t = me.t;
    res.me_pe = me.pe;
    res.thresholds = config.thresholds;
    res.workers_used = workers;
    res.occupancy.assign(config.thresholds.size(), std::vector<std::uint32_t>(grid, 0));
    res.summaries.reserve(total);
    std::vector<double> sum(grid, 0.0);

    std::vector<TrajectoryRecord> chunk;
    for (std::size_t base = 0; base < total; base += kChunk) {
        const std::size_t count = std::min(kChunk, total - base);
        chunk.assign(count, TrajectoryRecord{});
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        auto work = [&]() {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                if (failed.load()) return;
                try {
                    chunk[i] = run_trajectory(config, base + i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                    return;
                }
            }
        };
        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
        if (failure) std::rethrow_exception(failure);

        for (std::size_t i = 0; i < count; ++i) {
            TrajectoryRecord& rec = chunk[i];
            for (std::size_t k = 0; k < grid; ++k) sum[k] += rec.pe[k];
            for (std::size_t h = 0; h < config.thresholds.size(); ++h) {
                for (std::size_t k = 0; k < grid; ++k) res.occupancy[h][k] += rec.pe[k] >= config.thresholds[h];
            }
            res.summaries.push_back(summarize(rec, me.pe));
            if (base + i < config.keep) res.records.push_back(std::move(rec));
        }
    }

    res.mean_pe.resize(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        res.mean_pe[k] = sum[k] / static_cast<double>(total);
        res.mean_me_sup = std::max(res.mean_me_sup, std::abs(res.mean_pe[k] - me.pe[k]));
    }
    return res;
}

Proportion wilson_interval(std::size_t count, std::size_t n) {
    Proportion p;
    p.count = count;
    p.n = n;
    if (n == 0) return p;
    const double nn = static_cast<double>(n);
    const double ph = static_cast<double>(count) / nn;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / nn;
    const double center = (ph + z2 / (2.0 * nn)) / denom;
    const double half = kWilsonZ * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / denom;
    p.fraction = ph;
    p.lo = std::max(0.0, center - half);
    p.hi = std::min(1.0, center + half);
    return p;
}

Proportion exceedance_fraction(const EnsembleResult& result, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold must lie in (0, 1)");
    std::size_t count = 0;
    for (const auto& s : result.summaries) count += s.max_pe >= threshold;
    return wilson_interval(count, result.summaries.size());
}

Proportion peak_occupancy_fraction(const EnsembleResult& result, double threshold, double* at_time) {
    const auto it = std::find(result.thresholds.begin(), result.thresholds.end(), threshold);
    if (it == result.thresholds.end()) throw ValidationError("threshold was not tracked by this ensemble");
    const auto& occ = result.occupancy[static_cast<std::size_t>(it - result.thresholds.begin())];
    const auto peak = std::max_element(occ.begin(), occ.end());
    if (at_time) *at_time = result.t[static_cast<std::size_t>(peak - occ.begin())];
    return wilson_interval(*peak, result.summaries.size());
}

// ---------------------------------------------------------------------------
// Extended-system oracle

OracleReport oracle_compare(const SimulationConfig& config, std::size_t trajectory_index, std::size_t substeps) {
    config.validate();
    if (!config.measurement.is_diffusive()) {
        throw ValidationError("oracle_compare supports the diffusive schemes qp, qq and sh only");
    }
    if (substeps < 1) throw ValidationError("oracle_compare: substeps must be >= 1");

    const std::size_t n = config.steps();
    const double dt = config.dt;
    const double sq = std::sqrt(dt / static_cast<double>(substeps));
    const MeasurementConfig& mc = config.measurement;
    const SystemModel& model = config.model;
    const ChannelLayout ch = channel_layout(mc);
    const RngStream stream = derive_stream(config.master_seed, trajectory_index);
    const Op2 excited = basis::excited();

    FilterState st = FilterState::initial();
    ExtendedState ext = ExtendedState::initial();
    OracleReport rep;
    auto record = [&](std::size_t k) {
        const double t = config.time(k);
        rep.t.push_back(t);
        rep.pe_reduced.push_back(pe(st));
        rep.pe_extended.push_back(reduced_expectation(ext, 1, 1, excited, config.pulse.w(t)).real());
        rep.sup_deviation = std::max(rep.sup_deviation, std::abs(rep.pe_reduced.back() - rep.pe_extended.back()));
    };
    record(0);

    for (std::size_t k = 0; k < n; ++k) {
        const double t = config.time(k);
        const cplx xi = config.pulse.xi(t);
        std::array<double, 2> dW{0.0, 0.0};
        for (std::size_t j = 0; j < substeps; ++j) {
            const RngStream::StepDraws d = stream.step_draws(k * substeps + j);
            dW[0] += sq * d.z1;
            dW[1] += sq * d.z2;
        }
        Innovations inc;
        std::array<double, 2> dY{0.0, 0.0};
        for (int i = 0; i < 2; ++i) {
            if (!ch.homodyne_used[i]) dW[i] = 0.0;
            dY[i] = dW[i] + homodyne_gain(model, st, xi, ch.homodyne[i]) * dt;
        }
        inc.dW1 = dW[0];
        inc.dW2 = dW[1];

        const ExtendedChannels ec = extended_channels(mc, model, config.pulse.lambda(t));
        std::vector<double> dWt(ec.measured.size());
        for (std::size_t i = 0; i < ec.measured.size(); ++i) {
            dWt[i] = dY[i] - extended_gain(ext.rho, ec.measured[i]) * dt;
        }
        st = apply_increment(st, filter_increment(mc, model, st, xi, inc, dt));
        ext = vacuum_filter_step(ext, ec.dissipators, ec.measured, ec.H, dWt, dt);
        record(k + 1);
    }
    return rep;
}

}  // namespace spf
