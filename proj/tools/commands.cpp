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

#include "commands.hpp"

#include "spf/checks.hpp"
#include "spf/config.hpp"
#include "spf/ensemble.hpp"
#include "spf/output.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>

namespace spf::cli {

using nlohmann::json;

namespace {

std::string column_tag(double th) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", th);
    return buf;
}

// Flags that mirror config keys. Each one writes into the overlay only when given.
struct Overlay {
    std::vector<std::function<void(json&)>> setters;
    std::string config_path;
    std::string out_dir;

    json build() const {
        json j = json::object();
        for (const auto& s : setters) s(j);
        return j;
    }
};

template <class T>
void bind(CLI::App* app, Overlay& ov, const std::string& flag, const std::string& section, const std::string& key,
          const std::string& help) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *value, help);
    ov.setters.push_back([=](json& j) {
        if (opt->count()) j[section][key] = *value;
    });
}

void add_config_flags(CLI::App* app, Overlay& ov) {
    app->add_option("--config", ov.config_path, "JSON config file; flags override its values");
    app->add_option("--out", ov.out_dir, "output directory (default: $SPF_OUTPUT_DIR, then spf_out)");
    bind<double>(app, ov, "--kappa", "model", "kappa", "coupling rate");
    bind<std::string>(app, ov, "--pulse", "pulse", "kind", "gaussian, exponential, tabulated or vacuum");
    bind<double>(app, ov, "--omega", "pulse", "omega", "Gaussian bandwidth");
    bind<double>(app, ov, "--t0", "pulse", "t0", "Gaussian peak time");
    bind<double>(app, ov, "--gamma", "pulse", "gamma", "exponential rate");
    bind<double>(app, ov, "--t1", "pulse", "t1", "exponential cutoff time");
    bind<bool>(app, ov, "--rising", "pulse", "rising", "exponential variant: true rising, false decaying");
    bind<std::string>(app, ov, "--pulse-csv", "pulse", "csv_path", "tabulated pulse file (t,xi)");
    bind<std::string>(app, ov, "--scheme", "measurement", "scheme", "qp, qq, hp, pp, sh or me");
    bind<double>(app, ov, "--r", "measurement", "r", "beam splitter parameter in [0, 1]");
    bind<double>(app, ov, "--theta", "measurement", "theta", "beam splitter phase (reduction form)");
    bind<double>(app, ov, "--dt", "run", "dt", "time step");
    bind<double>(app, ov, "--T", "run", "T", "horizon");
    bind<std::uint64_t>(app, ov, "--seed", "run", "seed", "master seed");
    bind<std::uint64_t>(app, ov, "--n", "run", "trajectories", "number of trajectories");
    bind<std::vector<double>>(app, ov, "--thresholds", "run", "thresholds", "P_e thresholds");
    bind<unsigned>(app, ov, "--workers", "run", "workers", "worker threads (0: all cores)");
    bind<std::uint64_t>(app, ov, "--keep", "run", "keep", "trajectory files written by ensemble");
    bind<std::uint64_t>(app, ov, "--thin", "output", "thin", "row stride of trajectory files");
}

AppConfig load(const Overlay& ov, const json& command_defaults) {
    json doc = command_defaults;
    if (!ov.config_path.empty()) {
        std::ifstream in(ov.config_path);
        if (!in) throw ValidationError("cannot read config file '" + ov.config_path + "'");
        json file;
        try {
            file = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ValidationError("config '" + ov.config_path + "' is malformed: " + e.what());
        }
        if (!file.is_object()) throw ValidationError("config: top level must be an object");
        merge_json(doc, file);
    }
    merge_json(doc, ov.build());
    if (!ov.out_dir.empty()) doc["output"]["directory"] = ov.out_dir;
    return config_from_json(doc);
}

std::string output_dir(const AppConfig& app) {
    const std::string dir = resolve_output_directory(app.output);
    ensure_directory(dir);
    return dir;
}

json manifest(const std::string& command, const AppConfig& app, const json& extra = json::object()) {
    json config = app.resolved;
    config["run"].erase("workers");
    config["output"].erase("directory");
    return json{{"tool", "spf"},
                {"version", SPF_VERSION},
                {"command", command},
                {"master_seed", app.sim.master_seed},
                {"config", config},
                {"arguments", extra}};
}

json proportion_json(const Proportion& p) {
    return json{{"count", p.count}, {"n", p.n}, {"fraction", p.fraction}, {"ci_low", p.lo}, {"ci_high", p.hi}};
}

json ensemble_report(const SimulationConfig& sim, const EnsembleResult& res) {
    json rep;
    rep["scheme"] = scheme_name(sim.measurement.scheme);
    rep["trajectories"] = res.summaries.size();
    rep["master_seed"] = sim.master_seed;
    rep["mean_me_sup"] = res.mean_me_sup;
    double me_max = 0.0;
    for (double v : res.me_pe) me_max = std::max(me_max, v);
    rep["me_max_pe"] = me_max;

    json ex = json::array();
    json occ = json::array();
    for (double th : res.thresholds) {
        json e = proportion_json(exceedance_fraction(res, th));
        e["threshold"] = th;
        ex.push_back(e);
        double at = 0.0;
        json o = proportion_json(peak_occupancy_fraction(res, th, &at));
        o["threshold"] = th;
        o["t"] = at;
        occ.push_back(o);
    }
    rep["exceedance"] = ex;
    rep["peak_occupancy"] = occ;

    double max_pe = 0.0, drift = 0.0, herm = 0.0, eig = 1.0, pre = 0.0, post = 0.0;
    std::size_t negative = 0, jumped = 0;
    for (const auto& s : res.summaries) {
        max_pe = std::max(max_pe, s.max_pe);
        drift = std::max(drift, s.diagnostics.max_trace_drift);
        herm = std::max(herm, s.diagnostics.max_hermiticity_residual);
        eig = std::min(eig, s.diagnostics.min_eigenvalue);
        negative += s.diagnostics.negativity;
        pre = std::max(pre, s.pre_jump_me_deviation);
        post = std::max(post, s.post_jump_max_pe);
        jumped += s.first_jump_step >= 0;
    }
    rep["max_pe"] = max_pe;
    rep["diagnostics"] = {{"max_trace_drift", drift},
                          {"max_hermiticity_residual", herm},
                          {"min_eigenvalue", eig},
                          {"negativity_count", negative}};
    if (sim.measurement.has_counting()) {
        rep["counting"] = {{"trajectories_with_detection", jumped},
                           {"max_pre_detection_me_deviation", pre},
                           {"max_post_detection_pe", post}};
    }
    return rep;
}

// ---------------------------------------------------------------------------

int cmd_me(const Overlay& ov) {
    const AppConfig app = load(ov, json::object());
    const std::string dir = output_dir(app);
    const MasterPath m = solve_master(app.sim);
    std::size_t at = 0;
    for (std::size_t i = 0; i < m.pe.size(); ++i)
        if (m.pe[i] > m.pe[at]) at = i;
    emit_master_csv(m, app.sim.pulse, dir + "/me.csv");
    write_json(dir + "/report.json", json{{"max_pe", m.pe[at]}, {"t_at_max", m.t[at]}});
    write_json(dir + "/manifest.json", manifest("me", app));
    std::printf("me: max P_e = %.6f at t = %.4f\n", m.pe[at], m.t[at]);
    return kOk;
}

int cmd_traj(const Overlay& ov, std::uint64_t index) {
    const AppConfig app = load(ov, json{{"measurement", {{"scheme", "qp"}}}});
    const std::string dir = output_dir(app);
    const TrajectoryRecord rec = run_trajectory(app.sim, index);
    const std::string name = "traj_" + std::to_string(index) + ".csv";
    emit_csv(rec, dir + "/" + name, app.output.thin);
    double max_pe = 0.0;
    for (double v : rec.pe) max_pe = std::max(max_pe, v);
    const auto& d = rec.diagnostics;
    write_json(dir + "/report.json",
               json{{"index", index},
                    {"max_pe", max_pe},
                    {"jump_times1", rec.jump_times1},
                    {"jump_times2", rec.jump_times2},
                    {"diagnostics",
                     {{"max_trace_drift", d.max_trace_drift},
                      {"max_hermiticity_residual", d.max_hermiticity_residual},
                      {"min_eigenvalue", d.min_eigenvalue},
                      {"negativity", d.negativity}}}});
    write_json(dir + "/manifest.json", manifest("traj", app, json{{"index", index}}));
    std::printf("traj %llu: max P_e = %.6f, detections %zu/%zu\n", static_cast<unsigned long long>(index), max_pe,
                rec.jump_times1.size(), rec.jump_times2.size());
    return kOk;
}

int cmd_ensemble(const Overlay& ov) {
    const AppConfig app = load(ov, json{{"measurement", {{"scheme", "qp"}}}});
    const std::string dir = output_dir(app);
    const EnsembleResult res = run_ensemble(app.sim);

    std::vector<std::string> header{"t", "mean_pe", "me_pe"};
    std::vector<std::vector<double>> cols{res.t, res.mean_pe, res.me_pe};
    const double n = static_cast<double>(res.summaries.size());
    for (std::size_t h = 0; h < res.thresholds.size(); ++h) {
        header.push_back("occupancy_" + column_tag(res.thresholds[h]));
        std::vector<double> c(res.t.size());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = res.occupancy[h][k] / n;
        cols.push_back(std::move(c));
    }
    write_csv(dir + "/ensemble.csv", header, cols);
    for (const auto& rec : res.records) {
        emit_csv(rec, dir + "/traj_" + std::to_string(rec.index) + ".csv", app.output.thin);
    }
    const json rep = ensemble_report(app.sim, res);
    write_json(dir + "/report.json", rep);
    write_json(dir + "/manifest.json", manifest("ensemble", app));
    for (const auto& e : rep["exceedance"]) {
        std::printf("ensemble %s: exceedance(%.3g) = %.4f [%.4f, %.4f], mean-ME sup = %.4f\n",
                    rep["scheme"].get<std::string>().c_str(), e["threshold"].get<double>(),
                    e["fraction"].get<double>(), e["ci_low"].get<double>(), e["ci_high"].get<double>(),
                    res.mean_me_sup);
    }
    return kOk;
}

int cmd_sweep(const Overlay& ov, const std::vector<double>& r_values) {
    const AppConfig base = load(ov, json{{"measurement", {{"scheme", "qp"}}}});
    const std::string dir = output_dir(base);
    if (base.resolved["measurement"].contains("angles") || base.resolved["measurement"].contains("entries")) {
        throw ValidationError("sweep varies measurement.r and cannot be combined with angles or entries");
    }
    std::vector<std::string> header{"r"};
    for (double th : base.sim.thresholds) {
        const std::string s = column_tag(th);
        header.insert(header.end(), {"exceedance_" + s, "ci_low_" + s, "ci_high_" + s});
    }
    header.insert(header.end(), {"mean_me_sup", "max_pe"});
    std::vector<std::vector<double>> cols(header.size());
    json rows = json::array();
    for (double r : r_values) {
        json doc = base.resolved;
        doc["measurement"]["r"] = r;
        const AppConfig app = config_from_json(doc);
        const EnsembleResult res = run_ensemble(app.sim);
        json rep = ensemble_report(app.sim, res);
        rep["r"] = r;
        std::size_t c = 0;
        cols[c++].push_back(r);
        for (double th : app.sim.thresholds) {
            const Proportion p = exceedance_fraction(res, th);
            cols[c++].push_back(p.fraction);
            cols[c++].push_back(p.lo);
            cols[c++].push_back(p.hi);
        }
        cols[c++].push_back(res.mean_me_sup);
        cols[c++].push_back(rep["max_pe"].get<double>());
        rows.push_back(rep);
        std::printf("sweep r = %.6g: exceedance(%.3g) = %.4f\n", r, app.sim.thresholds.front(),
                    exceedance_fraction(res, app.sim.thresholds.front()).fraction);
    }
    write_csv(dir + "/sweep.csv", header, cols);
    write_json(dir + "/report.json", json{{"sweep", rows}});
    write_json(dir + "/manifest.json", manifest("sweep", base, json{{"r_values", r_values}}));
    return kOk;
}

int cmd_oracle(const Overlay& ov, double tolerance) {
    const AppConfig app = load(ov, json{{"measurement", {{"scheme", "qp"}}}, {"run", {{"dt", 1e-4}}}});
    const std::string dir = output_dir(app);
    SimulationConfig half = app.sim;
    half.dt = app.sim.dt / 2.0;
    const OracleReport coarse = oracle_compare(app.sim, 0, 2);
    const OracleReport fine = oracle_compare(half, 0, 1);
    const bool ok = coarse.sup_deviation <= tolerance && fine.sup_deviation < coarse.sup_deviation;

    write_csv(dir + "/oracle.csv", {"t", "pe_reduced", "pe_extended"},
              {coarse.t, coarse.pe_reduced, coarse.pe_extended});
    write_json(dir + "/report.json", json{{"dt", app.sim.dt},
                                          {"sup_deviation", coarse.sup_deviation},
                                          {"dt_half", half.dt},
                                          {"sup_deviation_half", fine.sup_deviation},
                                          {"tolerance", tolerance},
                                          {"deviation_decreases", fine.sup_deviation < coarse.sup_deviation},
                                          {"pass", ok}});
    write_json(dir + "/manifest.json", manifest("oracle-check", app, json{{"tolerance", tolerance}}));
    std::printf("oracle-check: sup deviation %.3e at dt = %g, %.3e at dt = %g: %s\n", coarse.sup_deviation,
                app.sim.dt, fine.sup_deviation, half.dt, ok ? "PASS" : "FAIL");
    return ok ? kOk : kCheckFailed;
}

int cmd_duality(const Overlay& ov, std::size_t draws, double tolerance) {
    const AppConfig app = load(ov, json::object());
    const std::string dir = output_dir(app);
    json results = json::array();
    bool ok = true;
    for (Scheme s : {Scheme::QP, Scheme::QQ, Scheme::HomodynePlusCounting, Scheme::TwoCounting}) {
        const DualityReport rep = duality_check(s, app.sim.master_seed, draws);
        const bool pass = rep.max_residual <= tolerance;
        ok = ok && pass;
        results.push_back(json{{"scheme", scheme_name(s)}, {"draws", draws}, {"max_residual", rep.max_residual},
                               {"pass", pass}});
        std::printf("duality-check %s: max residual %.3e over %zu draws: %s\n", scheme_name(s).c_str(),
                    rep.max_residual, draws, pass ? "PASS" : "FAIL");
    }
    write_json(dir + "/report.json", json{{"tolerance", tolerance}, {"schemes", results}, {"pass", ok}});
    write_json(dir + "/manifest.json",
               manifest("duality-check", app, json{{"draws", draws}, {"tolerance", tolerance}}));
    return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Single-photon quantum filter simulator"};
    app.set_version_flag("--version", SPF_VERSION);
    app.require_subcommand(1);

    Overlay me_ov, traj_ov, ens_ov, sweep_ov, oracle_ov, dual_ov;
    auto* me = app.add_subcommand("me", "master equation path (me.csv)");
    add_config_flags(me, me_ov);

    auto* traj = app.add_subcommand("traj", "one conditional trajectory (traj_<k>.csv)");
    add_config_flags(traj, traj_ov);
    std::uint64_t index = 0;
    traj->add_option("--index", index, "trajectory index");

    auto* ens = app.add_subcommand("ensemble", "trajectory ensemble statistics");
    add_config_flags(ens, ens_ov);

    auto* sweep = app.add_subcommand("sweep", "ensemble statistics over a list of r values");
    add_config_flags(sweep, sweep_ov);
    std::vector<double> r_values{0.25, 1.0 / std::sqrt(2.0), 0.75};
    sweep->add_option("--r-list", r_values, "beam splitter parameters");

    auto* oracle = app.add_subcommand("oracle-check", "reduced filter against the extended vacuum filter");
    add_config_flags(oracle, oracle_ov);
    double oracle_tol = 0.02;
    oracle->add_option("--tolerance", oracle_tol, "maximum sup deviation of P_e");

    auto* dual = app.add_subcommand("duality-check", "Heisenberg and Schrodinger increments on random draws");
    add_config_flags(dual, dual_ov);
    std::size_t draws = 100;
    double dual_tol = 1e-12;
    dual->add_option("--draws", draws, "draws per scheme");
    dual->add_option("--tolerance", dual_tol, "maximum residual");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    try {
        if (*me) return cmd_me(me_ov);
        if (*traj) return cmd_traj(traj_ov, index);
        if (*ens) return cmd_ensemble(ens_ov);
        if (*sweep) return cmd_sweep(sweep_ov, r_values);
        if (*oracle) return cmd_oracle(oracle_ov, oracle_tol);
        if (*dual) return cmd_duality(dual_ov, draws, dual_tol);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    }
    return kValidation;
}

}  // namespace spf::cli
