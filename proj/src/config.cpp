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

#include "spf/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

namespace spf {

using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"model", {"kappa", "S", "H"}},
        {"pulse", {"kind", "omega", "t0", "gamma", "t1", "rising", "csv_path"}},
        {"measurement", {"scheme", "r", "theta", "angles", "entries"}},
        {"run", {"dt", "T", "seed", "trajectories", "thresholds", "workers", "keep"}},
        {"output", {"directory", "thin"}},
    };
    return keys;
}

json complex_matrix_json(const Op2& m) {
    json rows = json::array();
    for (int i = 0; i < 2; ++i) {
        json row = json::array();
        for (int j = 0; j < 2; ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(row);
    }
    return rows;
}

json defaults() {
    return json{
        {"model", {{"kappa", 1.0}, {"S", complex_matrix_json(Op2::Identity())}, {"H", complex_matrix_json(Op2::Zero())}}},
        {"pulse",
         {{"kind", "gaussian"},
          {"omega", 1.5},
          {"t0", 3.0},
          {"gamma", 1.0},
          {"t1", 3.0},
          {"rising", true},
          {"csv_path", ""}}},
        {"measurement", {{"scheme", "me"}, {"r", 0.0}}},
        {"run",
         {{"dt", 1e-3},
          {"T", 10.0},
          {"seed", 1},
          {"trajectories", 64},
          {"thresholds", json::array({0.9})},
          {"workers", 0},
          {"keep", 64}}},
        {"output", {{"directory", ""}, {"thin", 1}}},
    };
}

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

double number(const json& doc, const std::string& section, const std::string& key) {
    const json& v = doc.at(section).at(key);
    if (!v.is_number()) fail(section + "." + key, "expected a number");
    return v.get<double>();
}

std::uint64_t count(const json& doc, const std::string& section, const std::string& key) {
    const json& v = doc.at(section).at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        fail(section + "." + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string text(const json& doc, const std::string& section, const std::string& key) {
    const json& v = doc.at(section).at(key);
    if (!v.is_string()) fail(section + "." + key, "expected a string");
    return v.get<std::string>();
}

cplx complex_entry(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    fail(path, "expected a number or [re, im]");
}

Op2 complex_matrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_array() || v[0].size() != 2 || !v[1].is_array() ||
        v[1].size() != 2) {
        fail(path, "expected a 2x2 matrix");
    }
    Op2 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            m(i, j) = complex_entry(v[i][j], path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    return m;
}

void check_keys(const json& doc) {
    if (!doc.is_object()) throw ValidationError("config: top level must be an object");
    for (const auto& [section, body] : doc.items()) {
        const auto it = allowed_keys().find(section);
        if (it == allowed_keys().end()) fail(section, "unknown section");
        if (!body.is_object()) fail(section, "expected an object");
        for (const auto& [key, value] : body.items()) {
            if (!it->second.count(key)) fail(section + "." + key, "unknown key");
        }
    }
    if (doc.contains("measurement") && doc["measurement"].contains("angles")) {
        const json& a = doc["measurement"]["angles"];
        if (!a.is_object()) fail("measurement.angles", "expected an object");
        for (const auto& [key, value] : a.items()) {
            if (key != "Theta" && key != "Psi" && key != "Phi" && key != "Lambda") {
                fail("measurement.angles." + key, "unknown key");
            }
            if (!value.is_number()) fail("measurement.angles." + key, "expected a number");
        }
    }
}

template <class F>
auto with_path(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ValidationError& e) {
        fail(path, e.what());
    }
}

}  // namespace

void merge_json(json& base, const json& overlay) {
    if (!base.is_object() || !overlay.is_object()) {
        base = overlay;
        return;
    }
    for (const auto& [key, value] : overlay.items()) {
        if (base.contains(key) && base[key].is_object() && value.is_object()) {
            merge_json(base[key], value);
        } else {
            base[key] = value;
        }
    }
}

AppConfig config_from_json(const json& doc) {
    check_keys(doc);
    json d = defaults();
    merge_json(d, doc);

    AppConfig app;
    SimulationConfig& sim = app.sim;

    sim.model.kappa = number(d, "model", "kappa");
    if (!(sim.model.kappa >= 0.0)) fail("model.kappa", "must be >= 0");
    sim.model.S = complex_matrix(d["model"]["S"], "model.S");
    sim.model.H = complex_matrix(d["model"]["H"], "model.H");
    with_path("model", [&] { sim.model.validate(); });

    const std::string kind = text(d, "pulse", "kind");
    if (kind == "gaussian") {
        const double omega = number(d, "pulse", "omega");
        const double t0 = number(d, "pulse", "t0");
        sim.pulse = with_path("pulse.omega", [&] { return PulseShape::gaussian(omega, t0); });
    } else if (kind == "exponential") {
        const double gamma = number(d, "pulse", "gamma");
        const double t1 = number(d, "pulse", "t1");
        if (!d["pulse"]["rising"].is_boolean()) fail("pulse.rising", "expected true or false");
        const bool rising = d["pulse"]["rising"].get<bool>();
        sim.pulse = with_path("pulse.gamma", [&] { return PulseShape::exponential(gamma, t1, rising); });
    } else if (kind == "tabulated") {
        const std::string path = text(d, "pulse", "csv_path");
        if (path.empty()) fail("pulse.csv_path", "required for a tabulated pulse");
        sim.pulse = with_path("pulse.csv_path", [&] { return PulseShape::from_csv(path); });
    } else if (kind == "vacuum") {
        sim.pulse = PulseShape::vacuum();
    } else {
        fail("pulse.kind", "expected gaussian, exponential, tabulated or vacuum");
    }

    const json& m = d["measurement"];
    sim.measurement.scheme = with_path("measurement.scheme", [&] { return parse_scheme(text(d, "measurement", "scheme")); });
    const double r = number(d, "measurement", "r");
    if (m.contains("entries")) {
        const Op2 e = complex_matrix(m["entries"], "measurement.entries");
        sim.measurement.splitter = with_path(
            "measurement.entries", [&] { return BeamSplitter::from_entries(e(0, 0), e(0, 1), e(1, 0), e(1, 1)); });
    } else if (m.contains("angles")) {
        const json& a = m["angles"];
        auto angle = [&](const char* k) { return a.contains(k) ? a[k].get<double>() : 0.0; };
        sim.measurement.splitter =
            BeamSplitter::from_angles(angle("Theta"), angle("Psi"), angle("Phi"), angle("Lambda"));
    } else if (m.contains("theta")) {
        const double theta = number(d, "measurement", "theta");
        sim.measurement.splitter = with_path("measurement.r", [&] { return BeamSplitter::from_reduction(r, theta); });
    } else {
        sim.measurement.splitter = with_path("measurement.r", [&] { return BeamSplitter::simulation(r); });
    }

    sim.dt = number(d, "run", "dt");
    sim.T = number(d, "run", "T");
    if (!(sim.dt > 0.0)) fail("run.dt", "must be > 0");
    if (!(sim.T > 0.0)) fail("run.T", "must be > 0");
    sim.master_seed = count(d, "run", "seed");
    sim.trajectories = count(d, "run", "trajectories");
    if (sim.trajectories < 1) fail("run.trajectories", "must be >= 1");
    sim.workers = static_cast<unsigned>(count(d, "run", "workers"));
    sim.keep = count(d, "run", "keep");
    const json& th = d["run"]["thresholds"];
    if (!th.is_array()) fail("run.thresholds", "expected an array of numbers");
    sim.thresholds.clear();
    for (const auto& v : th) {
        if (!v.is_number()) fail("run.thresholds", "expected an array of numbers");
        const double x = v.get<double>();
        if (!(x > 0.0 && x < 1.0)) fail("run.thresholds", "entries must lie in (0, 1)");
        sim.thresholds.push_back(x);
    }
    with_path("run.T", [&] { (void)sim.steps(); });
    with_path("measurement.scheme", [&] { sim.validate(); });

    app.output.directory = text(d, "output", "directory");
    app.output.thin = count(d, "output", "thin");
    if (app.output.thin < 1) fail("output.thin", "must be >= 1");

    app.resolved = d;
    return app;
}

AppConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config '" + path + "' is malformed: " + e.what());
    }
    return config_from_json(doc);
}

std::string resolve_output_directory(const OutputSettings& out) {
    if (!out.directory.empty()) return out.directory;
    if (const char* env = std::getenv("SPF_OUTPUT_DIR"); env && *env) return env;
    return "spf_out";
}

}  // namespace spf
