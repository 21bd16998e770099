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

#include "spf/ensemble.hpp"

#include <json.hpp>

#include <string>

namespace spf {

struct OutputSettings {
    std::string directory;  // empty: $SPF_OUTPUT_DIR, then "spf_out"
    std::size_t thin = 1;   // write every thin-th grid row of trajectory files
};

struct AppConfig {
    SimulationConfig sim;
    OutputSettings output;
    nlohmann::json resolved;  // every key with defaults applied
};

/// Section/key table:
///   model       kappa, S, H                     (matrices: 2x2, entries number or [re, im])
///   pulse       kind, omega, t0, gamma, t1, rising, csv_path
///   measurement scheme, r, theta, angles {Theta, Psi, Phi, Lambda}, entries
///   run         dt, T, seed, trajectories, thresholds, workers, keep
///   output      directory, thin
/// Unknown keys and constraint violations raise ValidationError naming the key path.
AppConfig config_from_json(const nlohmann::json& doc);
AppConfig parse_config(const std::string& path);

/// Recursive merge; values in `overlay` win.
void merge_json(nlohmann::json& base, const nlohmann::json& overlay);

/// Output directory after applying the environment default.
std::string resolve_output_directory(const OutputSettings& out);

}  // namespace spf
