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

#include <stdexcept>
#include <string>
#include <vector>

namespace spf {

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Header row, then one row per index; every value printed with %.17g.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns, std::size_t stride = 1);

/// Columns t, pe, trace_rho11, min_eig, jump1, jump2.
void emit_csv(const TrajectoryRecord& rec, const std::string& path, std::size_t stride = 1);
/// As emit_csv plus xi_sq.
void emit_master_csv(const MasterPath& path_data, const PulseShape& pulse, const std::string& path);

void write_json(const std::string& path, const nlohmann::json& doc);
std::string format_double(double v);

/// Creates the directory (and parents) if missing.
void ensure_directory(const std::string& dir);

}  // namespace spf
