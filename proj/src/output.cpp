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

#include "spf/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace spf {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns, std::size_t stride) {
    if (header.size() != columns.size()) throw std::invalid_argument("write_csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw std::invalid_argument("write_csv: ragged columns");
    }
    if (stride < 1) stride = 1;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        if (i % stride != 0 && i + 1 != rows) continue;
        for (std::size_t j = 0; j < columns.size(); ++j) out << (j ? "," : "") << format_double(columns[j][i]);
        out << '\n';
    }
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

namespace {
std::vector<double> as_double(const std::vector<std::uint8_t>& v) { return {v.begin(), v.end()}; }
}  // namespace

void emit_csv(const TrajectoryRecord& rec, const std::string& path, std::size_t stride) {
    write_csv(path, {"t", "pe", "trace_rho11", "min_eig", "jump1", "jump2"},
              {rec.t, rec.pe, rec.trace_rho11, rec.min_eig, as_double(rec.jump1), as_double(rec.jump2)}, stride);
}

void emit_master_csv(const MasterPath& m, const PulseShape& pulse, const std::string& path) {
    std::vector<double> zeros(m.t.size(), 0.0);
    std::vector<double> xi_sq(m.t.size());
    for (std::size_t i = 0; i < m.t.size(); ++i) xi_sq[i] = std::norm(pulse.xi(m.t[i]));
    write_csv(path, {"t", "pe", "trace_rho11", "min_eig", "jump1", "jump2", "xi_sq"},
              {m.t, m.pe, m.trace_rho11, m.min_eig, zeros, zeros, xi_sq});
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace spf
