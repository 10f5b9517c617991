// Copyright 2026 The Grover Noise Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cstdio>
#include <sstream>

#include "grover/cli.hpp"

namespace grover::cli {

namespace {

constexpr std::string_view kSweepSchema = "grover-sim/sweep/v1";

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw ValidationError(where + ": not a number: '" + s + "'");
    }
    return v;
}

long to_long(const std::string& s, const std::string& where) {
    long v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw ValidationError(where + ": not an integer: '" + s + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::map<std::string, ConfigEntry> read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    std::map<std::string, ConfigEntry> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        const std::string body = trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = path.string() + ":" + std::to_string(number);
        if (eq == std::string::npos) throw ValidationError(where + ": expected key = value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.starts_with("--")) key = key.substr(2);
        if (key.empty()) throw ValidationError(where + ": empty key");
        if (key == "config") throw ValidationError(where + ": config files do not nest");
        if (out.contains(key)) throw ValidationError(where + ": duplicate key '" + key + "'");
        out[key] = {trim(std::string_view(body).substr(eq + 1)), number};
    }
    return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view schema, std::string_view manifest,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), width_(columns.size()) {
    if (!out_) throw ValidationError("cannot write " + path.string());
    out_ << "# schema: " << schema << "\n# manifest: " << manifest << "\n";
    row(columns);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw Error("CSV row width mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i == 0 ? "" : ",") << fields[i];
    out_ << '\n';
    if (!out_) throw Error("CSV write failed");
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw ValidationError("dataset has no column '" + std::string(name) + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset " + path.string());
    CsvTable table;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (line.starts_with("# schema:")) table.schema = trim(std::string_view(line).substr(9));
            continue;
        }
        auto fields = split(line);
        if (table.columns.empty()) {
            table.columns = std::move(fields);
            continue;
        }
        if (fields.size() != table.columns.size()) {
            throw ValidationError(path.string() + ":" + std::to_string(number) + ": expected " +
                                  std::to_string(table.columns.size()) + " fields, got " +
                                  std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    return table;
}

std::vector<experiments::ScalingPoint> read_sweep(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    if (t.schema != kSweepSchema) {
        throw ValidationError(path.string() + ": schema '" + t.schema + "' is not " + std::string(kSweepSchema));
    }
    const auto cn = t.column("n"), cp = t.column("p"), cs = t.column("P_f"), ce = t.column("excess"),
               cf = t.column("chi_flag"), cc = t.column("chi_used"), cd = t.column("convergence_delta"),
               ct = t.column("targets_averaged"), cg = t.column("engine");
    std::vector<experiments::ScalingPoint> out;
    out.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        const std::string where = path.string() + " row " + std::to_string(i + 1);
        experiments::ScalingPoint pt;
        pt.n = static_cast<int>(to_long(r[cn], where));
        pt.p = to_double(r[cp], where);
        pt.success = to_double(r[cs], where);
        pt.excess = to_double(r[ce], where);
        pt.converged = to_long(r[cf], where) != 0;
        pt.chi_used = static_cast<std::size_t>(to_long(r[cc], where));
        pt.convergence_delta = to_double(r[cd], where);
        pt.targets_averaged = static_cast<int>(to_long(r[ct], where));
        if (r[cg] != "synthetic") pt.engine = experiments::parse_engine(r[cg]);
        out.push_back(pt);
    }
    return out;
}

void write_sweep(const std::filesystem::path& path, std::string_view manifest,
                 const std::vector<experiments::ScalingPoint>& points) {
    CsvWriter csv(path, kSweepSchema, manifest,
                  {"n", "p", "P_f", "excess", "chi_flag", "chi_used", "convergence_delta", "targets_averaged",
                   "engine"});
    for (const auto& pt : points) {
        csv.row({std::to_string(pt.n), format_double(pt.p), format_double(pt.success), format_double(pt.excess),
                 pt.converged ? "1" : "0", std::to_string(pt.chi_used), format_double(pt.convergence_delta),
                 std::to_string(pt.targets_averaged), pt.engine ? experiments::to_string(*pt.engine) : "synthetic"});
    }
}

}  // namespace grover::cli
