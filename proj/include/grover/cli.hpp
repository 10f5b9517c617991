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

#pragma once

// Command-line front end: configuration, CSV and JSON persistence, and the
// commands ideal, trajectories, mpdo, sweep, fit and crosscheck.

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grover/experiments.hpp"

namespace grover::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitTolerance = 3,
    kExitResource = 4,
};

/// Runs one command. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// 17 significant digits; round-trips every double.
std::string format_double(double x);

struct ConfigEntry {
    std::string value;
    int line = 0;
};

/// Flat `key = value` file. `#` starts a comment; keys are long flag names
/// without the leading dashes. ValidationError names the offending line.
std::map<std::string, ConfigEntry> read_config(const std::filesystem::path& path);

/// Writes `# schema: <schema>`, `# manifest: <manifest>`, then the column
/// header. Every later row must carry one field per column.
class CsvWriter {
   public:
    CsvWriter(const std::filesystem::path& path, std::string_view schema, std::string_view manifest,
              const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& fields);

   private:
    std::ofstream out_;
    std::size_t width_;
};

struct CsvTable {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Reads a sweep dataset written by the sweep command.
std::vector<experiments::ScalingPoint> read_sweep(const std::filesystem::path& path);
void write_sweep(const std::filesystem::path& path, std::string_view manifest,
                 const std::vector<experiments::ScalingPoint>& points);

}  // namespace grover::cli
