// Copyright 2026 The qheat Authors
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


// Subcommand execution. Produces the main table plus sidecar files in memory;
// the caller decides where they are written.

#pragma once

#include "qheat/config.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qheat {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

using Cell = std::variant<double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// CSV: comma separated, header row, LF endings, doubles as {:.<precision>g},
// booleans as 0/1. JSON: {"columns": [...], "rows": [[...], ...]} with the same
// number formatting and null for non-finite values.
std::string render_table(const Table& table, OutputFormat format, int precision);

struct OutputFile {
    std::string suffix;  // empty for the main table, e.g. ".meta.json" for sidecars
    std::string content;
};

struct RunResult {
    int exit_code = kExitOk;
    std::vector<OutputFile> files;
    std::string message;  // summary or error text for stderr
};

struct RunOptions {
    int threads = 1;
    std::optional<int> precision;
    std::optional<OutputFormat> format;
};

// Runs the configured subcommand. Never throws: library errors become exit
// codes (kExitConfig for invalid arguments, kExitNumeric otherwise).
RunResult run(const RunConfig& config, const RunOptions& options = {});

// Oracle-equivalence suite behind the validate subcommand.
Table validation_suite(int cases_per_regime, unsigned long long seed);

}  // namespace qheat
