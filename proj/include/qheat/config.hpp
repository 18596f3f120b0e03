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


// JSON run configuration. The schema and defaults are documented in README.md.

#pragma once

#include "qheat/modulator.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qheat {

enum class Command { Steady, Currents, Channels, Sweep, Modulate, Coa, Validate, Preset };
enum class OutputFormat { Csv, Json };

const char* to_string(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name);
const char* to_string(OutputFormat f) noexcept;

struct ModulateConfig {
    double omega_r = 0.5 * std::numbers::pi;
    double window = 50.0;
    std::vector<double> targets;     // rho22 staircase; used when events is empty
    std::vector<PulseEvent> events;  // explicit schedule
    PopulationVector initial = PopulationVector(0.0, 1.0, 0.0, 0.0);
    ScheduleOptions sampling;
};

struct RunConfig {
    Scenario scenario;
    Command command = Command::Steady;
    double rho22 = 0.0;
    std::vector<AxisSpec> axes;
    bool with_delta = false;
    std::string preset;
    ModulateConfig modulate;
    OutputFormat format = OutputFormat::Csv;
    std::string path = "-";
    int precision = 12;
    std::string caption;
};

struct ConfigIssue {
    std::string path;  // e.g. "scenario.T_L"; empty for syntax errors
    std::string message;
    int line = 0;  // 1-based, syntax errors only
    int column = 0;

    std::string str() const;
};

struct ParseResult {
    std::optional<RunConfig> config;
    std::vector<ConfigIssue> issues;

    bool ok() const noexcept { return config.has_value(); }
};

// Parses and validates; every violation is reported, not just the first.
ParseResult parse_config(std::string_view text);

// Figure presets: fig2a, fig2b, fig3, fig4, fig5, fig6.
std::vector<std::string> preset_names();
// Throws Error(Config) for an unknown name.
RunConfig preset_config(std::string_view name);

// Canonical JSON echo of a configuration.
std::string config_to_json(const RunConfig& config);

}  // namespace qheat
