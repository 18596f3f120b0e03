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


// qheat command-line front end. Links only the C interface.

#include "qheat/qheat.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

namespace {

constexpr int kUsage = 1;
constexpr int kConfig = 2;

struct Handles {
    qh_config* config = nullptr;
    qh_result* result = nullptr;
    ~Handles() {
        qh_result_destroy(result);
        qh_config_destroy(config);
    }
};

bool write_file(const std::string& path, const char* data, size_t size) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f.write(data, static_cast<std::streamsize>(size));
    return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heat transport through two coupled qubits"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path, format = "config";
    int threads = 1, precision = 0;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "Output path ('-' for stdout); sidecars use it as a prefix");
    app.add_option("--format", format, "csv or json (default: from the configuration)")
        ->check(CLI::IsMember({"csv", "json", "config"}));
    app.add_option("--threads", threads, "Sweep worker threads")->check(CLI::PositiveNumber);
    app.add_option("--precision", precision, "Significant digits")->check(CLI::Range(1, 17));

    std::string preset;
    for (const char* name :
         {"steady", "currents", "channels", "sweep", "modulate", "coa", "validate"})
        app.add_subcommand(name, std::string("Run the ") + name + " subcommand");
    auto* preset_cmd = app.add_subcommand("preset", "Emit a figure data table");
    preset_cmd->add_option("name", preset, "fig2a, fig2b, fig3, fig4, fig5 or fig6")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    Handles h;
    qh_status st;
    if (config_path.empty()) {
        st = qh_config_default(&h.config);
    } else {
        std::ifstream f(config_path, std::ios::binary);
        const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        if (!f && !f.eof()) {
            std::cerr << "qheat: cannot read " << config_path << "\n";
            return kConfig;
        }
        st = qh_config_parse(text.data(), text.size(), &h.config);
    }
    if (st != QH_OK) {
        std::cerr << "qheat: " << config_path << ":\n" << qh_last_error();
        return kConfig;
    }
    st = command == "preset" ? qh_config_set_preset(h.config, preset.c_str())
                             : qh_config_set_command(h.config, command.c_str());
    if (st != QH_OK) {
        std::cerr << "qheat: " << qh_last_error() << "\n";
        return kConfig;
    }

    const qh_format fmt = format == "csv"    ? QH_FORMAT_CSV
                          : format == "json" ? QH_FORMAT_JSON
                                             : QH_FORMAT_CONFIG;
    if (qh_run(h.config, threads, precision, fmt, &h.result) != QH_OK) {
        std::cerr << "qheat: " << qh_last_error() << "\n";
        return 3;
    }
    const int code = qh_result_exit_code(h.result);
    const std::string message = qh_result_message(h.result);
    if (!message.empty()) std::cerr << "qheat: " << message << "\n";

    const std::string path = out_path.empty() ? qh_config_output_path(h.config) : out_path;
    for (size_t i = 0; i < qh_result_file_count(h.result); ++i) {
        size_t size = 0;
        const char* data = qh_result_file_content(h.result, i, &size);
        const std::string suffix = qh_result_file_suffix(h.result, i);
        if (path == "-") {
            if (suffix.empty()) std::fwrite(data, 1, size, stdout);
            continue;
        }
        if (!write_file(path + suffix, data, size)) {
            std::cerr << "qheat: cannot write " << path + suffix << "\n";
            return kConfig;
        }
    }
    return code;
}
