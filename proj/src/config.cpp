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


#include "qheat/config.hpp"

#include "qheat/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <initializer_list>

namespace qheat {

using nlohmann::json;

const char* to_string(Command c) noexcept {
    switch (c) {
        case Command::Steady: return "steady";
        case Command::Currents: return "currents";
        case Command::Channels: return "channels";
        case Command::Sweep: return "sweep";
        case Command::Modulate: return "modulate";
        case Command::Coa: return "coa";
        case Command::Validate: return "validate";
        case Command::Preset: return "preset";
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
    for (Command c : {Command::Steady, Command::Currents, Command::Channels, Command::Sweep,
                      Command::Modulate, Command::Coa, Command::Validate, Command::Preset})
        if (name == to_string(c)) return c;
    return std::nullopt;
}

const char* to_string(OutputFormat f) noexcept { return f == OutputFormat::Csv ? "csv" : "json"; }

std::string ConfigIssue::str() const {
    if (line > 0) return fmt::format("line {}, column {}: {}", line, column, message);
    return fmt::format("{}: {}", path, message);
}

namespace {

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

class Reader {
public:
    explicit Reader(std::vector<ConfigIssue>& issues) : issues_(issues) {}

    void issue(const std::string& path, std::string message) {
        issues_.push_back({path, std::move(message), 0, 0});
    }

    // False (with an issue) unless v is an object; flags unknown keys.
    bool object(const json& v, const std::string& path, std::initializer_list<const char*> keys) {
        if (!v.is_object()) {
            issue(path, "expected an object");
            return false;
        }
        for (const auto& [key, _] : v.items()) {
            bool known = false;
            for (const char* k : keys) known = known || key == k;
            if (!known) issue(join_path(path, key), "unknown key");
        }
        return true;
    }

    void number(const json& obj, const std::string& path, const char* key, double& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            issue(join_path(path, key), "expected a finite number");
            return;
        }
        out = v.get<double>();
    }

    void integer(const json& obj, const std::string& path, const char* key, int& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            issue(join_path(path, key), "expected an integer");
            return;
        }
        out = v.get<int>();
    }

    void boolean(const json& obj, const std::string& path, const char* key, bool& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_boolean()) {
            issue(join_path(path, key), "expected true or false");
            return;
        }
        out = v.get<bool>();
    }

    void string(const json& obj, const std::string& path, const char* key, std::string& out) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_string()) {
            issue(join_path(path, key), "expected a string");
            return;
        }
        out = v.get<std::string>();
    }

    void require(bool ok, const std::string& path, const char* message) {
        if (!ok) issue(path, message);
    }

private:
    std::vector<ConfigIssue>& issues_;
};

void read_entry(Reader& r, const json& v, const std::string& path, RateEntry& e) {
    if (!r.object(v, path, {"g11", "g22", "g12"})) return;
    r.require(v.contains("g11") && v.contains("g22"), path, "g11 and g22 are required");
    r.number(v, path, "g11", e.g11);
    r.number(v, path, "g22", e.g22);
    e.g12 = std::sqrt(std::max(e.g11, 0.0) * std::max(e.g22, 0.0));
    r.number(v, path, "g12", e.g12);
    r.require(e.g11 >= 0.0, join_path(path, "g11"), "must be >= 0");
    r.require(e.g22 >= 0.0, join_path(path, "g22"), "must be >= 0");
    r.require(e.g12 >= 0.0, join_path(path, "g12"), "must be >= 0");
    if (e.g11 >= 0.0 && e.g22 >= 0.0)
        r.require(e.g12 <= std::sqrt(e.g11 * e.g22) * (1.0 + 1e-12), join_path(path, "g12"),
                  "must not exceed sqrt(g11 g22)");
}

void read_scenario(Reader& r, const json& v, Scenario& s) {
    const std::string path = "scenario";
    if (!r.object(v, path, {"omega1", "omega2", "g", "topology", "T_L", "T_R", "gamma",
                            "gamma_minus", "gamma_plus", "rate_table"}))
        return;
    r.number(v, path, "omega1", s.params.omega1);
    r.number(v, path, "omega2", s.params.omega2);
    r.number(v, path, "g", s.params.g);
    r.require(s.params.omega1 > 0.0, "scenario.omega1", "must be > 0");
    r.require(s.params.omega2 > 0.0, "scenario.omega2", "must be > 0");
    r.require(s.params.g >= 0.0, "scenario.g", "must be >= 0");

    std::string topology = "common";
    r.string(v, path, "topology", topology);
    if (topology == "common")
        s.topology = Topology::Common;
    else if (topology == "independent")
        s.topology = Topology::Independent;
    else
        r.issue("scenario.topology", "expected \"common\" or \"independent\"");

    double tl = s.left.temperature, tr = s.right.temperature;
    r.number(v, path, "T_L", tl);
    r.number(v, path, "T_R", tr);
    r.require(tl >= 0.0, "scenario.T_L", "must be >= 0");
    r.require(tr >= 0.0, "scenario.T_R", "must be >= 0");

    const int forms = int(v.contains("gamma")) +
                      int(v.contains("gamma_minus") || v.contains("gamma_plus")) +
                      int(v.contains("rate_table"));
    if (forms > 1) {
        r.issue(path, "give only one of gamma, gamma_minus/gamma_plus, rate_table");
        return;
    }
    if (v.contains("rate_table")) {
        const json& t = v.at("rate_table");
        const std::string tp = "scenario.rate_table";
        if (!r.object(t, tp, {"L", "R"})) return;
        for (auto [key, res] : {std::pair{"L", &s.left}, std::pair{"R", &s.right}}) {
            const std::string rp = join_path(tp, key);
            if (!t.contains(key)) {
                r.issue(rp, "missing reservoir");
                continue;
            }
            const json& rv = t.at(key);
            if (!r.object(rv, rp, {"minus", "plus"})) continue;
            for (auto [ck, c] : {std::pair{"minus", Channel::Minus}, std::pair{"plus", Channel::Plus}}) {
                if (!rv.contains(ck)) {
                    r.issue(join_path(rp, ck), "missing channel");
                    continue;
                }
                read_entry(r, rv.at(ck), join_path(rp, ck), res->rates[index(c)]);
            }
        }
    } else if (v.contains("gamma_minus") || v.contains("gamma_plus")) {
        r.require(v.contains("gamma_minus") && v.contains("gamma_plus"), path,
                  "gamma_minus and gamma_plus go together");
        double gm = 0.0, gp = 0.0;
        r.number(v, path, "gamma_minus", gm);
        r.number(v, path, "gamma_plus", gp);
        r.require(gm >= 0.0, "scenario.gamma_minus", "must be >= 0");
        r.require(gp >= 0.0, "scenario.gamma_plus", "must be >= 0");
        s.left = ReservoirSpec::channels(ReservoirLabel::Left, 0.0, gm, gp);
        s.right = ReservoirSpec::channels(ReservoirLabel::Right, 0.0, gm, gp);
    } else {
        double gamma = 0.003;
        r.number(v, path, "gamma", gamma);
        r.require(gamma >= 0.0, "scenario.gamma", "must be >= 0");
        s.left = ReservoirSpec::flat(ReservoirLabel::Left, 0.0, gamma);
        s.right = ReservoirSpec::flat(ReservoirLabel::Right, 0.0, gamma);
    }
    s.left.temperature = tl;
    s.right.temperature = tr;
}

bool axis_value_ok(Axis a, double v) {
    switch (a) {
        case Axis::Omega2: return v > 0.0;
        case Axis::Rho22: return v >= 0.0 && v <= 1.0;
        default: return v >= 0.0;
    }
}

void read_axes(Reader& r, const json& v, std::vector<AxisSpec>& axes) {
    const std::string path = "command.axes";
    if (!v.is_array()) {
        r.issue(path, "expected an array");
        return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string ap = fmt::format("{}[{}]", path, i);
        const json& a = v[i];
        if (!r.object(a, ap, {"axis", "start", "stop", "points"})) continue;
        AxisSpec spec;
        std::string name;
        r.string(a, ap, "axis", name);
        if (auto ax = parse_axis(name))
            spec.axis = *ax;
        else
            r.issue(join_path(ap, "axis"),
                    "expected one of T_L, g, omega2, gamma_minus, gamma_plus, rho22");
        r.require(a.contains("start") && a.contains("stop"), ap, "start and stop are required");
        r.number(a, ap, "start", spec.start);
        r.number(a, ap, "stop", spec.stop);
        spec.points = 2;
        r.integer(a, ap, "points", spec.points);
        r.require(spec.points >= 1, join_path(ap, "points"), "must be >= 1");
        r.require(axis_value_ok(spec.axis, spec.start), join_path(ap, "start"),
                  "outside the valid range of the axis");
        r.require(axis_value_ok(spec.axis, spec.stop), join_path(ap, "stop"),
                  "outside the valid range of the axis");
        axes.push_back(spec);
    }
}

void read_modulate(Reader& r, const json& v, ModulateConfig& m) {
    const std::string path = "command.modulate";
    if (!r.object(v, path, {"omega_r", "window", "targets", "events", "initial", "sample_dt",
                            "drive_samples"}))
        return;
    r.number(v, path, "omega_r", m.omega_r);
    r.number(v, path, "window", m.window);
    r.number(v, path, "sample_dt", m.sampling.sample_dt);
    r.integer(v, path, "drive_samples", m.sampling.drive_samples);
    r.require(m.omega_r > 0.0, "command.modulate.omega_r", "must be > 0");
    r.require(m.window >= 0.0, "command.modulate.window", "must be >= 0");
    r.require(m.sampling.sample_dt > 0.0, "command.modulate.sample_dt", "must be > 0");
    r.require(m.sampling.drive_samples >= 1, "command.modulate.drive_samples", "must be >= 1");

    if (v.contains("targets")) {
        const json& t = v.at("targets");
        if (!t.is_array()) {
            r.issue("command.modulate.targets", "expected an array");
        } else {
            for (std::size_t i = 0; i < t.size(); ++i) {
                const std::string tp = fmt::format("command.modulate.targets[{}]", i);
                if (!t[i].is_number()) {
                    r.issue(tp, "expected a number");
                    continue;
                }
                const double x = t[i].get<double>();
                r.require(x >= 0.0 && x <= 1.0, tp, "must lie in [0, 1]");
                m.targets.push_back(x);
            }
        }
    }
    if (v.contains("events")) {
        const json& e = v.at("events");
        if (!e.is_array()) {
            r.issue("command.modulate.events", "expected an array");
        } else {
            for (std::size_t i = 0; i < e.size(); ++i) {
                const std::string ep = fmt::format("command.modulate.events[{}]", i);
                if (!r.object(e[i], ep, {"start", "duration", "omega_r", "transition"})) continue;
                PulseEvent ev;
                ev.rabi_frequency = m.omega_r;
                r.number(e[i], ep, "start", ev.start_time);
                r.number(e[i], ep, "duration", ev.duration);
                r.number(e[i], ep, "omega_r", ev.rabi_frequency);
                if (e[i].contains("transition")) {
                    const json& tr = e[i].at("transition");
                    if (tr.is_array() && tr.size() == 2 && tr[0].is_number_integer() &&
                        tr[1].is_number_integer())
                        ev.transition = {tr[0].get<int>(), tr[1].get<int>()};
                    else
                        r.issue(join_path(ep, "transition"), "expected two integer levels");
                }
                try {
                    ev.validate();
                } catch (const Error& err) {
                    r.issue(ep, err.what());
                }
                m.events.push_back(ev);
            }
            PulseSchedule sched{m.events, m.window};
            try {
                sched.validate();
            } catch (const Error& err) {
                r.issue("command.modulate.events", err.what());
            }
        }
    }
    if (!m.targets.empty() && !m.events.empty())
        r.issue(path, "give either targets or events, not both");
    if (v.contains("initial")) {
        const json& p = v.at("initial");
        if (!p.is_array() || p.size() != 4) {
            r.issue("command.modulate.initial", "expected four populations");
        } else {
            bool ok = true;
            for (int i = 0; i < 4; ++i) {
                if (!p[i].is_number()) {
                    ok = false;
                    continue;
                }
                m.initial[i] = p[i].get<double>();
                ok = ok && m.initial[i] >= 0.0;
            }
            r.require(ok && std::abs(m.initial.sum() - 1.0) <= 1e-10, "command.modulate.initial",
                      "must be nonnegative and sum to 1");
        }
    }
}

void read_command(Reader& r, const json& v, RunConfig& c) {
    const std::string path = "command";
    if (!r.object(v, path, {"name", "rho22", "axes", "with_delta", "preset", "modulate"})) return;
    std::string name = to_string(c.command);
    r.string(v, path, "name", name);
    if (auto cmd = parse_command(name))
        c.command = *cmd;
    else
        r.issue("command.name",
                "expected one of steady, currents, channels, sweep, modulate, coa, validate, preset");
    r.number(v, path, "rho22", c.rho22);
    r.require(c.rho22 >= 0.0 && c.rho22 <= 1.0, "command.rho22", "must lie in [0, 1]");
    if (v.contains("axes")) read_axes(r, v.at("axes"), c.axes);
    r.boolean(v, path, "with_delta", c.with_delta);
    r.string(v, path, "preset", c.preset);
    if (v.contains("modulate")) read_modulate(r, v.at("modulate"), c.modulate);
}

void read_output(Reader& r, const json& v, RunConfig& c) {
    const std::string path = "output";
    if (!r.object(v, path, {"format", "path", "precision", "caption"})) return;
    std::string format = to_string(c.format);
    r.string(v, path, "format", format);
    if (format == "csv")
        c.format = OutputFormat::Csv;
    else if (format == "json")
        c.format = OutputFormat::Json;
    else
        r.issue("output.format", "expected \"csv\" or \"json\"");
    r.string(v, path, "path", c.path);
    r.integer(v, path, "precision", c.precision);
    r.require(c.precision >= 1 && c.precision <= 17, "output.precision", "must lie in 1..17");
    r.string(v, path, "caption", c.caption);
}

// Checks that need the whole configuration.
void cross_checks(Reader& r, const RunConfig& c) {
    const Scenario& s = c.scenario;
    try {
        s.validate();
    } catch (const Error& e) {
        r.issue("scenario", e.what());
        return;
    }
    const bool has_preset = !c.preset.empty();
    switch (c.command) {
        case Command::Preset:
            if (!has_preset) {
                r.issue("command.preset", "required for the preset command");
            } else {
                bool known = false;
                for (const auto& n : preset_names()) known = known || n == c.preset;
                if (!known) r.issue("command.preset", fmt::format("unknown preset \"{}\"", c.preset));
            }
            break;
        case Command::Sweep:
            r.require(c.axes.size() == 1 || c.axes.size() == 2, "command.axes",
                      "sweep takes one or two axes");
            break;
        case Command::Channels:
            r.require(s.topology == Topology::Common, "scenario.topology",
                      "channels needs common reservoirs");
            break;
        case Command::Modulate:
            r.require(s.regime() == Regime::ResonantDegenerate, "scenario",
                      "modulate needs equal resonant frequencies and rates gamma^{mn} equal per "
                      "channel with common reservoirs");
            break;
        default: break;
    }
}

}  // namespace

ParseResult parse_config(std::string_view text) {
    ParseResult out;
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        ConfigIssue is;
        is.line = 1;
        is.column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++is.line;
                is.column = 1;
            } else {
                ++is.column;
            }
        }
        std::string msg = e.what();
        if (const auto p = msg.find(": "); p != std::string::npos) msg = msg.substr(p + 2);
        is.message = "syntax error: " + msg;
        out.issues.push_back(is);
        return out;
    }

    RunConfig c;
    c.scenario.params = {3.0, 4.0, 0.0};
    c.scenario.left = ReservoirSpec::flat(ReservoirLabel::Left, 100.0, 0.003);
    c.scenario.right = ReservoirSpec::flat(ReservoirLabel::Right, 21.0, 0.003);

    Reader r(out.issues);
    if (r.object(root, "", {"scenario", "command", "output"})) {
        if (root.contains("scenario")) {
            read_scenario(r, root.at("scenario"), c.scenario);
        } else {
            json empty = json::object();
            read_scenario(r, empty, c.scenario);
        }
        if (root.contains("command")) read_command(r, root.at("command"), c);
        if (root.contains("output")) read_output(r, root.at("output"), c);
        if (out.issues.empty()) cross_checks(r, c);
    }
    if (out.issues.empty()) out.config = std::move(c);
    return out;
}

std::vector<std::string> preset_names() {
    return {"fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6"};
}

namespace {

Scenario detuned_base(double g) {
    Scenario s;
    s.params = {3.0, 4.0, g};
    s.topology = Topology::Common;
    s.left = ReservoirSpec::flat(ReservoirLabel::Left, 100.0, 0.003);
    s.right = ReservoirSpec::flat(ReservoirLabel::Right, 21.0, 0.003);
    return s;
}

}  // namespace

RunConfig preset_config(std::string_view name) {
    RunConfig c;
    c.command = Command::Sweep;
    c.with_delta = true;
    if (name == "fig2a") {
        c.scenario = detuned_base(0.0);
        c.axes = {{Axis::G, 0.0, 3.0, 61}};
        c.caption = "w1=3, w2=4, T_R=21, T_L=100, gamma=0.003; g in [0, 3]";
    } else if (name == "fig2b") {
        c.scenario = detuned_base(0.3);
        c.axes = {{Axis::TL, 21.0, 200.0, 50}};
        c.caption = "w1=3, w2=4, T_R=21, g=0.3, gamma=0.003; T_L in [21, 200] (grid chosen here)";
    } else if (name == "fig3") {
        c.scenario = detuned_base(0.3);
        c.axes = {{Axis::TL, 21.0, 200.0, 30}, {Axis::G, 0.03, 3.0, 30}};
        c.caption = "w1=3, w2=4, T_R=21, gamma=0.003; T_L in [21, 200] x g in [0.03, 3]";
    } else if (name == "fig4") {
        c.command = Command::Modulate;
        c.with_delta = false;
        c.scenario = detuned_base(0.3);
        c.scenario.params.omega2 = 3.0;
        c.modulate.targets = {0.7, 0.3, 0.0, 0.2, 0.4};
        c.caption = "w=3, g=0.3, T_R=21, T_L=100, gamma=0.003, Omega_R=0.5 pi, window 50";
    } else if (name == "fig5") {
        c.scenario = detuned_base(0.3);
        c.axes = {{Axis::GammaMinus, 0.0003, 0.006, 30}, {Axis::GammaPlus, 0.0003, 0.006, 30}};
        c.caption = "w1=3, w2=4, g=0.3, T_R=21, T_L=100; gamma_minus x gamma_plus in [3e-4, 6e-3]";
    } else if (name == "fig6") {
        c.scenario = detuned_base(0.3);
        c.with_delta = false;
        c.axes = {{Axis::TL, 30.0, 200.0, 50}};
        c.caption = "w1=3, w2=4, T_R=21, gamma=0.003; g=0.3 and T_L in [30, 200] chosen here";
    } else {
        fail(ErrorCode::Config, fmt::format("unknown preset \"{}\"", name));
    }
    c.preset = std::string(name);
    return c;
}

std::string config_to_json(const RunConfig& c) {
    const Scenario& s = c.scenario;
    auto entry = [](const RateEntry& e) {
        return json{{"g11", e.g11}, {"g22", e.g22}, {"g12", e.g12}};
    };
    auto res = [&](const ReservoirSpec& r) {
        return json{{"minus", entry(r.rate(Channel::Minus))}, {"plus", entry(r.rate(Channel::Plus))}};
    };
    json axes = json::array();
    for (const AxisSpec& a : c.axes)
        axes.push_back({{"axis", to_string(a.axis)}, {"start", a.start}, {"stop", a.stop},
                        {"points", a.points}});
    json events = json::array();
    for (const PulseEvent& e : c.modulate.events)
        events.push_back({{"start", e.start_time},
                          {"duration", e.duration},
                          {"omega_r", e.rabi_frequency},
                          {"transition", {e.transition.first, e.transition.second}}});
    const auto& p = c.modulate.initial;
    json j = {
        {"scenario",
         {{"omega1", s.params.omega1},
          {"omega2", s.params.omega2},
          {"g", s.params.g},
          {"topology", s.topology == Topology::Common ? "common" : "independent"},
          {"T_L", s.left.temperature},
          {"T_R", s.right.temperature},
          {"rate_table", {{"L", res(s.left)}, {"R", res(s.right)}}}}},
        {"command",
         {{"name", to_string(c.command)},
          {"rho22", c.rho22},
          {"axes", axes},
          {"with_delta", c.with_delta},
          {"preset", c.preset},
          {"modulate",
           {{"omega_r", c.modulate.omega_r},
            {"window", c.modulate.window},
            {"targets", c.modulate.targets},
            {"events", events},
            {"initial", {p[0], p[1], p[2], p[3]}},
            {"sample_dt", c.modulate.sampling.sample_dt},
            {"drive_samples", c.modulate.sampling.drive_samples}}}}},
        {"output",
         {{"format", to_string(c.format)},
          {"path", c.path},
          {"precision", c.precision},
          {"caption", c.caption}}}};
    return j.dump(2) + "\n";
}

}  // namespace qheat
