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


#include "qheat/runner.hpp"

#include "qheat/entanglement.hpp"
#include "qheat/error.hpp"
#include "qheat/sampling.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace qheat {

namespace {

constexpr std::array<Regime, 6> kRegimes{Regime::DetunedCoupled,     Regime::ResonantCoupled,
                                         Regime::ResonantDegenerate, Regime::UncoupledDetuned,
                                         Regime::UncoupledResonant,  Regime::UncoupledIndependent};

std::string format_number(double v, int precision, bool json) {
    if (std::isnan(v)) return json ? "null" : "nan";
    if (std::isinf(v)) return json ? "null" : (v > 0 ? "inf" : "-inf");
    return fmt::format("{:.{}g}", v, precision);
}

std::string format_cell(const Cell& c, int precision, bool json) {
    if (const double* d = std::get_if<double>(&c)) return format_number(*d, precision, json);
    if (const bool* b = std::get_if<bool>(&c)) return json ? (*b ? "true" : "false") : (*b ? "1" : "0");
    const std::string& s = std::get<std::string>(c);
    return json ? nlohmann::json(s).dump() : s;
}

double norm_of(const Matrix4& m, const PopulationVector& p) { return (m * p).norm(); }

DensityMatrix bare_state(const Scenario& s, const PopulationVector& p) {
    DensityMatrix d = DensityMatrix::Zero();
    for (int i = 0; i < 4; ++i) d(i, i) = p[i];
    return to_bare_basis(d, spectral_structure(s).basis);
}

double closed_coa(const Scenario& s, const PopulationVector& p, double rho22) {
    if (s.regime() == Regime::ResonantDegenerate) return coa_resonant_closed(rho22, s);
    // The product basis of uncoupled independent qubits has no mixing.
    const SpectralStructure st = spectral_structure(s);
    return coa_detuned_closed(p, st.product_basis ? EigenSystem{} : st.eig);
}

void require_consistent(const Scenario& s, const HeatCurrentReport& r) {
    const auto bad = report_violations(s, r);
    if (!bad.empty())
        fail(ErrorCode::InvariantViolation, fmt::format("{}", fmt::join(bad, "; ")));
}

const std::vector<std::string> kPopColumns{"rho11", "rho22", "rho33", "rho44"};

Table steady_table(const RunConfig& c) {
    const RateMatrix rm = rate_matrix(c.scenario);
    const SteadyStateResult ss = steady_state(rm, c.rho22);
    const PopulationVector p = ss.populations();
    Table t;
    t.columns = {"regime", "unique", "family_rho22"};
    t.columns.insert(t.columns.end(), kPopColumns.begin(), kPopColumns.end());
    t.columns.push_back("residual");
    std::vector<Cell> row{std::string(to_string(rm.regime)), ss.is_unique(),
                          ss.is_unique() ? 0.0 : c.rho22};
    for (int i = 0; i < 4; ++i) row.emplace_back(p[i]);
    row.emplace_back(norm_of(rm.total(), p));
    t.rows.push_back(std::move(row));
    return t;
}

Table currents_table(const RunConfig& c, bool channels) {
    const HeatCurrentReport r = heat_currents(c.scenario, c.rho22);
    require_consistent(c.scenario, r);
    const HeatCurrentReport closed = heat_current_closed(c.scenario, c.rho22);
    for (ReservoirLabel l : {ReservoirLabel::Left, ReservoirLabel::Right}) {
        const double a = r.reservoir(l).total, b = closed.reservoir(l).total;
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
            fail(ErrorCode::InvariantViolation,
                 fmt::format("closed-form and generic currents differ for {}: {} vs {}",
                             to_string(l), a, b));
    }
    Table t;
    if (channels) {
        t.columns = {"reservoir", "Q_total", "Q_direct", "Q_cross", "inverse_direct",
                     "inverse_cross"};
    } else {
        t.columns = {"reservoir", "T", "Q", "entropy_production"};
    }
    const double sigma = entropy_production(c.scenario, r);
    for (ReservoirLabel l : {ReservoirLabel::Left, ReservoirLabel::Right}) {
        const ChannelCurrents& q = r.reservoir(l);
        if (channels) {
            const InverseFlags& f = l == ReservoirLabel::Left ? r.left_inverse : r.right_inverse;
            t.rows.push_back({std::string(to_string(l)), q.total, q.direct, q.cross, f.direct,
                              f.cross});
        } else {
            t.rows.push_back({std::string(to_string(l)), c.scenario.reservoir(l).temperature,
                              q.total, sigma});
        }
    }
    return t;
}

Table coa_table(const RunConfig& c) {
    const RateMatrix rm = rate_matrix(c.scenario);
    const PopulationVector p = steady_state(rm, c.rho22).populations();
    const double general = coa_general(bare_state(c.scenario, p));
    const double closed = closed_coa(c.scenario, p, c.rho22);
    if (std::abs(general - closed) > 1e-9)
        fail(ErrorCode::InvariantViolation,
             fmt::format("closed-form COA {} differs from the generic value {}", closed, general));
    Table t;
    t.columns = {"regime", "rho22", "coa", "coa_closed"};
    t.rows.push_back({std::string(to_string(rm.regime)), c.rho22, general, closed});
    return t;
}

struct SweepOutput {
    Table main;
    std::optional<Table> zeros;
};

SweepOutput sweep_tables(const RunConfig& c, int threads) {
    const std::vector<SweepRow> rows =
        sweep(c.scenario, c.axes, SweepOptions{threads, c.with_delta, c.rho22});
    SweepOutput out;
    Table& t = out.main;
    for (const AxisSpec& a : c.axes) t.columns.emplace_back(to_string(a.axis));
    t.columns.push_back("regime");
    t.columns.insert(t.columns.end(), kPopColumns.begin(), kPopColumns.end());
    for (const char* col : {"Q_L", "Q_R", "Q_L_direct", "Q_L_cross", "Q_R_direct", "Q_R_cross",
                            "inverse_L_direct", "inverse_L_cross", "inverse_R_direct",
                            "inverse_R_cross", "coa"})
        t.columns.emplace_back(col);
    if (c.with_delta) t.columns.emplace_back("delta_Q_L");

    std::vector<double> delta;
    for (const SweepRow& r : rows) {
        std::vector<Cell> row(r.coords.begin(), r.coords.end());
        row.emplace_back(std::string(to_string(r.report.regime)));
        for (int i = 0; i < 4; ++i) row.emplace_back(r.populations[i]);
        const HeatCurrentReport& q = r.report;
        for (double v : {q.left.total, q.right.total, q.left.direct, q.left.cross, q.right.direct,
                         q.right.cross})
            row.emplace_back(v);
        for (bool f : {q.left_inverse.direct, q.left_inverse.cross, q.right_inverse.direct,
                       q.right_inverse.cross})
            row.emplace_back(f);
        row.emplace_back(coa_general(bare_state(r.scenario, r.populations)));
        if (c.with_delta) {
            row.emplace_back(*q.delta);
            delta.push_back(*q.delta);
        }
        t.rows.push_back(std::move(row));
    }

    if (c.with_delta) {
        Table z;
        if (c.axes.size() == 1) {
            z.columns = {to_string(c.axes[0].axis)};
            for (double x : zero_crossings(c.axes[0].values(), delta)) z.rows.push_back({x});
        } else {
            z.columns = {to_string(c.axes[0].axis), to_string(c.axes[1].axis)};
            for (auto [x, y] : zero_contour(c.axes[0].values(), c.axes[1].values(), delta))
                z.rows.push_back({x, y});
        }
        out.zeros = std::move(z);
    }
    return out;
}

Table series_table(const TimeSeries& ts) {
    Table t;
    t.columns = {"t"};
    t.columns.insert(t.columns.end(), kPopColumns.begin(), kPopColumns.end());
    for (const char* col : {"Q_L", "Q_R", "phase", "coherence_dropped", "generalized"})
        t.columns.emplace_back(col);
    for (const Sample& s : ts.samples) {
        std::vector<Cell> row{s.t};
        for (int i = 0; i < 4; ++i) row.emplace_back(s.populations[i]);
        row.emplace_back(s.q_left);
        row.emplace_back(s.q_right);
        row.emplace_back(std::string(to_string(s.phase)));
        row.emplace_back(s.coherence_dropped);
        row.emplace_back(s.generalized);
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct ModulateOutput {
    Table series;
    std::optional<Table> plateaus;
};

ModulateOutput modulate_tables(const RunConfig& c) {
    const ModulateConfig& m = c.modulate;
    ModulateOutput out;
    if (m.targets.empty()) {
        const PulseSchedule sched{m.events, m.window};
        out.series = series_table(run_schedule(c.scenario, sched, m.initial, m.sampling));
        return out;
    }
    const ProtocolResult r =
        run_protocol(c.scenario, m.targets, m.omega_r, m.window, m.initial, m.sampling);
    out.series = series_table(r.series);
    Table p;
    p.columns = {"step",       "target_rho22", "start",       "duration",
                 "generalized", "Q_L",         "Q_R",         "Q_L_over_Q_max"};
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const ProtocolStep& s = r.steps[i];
        p.rows.push_back({static_cast<double>(i), s.target_rho22, s.start_time, s.duration,
                          s.generalized, s.plateau_left, s.plateau_right,
                          s.plateau_left / r.q_max_left});
    }
    out.plateaus = std::move(p);
    return out;
}

std::string meta_json(const RunConfig& c, const Table& main, int precision) {
    nlohmann::json j;
    j["command"] = to_string(c.command);
    j["preset"] = c.preset;
    j["caption"] = c.caption;
    j["columns"] = main.columns;
    j["rows"] = main.rows.size();
    j["precision"] = precision;
    j["config"] = nlohmann::json::parse(config_to_json(c));
    return j.dump(2) + "\n";
}

}  // namespace

std::string render_table(const Table& table, OutputFormat format, int precision) {
    std::string out;
    if (format == OutputFormat::Csv) {
        out += fmt::format("{}\n", fmt::join(table.columns, ","));
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += format_cell(row[i], precision, false);
            }
            out += '\n';
        }
        return out;
    }
    out += "{\n  \"columns\": [";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? ", " : "") + nlohmann::json(table.columns[i]).dump();
    out += "],\n  \"rows\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out += r ? ",\n    [" : "\n    [";
        for (std::size_t i = 0; i < table.rows[r].size(); ++i)
            out += (i ? ", " : "") + format_cell(table.rows[r][i], precision, true);
        out += "]";
    }
    out += table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

Table validation_suite(int cases, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    Table t;
    t.columns = {"check", "regime", "cases", "passed", "max_error", "tolerance"};
    for (Regime regime : kRegimes) {
        struct Tally {
            const char* name;
            double tol;
            int passed = 0;
            double worst = 0.0;
            void add(double err) {
                worst = std::max(worst, err);
                if (err <= tol) ++passed;
            }
        };
        Tally nullspace{"steady_vs_nullspace", 1e-9};
        Tally currents{"currents_closed_vs_generic", 1e-12};
        Tally laws{"conservation_second_law", 0.0};
        Tally coa{"coa_closed_vs_general", 1e-9};
        Tally integ{"steady_vs_integration", 1e-9};
        for (int k = 0; k < cases; ++k) {
            const Scenario s = random_scenario(regime, rng);
            const double r22 = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const RateMatrix rm = rate_matrix(s);
            const PopulationVector p = steady_state(rm, r22).populations();

            const NullspaceResult ns = steady_state_nullspace(build_liouvillian(s).total());
            double err = 0.0;
            if (regime == Regime::ResonantDegenerate) {
                const PopulationVector res = steady_state(rm, r22).family().residual;
                err = ns.dimension == 2 ? 0.0 : 1.0;
                for (int i = 0; i < 4; ++i)
                    err = std::max(err, std::abs(ns.residual(i, i).real() - res[i]));
            } else {
                err = ns.dimension == 1 ? 0.0 : 1.0;
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j)
                        err = std::max(err, std::abs(ns.state(i, j) - (i == j ? p[i] : 0.0)));
            }
            nullspace.add(err);

            const HeatCurrentReport a = heat_currents(s, r22);
            const HeatCurrentReport b = heat_current_closed(s, r22);
            double cerr = 0.0;
            for (ReservoirLabel l : {ReservoirLabel::Left, ReservoirLabel::Right}) {
                const ChannelCurrents &x = a.reservoir(l), &y = b.reservoir(l);
                for (auto [u, v] : {std::pair{x.total, y.total}, std::pair{x.direct, y.direct},
                                    std::pair{x.cross, y.cross}})
                    cerr = std::max(cerr, std::abs(u - v) / std::max(1.0, std::abs(u)));
            }
            currents.add(cerr);
            laws.add(report_violations(s, a).empty() ? 0.0 : 1.0);

            coa.add(std::abs(coa_general(bare_state(s, p)) - closed_coa(s, p, r22)));

            if (k < 3) {
                PopulationVector start = PopulationVector::Constant(0.25);
                PopulationVector expect = p;
                if (regime == Regime::ResonantDegenerate)
                    expect = steady_state(rm, 0.25).populations();
                const RelaxationResult rr = relax_to_steady_state(rm.total(), start, 1e-10);
                integ.add((rr.state - expect).cwiseAbs().maxCoeff());
            }
        }
        for (const Tally* tl : {&nullspace, &currents, &laws, &coa, &integ}) {
            const int n = tl == &integ ? std::min(cases, 3) : cases;
            t.rows.push_back({std::string(tl->name), std::string(to_string(regime)),
                              static_cast<double>(n), static_cast<double>(tl->passed), tl->worst,
                              tl->tol});
        }
    }
    return t;
}

RunResult run(const RunConfig& input, const RunOptions& options) {
    RunResult result;
    RunConfig c = input;
    try {
        if (c.command == Command::Preset) {
            RunConfig p = preset_config(c.preset);
            p.format = c.format;
            p.path = c.path;
            p.precision = c.precision;
            c = std::move(p);
        }
        const OutputFormat format = options.format.value_or(c.format);
        const int precision = options.precision.value_or(c.precision);
        if (precision < 1 || precision > 17)
            fail(ErrorCode::Config, "precision must lie in 1..17");
        if (options.threads < 1) fail(ErrorCode::Config, "threads must be >= 1");
        const std::string ext = format == OutputFormat::Csv ? ".csv" : ".json";

        Table main;
        switch (c.command) {
            case Command::Steady: main = steady_table(c); break;
            case Command::Currents: main = currents_table(c, false); break;
            case Command::Channels:
                if (c.scenario.topology != Topology::Common)
                    fail(ErrorCode::Config, "channels needs common reservoirs");
                main = currents_table(c, true);
                break;
            case Command::Coa: main = coa_table(c); break;
            case Command::Sweep: {
                SweepOutput s = sweep_tables(c, options.threads);
                main = std::move(s.main);
                if (s.zeros)
                    result.files.push_back(
                        {".contour" + ext, render_table(*s.zeros, format, precision)});
                break;
            }
            case Command::Modulate: {
                ModulateOutput m = modulate_tables(c);
                main = std::move(m.series);
                if (m.plateaus)
                    result.files.push_back(
                        {".plateaus" + ext, render_table(*m.plateaus, format, precision)});
                break;
            }
            case Command::Validate: {
                main = validation_suite(20, 20261017ULL);
                int failed = 0, total = 0;
                for (const auto& row : main.rows) {
                    const double n = std::get<double>(row[2]), ok = std::get<double>(row[3]);
                    total += static_cast<int>(n);
                    failed += static_cast<int>(n - ok);
                }
                result.message = fmt::format("validate: {} passed, {} failed", total - failed, failed);
                if (failed > 0) result.exit_code = kExitNumeric;
                break;
            }
            case Command::Preset: break;
        }
        result.files.insert(result.files.begin(), {"", render_table(main, format, precision)});
        result.files.push_back({".meta.json", meta_json(c, main, precision)});
    } catch (const Error& e) {
        result.files.clear();
        result.exit_code = e.code() == ErrorCode::Config || e.code() == ErrorCode::InvalidArgument
                               ? kExitConfig
                               : kExitNumeric;
        result.message = fmt::format("{}: {}", to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        result.files.clear();
        result.exit_code = kExitNumeric;
        result.message = e.what();
    }
    return result;
}

}  // namespace qheat
