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


#include "qheat/qheat.h"

#include "qheat/config.hpp"
#include "qheat/entanglement.hpp"
#include "qheat/error.hpp"
#include "qheat/runner.hpp"

#include <fmt/format.h>

#include <exception>
#include <memory>
#include <new>
#include <string>

struct qh_scenario {
    qheat::Scenario value;
};

struct qh_config {
    qheat::RunConfig value;
};

struct qh_result {
    qheat::RunResult value;
};

namespace {

thread_local std::string g_last_error;

qh_status to_status(qheat::ErrorCode code) {
    using qheat::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return QH_ERR_INVALID_ARGUMENT;
        case ErrorCode::RegimeMismatch: return QH_ERR_REGIME_MISMATCH;
        case ErrorCode::DegenerateSteadyState: return QH_ERR_DEGENERATE_STEADY_STATE;
        case ErrorCode::NotDegenerate: return QH_ERR_NOT_DEGENERATE;
        case ErrorCode::NullspaceDimension: return QH_ERR_NULLSPACE_DIMENSION;
        case ErrorCode::UnreachableTarget: return QH_ERR_UNREACHABLE_TARGET;
        case ErrorCode::StepSizeUnderflow: return QH_ERR_STEP_SIZE_UNDERFLOW;
        case ErrorCode::InvariantViolation: return QH_ERR_INVARIANT_VIOLATION;
        case ErrorCode::Config: return QH_ERR_CONFIG;
        case ErrorCode::Io: return QH_ERR_IO;
    }
    return QH_ERR_INTERNAL;
}

qh_status set_error(qh_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Runs f, translating exceptions into status codes.
template <typename F>
qh_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const qheat::Error& e) {
        return set_error(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(QH_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(QH_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(QH_ERR_INTERNAL, "unknown error");
    }
}

qh_status null_argument(const char* name) {
    return set_error(QH_ERR_INVALID_ARGUMENT, fmt::format("{} must not be null", name));
}

qheat::ReservoirSpec& reservoir(qh_scenario* s, qh_reservoir r) {
    if (r != QH_LEFT && r != QH_RIGHT) qheat::fail(qheat::ErrorCode::InvalidArgument, "bad reservoir");
    return r == QH_LEFT ? s->value.left : s->value.right;
}

}  // namespace

extern "C" {

const char* qh_version(void) { return QHEAT_VERSION; }

const char* qh_status_string(qh_status status) {
    switch (status) {
        case QH_OK: return "ok";
        case QH_ERR_INVALID_ARGUMENT: return "invalid argument";
        case QH_ERR_REGIME_MISMATCH: return "regime mismatch";
        case QH_ERR_DEGENERATE_STEADY_STATE: return "degenerate steady state";
        case QH_ERR_NOT_DEGENERATE: return "not degenerate";
        case QH_ERR_NULLSPACE_DIMENSION: return "nullspace dimension";
        case QH_ERR_UNREACHABLE_TARGET: return "unreachable target";
        case QH_ERR_STEP_SIZE_UNDERFLOW: return "step size underflow";
        case QH_ERR_INVARIANT_VIOLATION: return "invariant violation";
        case QH_ERR_CONFIG: return "configuration error";
        case QH_ERR_IO: return "i/o error";
        case QH_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* qh_last_error(void) { return g_last_error.c_str(); }

qh_status qh_scenario_create(double omega1, double omega2, double g, qh_topology topology,
                             qh_scenario** out) {
    if (!out) return null_argument("out");
    return guarded([&] {
        if (topology != QH_COMMON && topology != QH_INDEPENDENT)
            qheat::fail(qheat::ErrorCode::InvalidArgument, "bad topology");
        auto s = std::make_unique<qh_scenario>();
        s->value.params = {omega1, omega2, g};
        s->value.params.validate();
        s->value.topology =
            topology == QH_COMMON ? qheat::Topology::Common : qheat::Topology::Independent;
        *out = s.release();
        return QH_OK;
    });
}

void qh_scenario_destroy(qh_scenario* s) { delete s; }

qh_status qh_scenario_set_reservoir(qh_scenario* s, qh_reservoir r, double temperature,
                                    double gamma_minus, double gamma_plus) {
    if (!s) return null_argument("scenario");
    return guarded([&] {
        qheat::ReservoirSpec& res = reservoir(s, r);
        auto spec = qheat::ReservoirSpec::channels(res.label, temperature, gamma_minus, gamma_plus);
        spec.validate();
        res = spec;
        return QH_OK;
    });
}

qh_status qh_scenario_set_rates(qh_scenario* s, qh_reservoir r, qh_channel c, double g11,
                                double g22, double g12) {
    if (!s) return null_argument("scenario");
    return guarded([&] {
        if (c != QH_MINUS && c != QH_PLUS)
            qheat::fail(qheat::ErrorCode::InvalidArgument, "bad channel");
        qheat::ReservoirSpec spec = reservoir(s, r);
        spec.rates[c] = {g11, g22, g12};
        spec.validate();
        reservoir(s, r) = spec;
        return QH_OK;
    });
}

qh_status qh_scenario_regime(const qh_scenario* s, qh_regime* out) {
    if (!s) return null_argument("scenario");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = static_cast<qh_regime>(static_cast<int>(s->value.regime()));
        return QH_OK;
    });
}

qh_status qh_steady_state(const qh_scenario* s, double rho22, double populations[4]) {
    if (!s) return null_argument("scenario");
    if (!populations) return null_argument("populations");
    return guarded([&] {
        s->value.validate();
        const auto p = qheat::steady_state(qheat::rate_matrix(s->value), rho22).populations();
        for (int i = 0; i < 4; ++i) populations[i] = p[i];
        return QH_OK;
    });
}

qh_status qh_heat_currents(const qh_scenario* s, double rho22, qh_currents* out) {
    if (!s) return null_argument("scenario");
    if (!out) return null_argument("out");
    return guarded([&] {
        s->value.validate();
        const qheat::HeatCurrentReport r = qheat::heat_currents(s->value, rho22);
        for (int k = 0; k < 2; ++k) {
            const auto label = static_cast<qheat::ReservoirLabel>(k);
            const qheat::ChannelCurrents& c = r.reservoir(label);
            const qheat::InverseFlags& f = k == 0 ? r.left_inverse : r.right_inverse;
            out->total[k] = c.total;
            out->direct[k] = c.direct;
            out->cross[k] = c.cross;
            out->inverse_direct[k] = f.direct;
            out->inverse_cross[k] = f.cross;
        }
        return QH_OK;
    });
}

qh_status qh_coa(const qh_scenario* s, double rho22, double* out) {
    if (!s) return null_argument("scenario");
    if (!out) return null_argument("out");
    return guarded([&] {
        s->value.validate();
        *out = qheat::coa_steady_state(s->value, rho22);
        return QH_OK;
    });
}

qh_status qh_config_parse(const char* text, size_t length, qh_config** out) {
    if (!text) return null_argument("text");
    if (!out) return null_argument("out");
    return guarded([&] {
        qheat::ParseResult r = qheat::parse_config(std::string_view(text, length));
        if (!r.ok()) {
            std::string msg;
            for (const auto& issue : r.issues) msg += issue.str() + "\n";
            return set_error(QH_ERR_CONFIG, msg);
        }
        *out = new qh_config{std::move(*r.config)};
        return QH_OK;
    });
}

qh_status qh_config_default(qh_config** out) { return qh_config_parse("{}", 2, out); }

void qh_config_destroy(qh_config* c) { delete c; }

qh_status qh_config_set_command(qh_config* c, const char* name) {
    if (!c) return null_argument("config");
    if (!name) return null_argument("name");
    return guarded([&] {
        const auto cmd = qheat::parse_command(name);
        if (!cmd) return set_error(QH_ERR_CONFIG, fmt::format("unknown subcommand \"{}\"", name));
        c->value.command = *cmd;
        return QH_OK;
    });
}

qh_status qh_config_set_preset(qh_config* c, const char* name) {
    if (!c) return null_argument("config");
    if (!name) return null_argument("name");
    return guarded([&] {
        qheat::preset_config(name);  // rejects unknown names
        c->value.command = qheat::Command::Preset;
        c->value.preset = name;
        return QH_OK;
    });
}

const char* qh_config_output_path(const qh_config* c) { return c ? c->value.path.c_str() : ""; }

qh_status qh_run(const qh_config* c, int threads, int precision, qh_format format,
                 qh_result** out) {
    if (!c) return null_argument("config");
    if (!out) return null_argument("out");
    return guarded([&] {
        qheat::RunOptions opts;
        opts.threads = threads;
        if (precision > 0) opts.precision = precision;
        if (format == QH_FORMAT_CSV) opts.format = qheat::OutputFormat::Csv;
        if (format == QH_FORMAT_JSON) opts.format = qheat::OutputFormat::Json;
        *out = new qh_result{qheat::run(c->value, opts)};
        return QH_OK;
    });
}

int qh_result_exit_code(const qh_result* r) { return r ? r->value.exit_code : qheat::kExitUsage; }

const char* qh_result_message(const qh_result* r) { return r ? r->value.message.c_str() : ""; }

size_t qh_result_file_count(const qh_result* r) { return r ? r->value.files.size() : 0; }

const char* qh_result_file_suffix(const qh_result* r, size_t index) {
    if (!r || index >= r->value.files.size()) return nullptr;
    return r->value.files[index].suffix.c_str();
}

const char* qh_result_file_content(const qh_result* r, size_t index, size_t* length) {
    if (!r || index >= r->value.files.size()) return nullptr;
    const std::string& s = r->value.files[index].content;
    if (length) *length = s.size();
    return s.c_str();
}

void qh_result_destroy(qh_result* r) { delete r; }

}  // extern "C"
