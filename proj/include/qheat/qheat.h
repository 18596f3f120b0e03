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


/* C interface to the qheat library. All functions return a qh_status; on
 * failure qh_last_error() holds a message for the calling thread. Handles are
 * opaque and owned by the caller, who releases them with the matching
 * *_destroy function. */

#ifndef QHEAT_QHEAT_H_
#define QHEAT_QHEAT_H_

#include <stddef.h>

#if defined(_WIN32)
#define QH_API __declspec(dllexport)
#else
#define QH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qh_status {
    QH_OK = 0,
    QH_ERR_INVALID_ARGUMENT = 1,
    QH_ERR_REGIME_MISMATCH = 2,
    QH_ERR_DEGENERATE_STEADY_STATE = 3,
    QH_ERR_NOT_DEGENERATE = 4,
    QH_ERR_NULLSPACE_DIMENSION = 5,
    QH_ERR_UNREACHABLE_TARGET = 6,
    QH_ERR_STEP_SIZE_UNDERFLOW = 7,
    QH_ERR_INVARIANT_VIOLATION = 8,
    QH_ERR_CONFIG = 9,
    QH_ERR_IO = 10,
    QH_ERR_INTERNAL = 11
} qh_status;

typedef enum qh_topology { QH_COMMON = 0, QH_INDEPENDENT = 1 } qh_topology;
typedef enum qh_reservoir { QH_LEFT = 0, QH_RIGHT = 1 } qh_reservoir;
typedef enum qh_channel { QH_MINUS = 0, QH_PLUS = 1 } qh_channel;

typedef enum qh_regime {
    QH_DETUNED_COUPLED = 0,
    QH_RESONANT_COUPLED = 1,
    QH_RESONANT_DEGENERATE = 2,
    QH_UNCOUPLED_DETUNED = 3,
    QH_UNCOUPLED_RESONANT = 4,
    QH_UNCOUPLED_INDEPENDENT = 5
} qh_regime;

typedef enum qh_format { QH_FORMAT_CONFIG = -1, QH_FORMAT_CSV = 0, QH_FORMAT_JSON = 1 } qh_format;

typedef struct qh_currents {
    double total[2]; /* indexed by qh_reservoir */
    double direct[2];
    double cross[2];
    int inverse_direct[2];
    int inverse_cross[2];
} qh_currents;

typedef struct qh_scenario qh_scenario;
typedef struct qh_config qh_config;
typedef struct qh_result qh_result;

QH_API const char* qh_version(void);
QH_API const char* qh_status_string(qh_status status);
/* Message of the last failed call on this thread, or "". */
QH_API const char* qh_last_error(void);

/* Scenario with both reservoirs at T = 0 and zero rates. */
QH_API qh_status qh_scenario_create(double omega1, double omega2, double g, qh_topology topology,
                                    qh_scenario** out);
QH_API void qh_scenario_destroy(qh_scenario* s);
/* Temperature and rates gamma^{mn}(w_-) = gamma_minus, gamma^{mn}(w_+) = gamma_plus. */
QH_API qh_status qh_scenario_set_reservoir(qh_scenario* s, qh_reservoir r, double temperature,
                                           double gamma_minus, double gamma_plus);
QH_API qh_status qh_scenario_set_rates(qh_scenario* s, qh_reservoir r, qh_channel c, double g11,
                                       double g22, double g12);
QH_API qh_status qh_scenario_regime(const qh_scenario* s, qh_regime* out);
/* Eigenbasis populations; rho22 selects the family member in the degenerate regime. */
QH_API qh_status qh_steady_state(const qh_scenario* s, double rho22, double populations[4]);
QH_API qh_status qh_heat_currents(const qh_scenario* s, double rho22, qh_currents* out);
QH_API qh_status qh_coa(const qh_scenario* s, double rho22, double* out);

/* Parses a JSON configuration. On QH_ERR_CONFIG, qh_last_error() lists every
 * violation, one per line. */
QH_API qh_status qh_config_parse(const char* text, size_t length, qh_config** out);
QH_API qh_status qh_config_default(qh_config** out);
QH_API void qh_config_destroy(qh_config* c);
QH_API qh_status qh_config_set_command(qh_config* c, const char* name);
QH_API qh_status qh_config_set_preset(qh_config* c, const char* name);
/* Output path from the configuration ("-" for stdout). Valid while c lives. */
QH_API const char* qh_config_output_path(const qh_config* c);

/* Runs the configured subcommand. precision <= 0 keeps the configured value.
 * Returns QH_OK whenever a result was produced; check qh_result_exit_code. */
QH_API qh_status qh_run(const qh_config* c, int threads, int precision, qh_format format,
                        qh_result** out);
QH_API int qh_result_exit_code(const qh_result* r);
QH_API const char* qh_result_message(const qh_result* r);
QH_API size_t qh_result_file_count(const qh_result* r);
/* Suffix appended to the output path ("" for the main table). */
QH_API const char* qh_result_file_suffix(const qh_result* r, size_t index);
QH_API const char* qh_result_file_content(const qh_result* r, size_t index, size_t* length);
QH_API void qh_result_destroy(qh_result* r);

#ifdef __cplusplus
}
#endif

#endif /* QHEAT_QHEAT_H_ */
