/* Copyright 2026 The qheat Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

/* Exercises the C interface through the shared library only. */

#include "qheat/qheat.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                   \
    do {                                                               \
        if (!(cond)) {                                                 \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                \
        }                                                              \
    } while (0)

static qh_scenario* reference(double omega2, qh_topology topology) {
    qh_scenario* s = NULL;
    EXPECT(qh_scenario_create(3.0, omega2, 0.3, topology, &s) == QH_OK);
    EXPECT(qh_scenario_set_reservoir(s, QH_LEFT, 100.0, 0.003, 0.003) == QH_OK);
    EXPECT(qh_scenario_set_reservoir(s, QH_RIGHT, 21.0, 0.003, 0.003) == QH_OK);
    return s;
}

static void test_scenario(void) {
    qh_scenario* s = reference(4.0, QH_COMMON);
    qh_regime regime;
    EXPECT(qh_scenario_regime(s, &regime) == QH_OK);
    EXPECT(regime == QH_DETUNED_COUPLED);

    double p[4];
    EXPECT(qh_steady_state(s, 0.0, p) == QH_OK);
    EXPECT(fabs(p[0] + p[1] + p[2] + p[3] - 1.0) < 1e-12);
    EXPECT(p[0] > p[1] && p[1] > p[2] && p[2] > p[3]);

    qh_currents q;
    EXPECT(qh_heat_currents(s, 0.0, &q) == QH_OK);
    /* Reference value from the independent master-equation oracle. */
    EXPECT(fabs(q.total[QH_LEFT] - 0.013613215909226529) < 1e-12);
    EXPECT(fabs(q.total[QH_LEFT] + q.total[QH_RIGHT]) < 1e-12);
    EXPECT(fabs(q.direct[QH_LEFT] + q.cross[QH_LEFT] - q.total[QH_LEFT]) < 1e-12);
    EXPECT(q.cross[QH_LEFT] < 0.0);
    EXPECT(q.inverse_cross[QH_LEFT] == 1);

    double c = 0.0;
    EXPECT(qh_coa(s, 0.0, &c) == QH_OK);
    EXPECT(c > 0.0 && c < 1.0);

    EXPECT(qh_scenario_set_rates(s, QH_LEFT, QH_MINUS, 0.004, 0.001, 0.002) == QH_OK);
    EXPECT(qh_heat_currents(s, 0.0, &q) == QH_OK);
    qh_scenario_destroy(s);
}

static void test_degenerate(void) {
    qh_scenario* s = reference(3.0, QH_COMMON);
    qh_regime regime;
    EXPECT(qh_scenario_regime(s, &regime) == QH_OK);
    EXPECT(regime == QH_RESONANT_DEGENERATE);
    qh_currents q0, q3;
    EXPECT(qh_heat_currents(s, 0.0, &q0) == QH_OK);
    EXPECT(qh_heat_currents(s, 0.3, &q3) == QH_OK);
    EXPECT(fabs(q3.total[QH_LEFT] - 0.7 * q0.total[QH_LEFT]) < 1e-12);
    double c = 0.0;
    EXPECT(qh_coa(s, 1.0, &c) == QH_OK);
    EXPECT(fabs(c - 1.0) < 1e-9);
    qh_scenario_destroy(s);
}

static void test_errors(void) {
    qh_scenario* s = NULL;
    EXPECT(qh_scenario_create(-3.0, 4.0, 0.3, QH_COMMON, &s) == QH_ERR_INVALID_ARGUMENT);
    EXPECT(s == NULL);
    EXPECT(strlen(qh_last_error()) > 0);
    EXPECT(qh_scenario_create(3.0, 4.0, 0.3, QH_COMMON, NULL) == QH_ERR_INVALID_ARGUMENT);

    s = reference(4.0, QH_COMMON);
    EXPECT(qh_scenario_set_reservoir(s, QH_LEFT, -1.0, 0.003, 0.003) == QH_ERR_INVALID_ARGUMENT);
    double p[4];
    EXPECT(qh_steady_state(s, 2.0, p) == QH_ERR_INVALID_ARGUMENT);
    EXPECT(qh_steady_state(NULL, 0.0, p) == QH_ERR_INVALID_ARGUMENT);
    qh_scenario_destroy(s);
    qh_scenario_destroy(NULL);

    EXPECT(strcmp(qh_status_string(QH_OK), "") != 0);
    EXPECT(strcmp(qh_version(), "0.1.0") == 0);
}

static void test_config_and_run(void) {
    const char* bad = "{\"scenario\": {\"T_L\": -1, \"omega1\": 0}}";
    qh_config* c = NULL;
    EXPECT(qh_config_parse(bad, strlen(bad), &c) == QH_ERR_CONFIG);
    EXPECT(strstr(qh_last_error(), "scenario.T_L") != NULL);
    EXPECT(strstr(qh_last_error(), "scenario.omega1") != NULL);

    const char* good = "{\"scenario\": {\"g\": 0.3}, \"output\": {\"path\": \"x/out\"}}";
    EXPECT(qh_config_parse(good, strlen(good), &c) == QH_OK);
    EXPECT(strcmp(qh_config_output_path(c), "x/out") == 0);
    EXPECT(qh_config_set_command(c, "currents") == QH_OK);
    EXPECT(qh_config_set_command(c, "plot") == QH_ERR_CONFIG);

    qh_result* r = NULL;
    EXPECT(qh_run(c, 1, 0, QH_FORMAT_CONFIG, &r) == QH_OK);
    EXPECT(qh_result_exit_code(r) == 0);
    EXPECT(qh_result_file_count(r) >= 2);
    EXPECT(strcmp(qh_result_file_suffix(r, 0), "") == 0);
    size_t n = 0;
    const char* text = qh_result_file_content(r, 0, &n);
    EXPECT(n > 0 && strncmp(text, "reservoir,T,Q", 13) == 0);
    EXPECT(qh_result_file_content(r, 99, &n) == NULL);
    qh_result_destroy(r);
    qh_config_destroy(c);

    EXPECT(qh_config_default(&c) == QH_OK);
    EXPECT(qh_config_set_preset(c, "fig9") == QH_ERR_CONFIG);
    EXPECT(qh_config_set_preset(c, "fig2b") == QH_OK);
    qh_result* a = NULL;
    qh_result* b = NULL;
    EXPECT(qh_run(c, 1, 0, QH_FORMAT_JSON, &a) == QH_OK);
    EXPECT(qh_run(c, 3, 0, QH_FORMAT_JSON, &b) == QH_OK);
    size_t na = 0, nb = 0;
    const char* ta = qh_result_file_content(a, 0, &na);
    const char* tb = qh_result_file_content(b, 0, &nb);
    EXPECT(ta[0] == '{');
    EXPECT(na == nb && memcmp(ta, tb, na) == 0);
    qh_result_destroy(a);
    qh_result_destroy(b);
    qh_config_destroy(c);
}

int main(void) {
    test_scenario();
    test_degenerate();
    test_errors();
    test_config_and_run();
    if (failures) {
        fprintf(stderr, "%d check(s) failed\n", failures);
        return 1;
    }
    printf("capi: all checks passed\n");
    return 0;
}
