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


// Thermal modulator: resonant Rabi pulses on an eigenlevel pair alternating
// with free dissipative relaxation of the populations.
//
// Pulses are instantaneous relative to dissipation: the generator is frozen
// while a pulse acts, and the coherence it leaves on the driven pair is
// dropped at pulse end (flagged in the output).

#pragma once

#include "qheat/transport.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qheat {

// Integrator tolerances for free evolution.
inline constexpr double kFreeRelTol = 1e-10;
inline constexpr double kFreeAbsTol = 1e-12;

struct RabiPopulations {
    double lower = 0.0;  // rho22 for the default transition
    double upper = 0.0;  // rho33
};

// rho33(t) = (A-/2) cos(W t) + A+/2, rho22(t) = -(A-/2) cos(W t) + A+/2,
// A+/- = rho33(0) +/- rho22(0).
RabiPopulations rabi_populations(double rho22, double rho33, double omega_r, double t);

// Smallest t >= 0 with rho22(t) = target. Throws UnreachableTarget outside
// [min(rho22, rho33), max(rho22, rho33)].
double solve_pulse_duration(double target, double rho22, double rho33, double omega_r);

// Direct integration of the rotating-frame amplitude equations at zero
// detuning for an incoherent mixture of the two levels. Returns
// (rho22, rho33) at each requested time.
std::vector<RabiPopulations> integrate_rabi(double rho22, double rho33, double omega_r,
                                            const std::vector<double>& times);

// d rho/dt = m rho from state0 over [0, t] with an adaptive Dormand-Prince 5(4)
// pair. Throws StepSizeUnderflow if the step collapses.
PopulationVector evolve_free(const Matrix4& m, const PopulationVector& state0, double t);

struct RelaxationResult {
    PopulationVector state = PopulationVector::Zero();
    double time = 0.0;
    double residual = 0.0;  // ||m state||
};

// Free evolution in doubling chunks until ||m rho|| < residual_tol.
// Throws InvariantViolation if max_time passes first.
RelaxationResult relax_to_steady_state(const Matrix4& m, const PopulationVector& state0,
                                       double residual_tol = 1e-10, double max_time = 1e7);

struct PulseEvent {
    double start_time = 0.0;
    double duration = 0.0;
    double rabi_frequency = 0.0;
    std::pair<int, int> transition{2, 3};  // 1-based eigenlevels

    void validate() const;
};

struct PulseSchedule {
    std::vector<PulseEvent> events;
    double relaxation_window = 50.0;  // free evolution after the last pulse

    // Non-overlapping events with strictly increasing start times.
    void validate() const;
};

enum class Phase { Drive, Free };

const char* to_string(Phase p) noexcept;

struct Sample {
    double t = 0.0;
    PopulationVector populations = PopulationVector::Zero();
    double q_left = 0.0;
    double q_right = 0.0;
    Phase phase = Phase::Free;
    // Set on the last sample of a pulse: the pair coherence was dropped, or the
    // transfer was generalized because the target lay outside the Rabi orbit.
    bool coherence_dropped = false;
    bool generalized = false;
};

struct TimeSeries {
    std::vector<Sample> samples;

    // Nonnegative populations summing to one within 1e-10 at every sample.
    void validate() const;
};

struct ScheduleOptions {
    double sample_dt = 0.5;  // free-evolution sampling interval
    int drive_samples = 16;  // samples per pulse
};

// Executes the schedule from the initial populations. ResonantDegenerate only.
TimeSeries run_schedule(const Scenario& scenario, const PulseSchedule& schedule,
                        const PopulationVector& initial, const ScheduleOptions& options = {});

// Staircase driven by rho22 targets: each step pulses the (2,3) pair to the
// target and then relaxes for the window. A target outside the Rabi orbit is
// reached by a generalized transfer: below the orbit the excess rho22 moves to
// rho33; above it the other levels are scaled by (1 - target)/(1 - rho22).
struct ProtocolStep {
    double target_rho22 = 0.0;
    double start_time = 0.0;
    double duration = 0.0;
    bool generalized = false;
    double plateau_left = 0.0;  // Q_L at the end of the following window
    double plateau_right = 0.0;
};

struct ProtocolResult {
    TimeSeries series;
    std::vector<ProtocolStep> steps;
    double q_max_left = 0.0;  // maximal current of the degenerate family
};

ProtocolResult run_protocol(const Scenario& scenario, const std::vector<double>& targets,
                            double omega_r, double window, const PopulationVector& initial,
                            const ScheduleOptions& options = {});

}  // namespace qheat
