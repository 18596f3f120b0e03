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


#include "qheat/modulator.hpp"

#include "qheat/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace qheat {

namespace odeint = boost::numeric::odeint;

RabiPopulations rabi_populations(double rho22, double rho33, double omega_r, double t) {
    if (t == 0.0) return {rho22, rho33};
    const double ap = rho33 + rho22, am = rho33 - rho22;
    const double c = std::cos(omega_r * t);
    const double upper = 0.5 * am * c + 0.5 * ap;
    // Lower level by conservation so that the pair sum is exact.
    return {ap - upper, upper};
}

double solve_pulse_duration(double target, double rho22, double rho33, double omega_r) {
    if (!(omega_r >= 0.0) || !std::isfinite(omega_r))
        fail(ErrorCode::InvalidArgument, "Rabi frequency must be finite and >= 0");
    if (target == rho22) return 0.0;
    const double lo = std::min(rho22, rho33), hi = std::max(rho22, rho33);
    if (target < lo - 1e-12 || target > hi + 1e-12 || omega_r == 0.0 || lo == hi)
        fail(ErrorCode::UnreachableTarget,
             fmt::format("rho22 = {} lies outside the Rabi orbit [{}, {}]", target, lo, hi));
    const double x = std::clamp((rho33 + rho22 - 2.0 * target) / (rho33 - rho22), -1.0, 1.0);
    return std::acos(x) / omega_r;
}

std::vector<RabiPopulations> integrate_rabi(double rho22, double rho33, double omega_r,
                                            const std::vector<double>& times) {
    using State = std::array<double, 4>;  // Re C, Im C, Re B, Im B
    const double h = 0.5 * omega_r;
    auto rhs = [h](const State& x, State& dx, double) {
        dx[0] = h * x[3];
        dx[1] = -h * x[2];
        dx[2] = h * x[1];
        dx[3] = -h * x[0];
    };
    State from2{0.0, 0.0, 1.0, 0.0};
    State from3{1.0, 0.0, 0.0, 0.0};
    double t = 0.0;
    std::vector<RabiPopulations> out;
    out.reserve(times.size());
    for (double next : times) {
        if (next < t) fail(ErrorCode::InvalidArgument, "integrate_rabi: times must be increasing");
        if (next > t) {
            for (State* x : {&from2, &from3})
                odeint::integrate_adaptive(
                    odeint::make_controlled(kFreeAbsTol, kFreeRelTol,
                                            odeint::runge_kutta_dopri5<State>()),
                    rhs, *x, t, next, 1e-3 * (next - t));
            t = next;
        }
        auto p = [](const State& x, int k) { return x[k] * x[k] + x[k + 1] * x[k + 1]; };
        out.push_back({rho22 * p(from2, 2) + rho33 * p(from3, 2),
                       rho22 * p(from2, 0) + rho33 * p(from3, 0)});
    }
    return out;
}

PopulationVector evolve_free(const Matrix4& m, const PopulationVector& state0, double t_end) {
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        fail(ErrorCode::InvalidArgument, "evolution time must be finite and >= 0");
    const double scale = m.diagonal().cwiseAbs().maxCoeff();
    if (t_end == 0.0 || scale == 0.0) return state0;

    using State = std::array<double, 4>;
    auto rhs = [&m](const State& x, State& dx, double) {
        Eigen::Map<Vector4>(dx.data()) = m * Eigen::Map<const Vector4>(x.data());
    };
    auto stepper = odeint::make_controlled(kFreeAbsTol, kFreeRelTol,
                                           odeint::runge_kutta_dopri5<State>());
    State x{state0[0], state0[1], state0[2], state0[3]};
    double t = 0.0;
    double dt = std::min(t_end, 0.01 / scale);
    // Zero column sums bound the spectrum by 2 * scale (Gershgorin), so this
    // keeps h * lambda inside the stability interval on the negative real axis.
    const double dt_max = 1.5 / scale;
    const double eps = std::numeric_limits<double>::epsilon();
    while (t_end - t > 4.0 * eps * t_end) {
        dt = std::min({dt, dt_max, t_end - t});
        if (stepper.try_step(rhs, x, t, dt) == odeint::fail) {
            if (dt < 16.0 * eps * std::max(t, 1.0))
                fail(ErrorCode::StepSizeUnderflow,
                     fmt::format("step size underflow at t = {} (dt = {:.3e})", t, dt));
        }
    }
    return Vector4(x[0], x[1], x[2], x[3]);
}

RelaxationResult relax_to_steady_state(const Matrix4& m, const PopulationVector& state0,
                                       double residual_tol, double max_time) {
    RelaxationResult r;
    r.state = state0;
    r.residual = (m * state0).norm();
    const double scale = m.diagonal().cwiseAbs().maxCoeff();
    double chunk = scale > 0.0 ? 10.0 / scale : 1.0;
    while (r.residual >= residual_tol) {
        if (r.time > max_time)
            fail(ErrorCode::InvariantViolation,
                 fmt::format("no convergence to ||M rho|| < {:.1e} within t = {}", residual_tol,
                             max_time));
        r.state = evolve_free(m, r.state, chunk);
        r.time += chunk;
        r.residual = (m * r.state).norm();
        chunk *= 2.0;
    }
    return r;
}

void PulseEvent::validate() const {
    if (!(duration >= 0.0) || !std::isfinite(duration))
        fail(ErrorCode::InvalidArgument, fmt::format("pulse duration {} must be >= 0", duration));
    if (!(rabi_frequency >= 0.0) || !std::isfinite(rabi_frequency))
        fail(ErrorCode::InvalidArgument,
             fmt::format("Rabi frequency {} must be >= 0", rabi_frequency));
    if (!std::isfinite(start_time) || start_time < 0.0)
        fail(ErrorCode::InvalidArgument, fmt::format("pulse start {} must be >= 0", start_time));
    const auto [a, b] = transition;
    if (a < 1 || a > 4 || b < 1 || b > 4 || a == b)
        fail(ErrorCode::InvalidArgument,
             fmt::format("pulse transition ({}, {}) needs distinct levels in 1..4", a, b));
}

void PulseSchedule::validate() const {
    if (!(relaxation_window >= 0.0) || !std::isfinite(relaxation_window))
        fail(ErrorCode::InvalidArgument, "relaxation window must be >= 0");
    for (std::size_t i = 0; i < events.size(); ++i) {
        events[i].validate();
        if (i == 0) continue;
        const PulseEvent& prev = events[i - 1];
        if (!(events[i].start_time > prev.start_time))
            fail(ErrorCode::InvalidArgument,
                 fmt::format("pulse {} does not start after pulse {}", i + 1, i));
        if (events[i].start_time < prev.start_time + prev.duration)
            fail(ErrorCode::InvalidArgument, fmt::format("pulse {} overlaps pulse {}", i + 1, i));
    }
}

const char* to_string(Phase p) noexcept { return p == Phase::Drive ? "drive" : "free"; }

void TimeSeries::validate() const {
    for (const Sample& s : samples) {
        if (s.populations.minCoeff() < -1e-12 || std::abs(s.populations.sum() - 1.0) > 1e-10)
            fail(ErrorCode::InvariantViolation,
                 fmt::format("invalid populations at t = {}", s.t));
    }
}

namespace {

class Simulator {
public:
    Simulator(const Scenario& scenario, const PopulationVector& initial, ScheduleOptions options)
        : rm_(rate_matrix(scenario)),
          m_(rm_.total()),
          lambdas_(spectral_structure(scenario).lambdas),
          state_(initial),
          options_(options) {
        if (!(options_.sample_dt > 0.0) || options_.drive_samples < 1)
            fail(ErrorCode::InvalidArgument, "sampling interval and drive samples must be positive");
        if (initial.minCoeff() < 0.0 || std::abs(initial.sum() - 1.0) > 1e-10)
            fail(ErrorCode::InvalidArgument, "initial populations must be a probability vector");
        record(Phase::Free);
    }

    double time() const noexcept { return t_; }
    const PopulationVector& state() const noexcept { return state_; }
    TimeSeries& series() noexcept { return series_; }

    void relax(double duration) {
        if (duration <= 0.0) return;
        const int n = std::max(1, static_cast<int>(std::ceil(duration / options_.sample_dt - 1e-9)));
        const double t0 = t_;
        for (int k = 1; k <= n; ++k) {
            const double dt = duration / n;
            state_ = evolve_free(m_, state_, dt);
            t_ = k == n ? t0 + duration : t0 + k * dt;
            record(Phase::Free);
        }
    }

    void pulse(const PulseEvent& e) {
        const int a = e.transition.first - 1, b = e.transition.second - 1;
        const double pa = state_[a], pb = state_[b];
        const double t0 = t_;
        const int n = options_.drive_samples;
        for (int k = 1; k <= n; ++k) {
            const double tau = k == n ? e.duration : e.duration * k / n;
            const RabiPopulations r = rabi_populations(pa, pb, e.rabi_frequency, tau);
            state_[a] = r.lower;
            state_[b] = r.upper;
            t_ = t0 + tau;
            record(Phase::Drive);
        }
        series_.samples.back().coherence_dropped = e.duration > 0.0 && e.rabi_frequency > 0.0;
    }

    // Instantaneous reassignment used when the target lies outside the orbit.
    void generalized_transfer(double target) {
        const double r22 = state_[1];
        if (target <= r22) {
            state_[2] += r22 - target;
        } else {
            const double f = (1.0 - target) / (1.0 - r22);
            for (int i : {0, 2, 3}) state_[i] *= f;
        }
        state_[1] = target;
        record(Phase::Drive);
        series_.samples.back().generalized = true;
    }

    double q_max_left() const {
        // Q_L at rho22 = 0 from the residual state of the family.
        const PopulationVector res = steady_state(rm_, 0.0).populations();
        return heat_flow(rm_.left.total(), res, lambdas_);
    }

private:
    void record(Phase phase) {
        Sample s;
        s.t = t_;
        s.populations = state_;
        s.q_left = heat_flow(rm_.left.total(), state_, lambdas_);
        s.q_right = heat_flow(rm_.right.total(), state_, lambdas_);
        s.phase = phase;
        series_.samples.push_back(s);
    }

    RateMatrix rm_;
    Matrix4 m_;
    Vector4 lambdas_;
    PopulationVector state_;
    ScheduleOptions options_;
    double t_ = 0.0;
    TimeSeries series_;
};

void require_degenerate(const Scenario& scenario, const char* op) {
    scenario.validate();
    if (scenario.regime() != Regime::ResonantDegenerate)
        fail(ErrorCode::RegimeMismatch,
             fmt::format("{} needs the {} regime, got {}", op,
                         to_string(Regime::ResonantDegenerate), to_string(scenario.regime())));
}

}  // namespace

TimeSeries run_schedule(const Scenario& scenario, const PulseSchedule& schedule,
                        const PopulationVector& initial, const ScheduleOptions& options) {
    require_degenerate(scenario, "run_schedule");
    schedule.validate();
    Simulator sim(scenario, initial, options);
    for (const PulseEvent& e : schedule.events) {
        sim.relax(e.start_time - sim.time());
        sim.pulse(e);
    }
    sim.relax(schedule.relaxation_window);
    sim.series().validate();
    return std::move(sim.series());
}

ProtocolResult run_protocol(const Scenario& scenario, const std::vector<double>& targets,
                            double omega_r, double window, const PopulationVector& initial,
                            const ScheduleOptions& options) {
    require_degenerate(scenario, "run_protocol");
    if (!(omega_r > 0.0) || !(window >= 0.0))
        fail(ErrorCode::InvalidArgument, "protocol needs omega_r > 0 and window >= 0");
    Simulator sim(scenario, initial, options);
    ProtocolResult out;
    out.q_max_left = sim.q_max_left();

    auto plateau = [&](ProtocolStep step) {
        sim.relax(window);
        const Sample& last = sim.series().samples.back();
        step.plateau_left = last.q_left;
        step.plateau_right = last.q_right;
        out.steps.push_back(step);
    };

    plateau({initial[1], 0.0, 0.0, false, 0.0, 0.0});
    for (double target : targets) {
        if (!(target >= 0.0 && target <= 1.0))
            fail(ErrorCode::InvalidArgument, fmt::format("target rho22 {} outside [0, 1]", target));
        ProtocolStep step;
        step.target_rho22 = target;
        step.start_time = sim.time();
        const double r22 = sim.state()[1], r33 = sim.state()[2];
        try {
            step.duration = solve_pulse_duration(target, r22, r33, omega_r);
            sim.pulse({sim.time(), step.duration, omega_r, {2, 3}});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UnreachableTarget) throw;
            step.generalized = true;
            sim.generalized_transfer(target);
        }
        plateau(step);
    }
    sim.series().validate();
    out.series = std::move(sim.series());
    return out;
}

}  // namespace qheat
