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

// Steady-state heat currents.
//
// Sign convention: Q_alpha = <lambda| M_alpha |rho> is positive when energy
// flows from reservoir alpha into the system. With T_L > T_R the steady state
// has Q_L > 0 and Q_R = -Q_L.

#pragma once

#include "qheat/steadystate.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qheat {

// Channel currents with |Q| below this are treated as zero by the inverse-current flags.
inline constexpr double kInverseDeadZone = 1e-14;
// heat_current warns when ||M rho|| exceeds this.
inline constexpr double kStationarityWarn = 1e-8;

struct ChannelCurrents {
    double total = 0.0;
    double direct = 0.0;
    double cross = 0.0;
};

struct InverseFlags {
    bool direct = false;
    bool cross = false;
};

struct HeatCurrentReport {
    Regime regime = Regime::DetunedCoupled;
    double rho22 = 0.0;  // family weight; 0 outside the degenerate regime
    ChannelCurrents left;
    ChannelCurrents right;
    InverseFlags left_inverse;
    InverseFlags right_inverse;
    std::optional<double> delta;  // Q_L^I - Q_L^C when both topologies were evaluated

    const ChannelCurrents& reservoir(ReservoirLabel label) const noexcept {
        return label == ReservoirLabel::Left ? left : right;
    }
};

// True when channel and total have strictly opposite signs outside the dead zone.
bool is_inverse(double channel, double total) noexcept;

// Sets the inverse flags from the stored currents.
void update_inverse_flags(HeatCurrentReport& report) noexcept;

// <lambda| m |state> without any stationarity check.
double heat_flow(const Matrix4& m, const PopulationVector& state, const Vector4& lambdas);

// Q_alpha for a steady state of m.total(); warns if ||M state|| > kStationarityWarn.
// lambdas are the level energies of the basis m is written in.
double heat_current(const RateMatrix& m, ReservoirLabel label, const PopulationVector& state,
                    const Vector4& lambdas);

// Generic route: rate matrix, steady state and <lambda|M_alpha|rho> with the
// direct/cross split. rho22 selects the family member in the degenerate regime.
HeatCurrentReport heat_currents(const Scenario& scenario, double rho22 = 0.0);

// Regime-specific closed forms for the same quantities.
HeatCurrentReport heat_current_closed(const Scenario& scenario, double rho22 = 0.0);

struct CurrentPair {
    double left = 0.0;
    double right = 0.0;

    double get(ReservoirLabel label) const noexcept {
        return label == ReservoirLabel::Left ? left : right;
    }
};

// Maximal current of the degenerate family (rho22 = 0), from W^1..W^4.
CurrentPair max_heat_current_degenerate(const Scenario& scenario);

// Same quantity for uncoupled resonant qubits from the J+/- form. Requires g = 0
// and equal rates at both channels.
CurrentPair max_heat_current_uncoupled(const Scenario& scenario);

// Per-qubit current sum for uncoupled qubits.
CurrentPair uncoupled_heat_current(const Scenario& scenario);

// Direct and cross currents of a common-bath scenario on a given state.
struct ChannelDecomposition {
    ChannelCurrents left;
    ChannelCurrents right;
};

ChannelDecomposition channel_decomposition(const Scenario& scenario,
                                           const PopulationVector& state);

// Cross current Q_L^c for equal rates gamma^{mn}_alpha(w_i) = gamma_i in the
// closed form written with the Bose occupation difference u = n_R - n_L.
double cross_current_equal_rate(const Scenario& scenario);

// Q_L^I - Q_L^C for two scenarios that differ only in topology.
double delta_current(const Scenario& common, const Scenario& independent, double rho22 = 0.0);

// -Q_L/T_L - Q_R/T_R, with a zero-temperature reservoir contributing +inf, 0 or -inf.
double entropy_production(const Scenario& scenario, const HeatCurrentReport& report);

// Conservation and second-law violations of a report (empty when consistent).
std::vector<std::string> report_violations(const Scenario& scenario,
                                           const HeatCurrentReport& report, double tol = 1e-12);

enum class Axis { TL, G, Omega2, GammaMinus, GammaPlus, Rho22 };

const char* to_string(Axis axis) noexcept;
std::optional<Axis> parse_axis(const std::string& name);

struct AxisSpec {
    Axis axis = Axis::TL;
    double start = 0.0;
    double stop = 0.0;
    int points = 1;

    // Evenly spaced values, endpoints included.
    std::vector<double> values() const;
};

// Applies one axis value to a scenario template. Gamma axes set every
// gamma^{mn} of both reservoirs at that channel.
void apply_axis(Scenario& scenario, double& rho22, Axis axis, double value);

struct SweepOptions {
    int threads = 1;
    bool with_delta = false;  // also evaluate the other topology and fill report.delta
    double rho22 = 0.0;       // family weight when no rho22 axis is given
};

struct SweepRow {
    std::vector<double> coords;
    Scenario scenario;
    PopulationVector populations = PopulationVector::Zero();
    HeatCurrentReport report;
};

// Row-major over the axes (last axis fastest). Output order does not depend on
// the thread count. Throws InvariantViolation if any row breaks conservation or
// the second law.
std::vector<SweepRow> sweep(const Scenario& base, const std::vector<AxisSpec>& axes,
                            const SweepOptions& options = {});

// Linear-interpolated zeros of f sampled on xs.
std::vector<double> zero_crossings(const std::vector<double>& xs, const std::vector<double>& f);

// Zero level set of f on a grid (f[i * ys.size() + j] at (xs[i], ys[j])), as
// interpolated points on grid edges in deterministic order.
std::vector<std::pair<double, double>> zero_contour(const std::vector<double>& xs,
                                                    const std::vector<double>& ys,
                                                    const std::vector<double>& f);

}  // namespace qheat
