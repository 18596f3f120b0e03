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

#include "qheat/transport.hpp"

#include "qheat/error.hpp"

#include <fmt/format.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace qheat {

namespace {

int sign_of(double x) noexcept {
    if (std::abs(x) < kInverseDeadZone) return 0;
    return x > 0.0 ? 1 : -1;
}

constexpr std::array<ReservoirLabel, 2> kLabels{ReservoirLabel::Left, ReservoirLabel::Right};

ChannelCurrents& slot(HeatCurrentReport& r, ReservoirLabel label) {
    return label == ReservoirLabel::Left ? r.left : r.right;
}

[[noreturn]] void mismatch(const char* op, const Scenario& scenario) {
    fail(ErrorCode::RegimeMismatch,
         fmt::format("{}: not applicable to {} regime with {} reservoirs", op,
                     to_string(scenario.regime()), to_string(scenario.topology)));
}

}  // namespace

bool is_inverse(double channel, double total) noexcept {
    const int a = sign_of(channel), b = sign_of(total);
    return a != 0 && b != 0 && a != b;
}

void update_inverse_flags(HeatCurrentReport& r) noexcept {
    r.left_inverse = {is_inverse(r.left.direct, r.left.total), is_inverse(r.left.cross, r.left.total)};
    r.right_inverse = {is_inverse(r.right.direct, r.right.total),
                       is_inverse(r.right.cross, r.right.total)};
}

double heat_flow(const Matrix4& m, const PopulationVector& state, const Vector4& lambdas) {
    return lambdas.dot(m * state);
}

double heat_current(const RateMatrix& m, ReservoirLabel label, const PopulationVector& state,
                    const Vector4& lambdas) {
    const double residual = (m.total() * state).norm();
    if (residual > kStationarityWarn)
        warn(fmt::format("heat current evaluated on a non-stationary state (||M rho|| = {:.3e})",
                         residual));
    return heat_flow(m.reservoir(label).total(), state, lambdas);
}

HeatCurrentReport heat_currents(const Scenario& scenario, double rho22) {
    const RateMatrix rm = rate_matrix(scenario);
    const SteadyStateResult ss = steady_state(rm, rho22);
    const PopulationVector state = ss.populations();
    const Vector4 lambdas = spectral_structure(scenario).lambdas;

    HeatCurrentReport r;
    r.regime = rm.regime;
    r.rho22 = ss.is_unique() ? 0.0 : rho22;
    for (ReservoirLabel label : kLabels) {
        ChannelCurrents& c = slot(r, label);
        c.total = heat_current(rm, label, state, lambdas);
        c.direct = heat_flow(rm.reservoir(label).direct, state, lambdas);
        c.cross = heat_flow(rm.reservoir(label).cross, state, lambdas);
    }
    update_inverse_flags(r);
    return r;
}

namespace {

// Total current for a common-bath population state through the M^{pq}_alpha
// coefficients of one reservoir.
double common_current(const Matrix4& ma, const PopulationVector& rho, double wm, double wp) {
    auto M = [&](int p, int q) { return -ma(q - 1, p - 1); };
    const double r1 = rho[0], r2 = rho[1], r3 = rho[2], r4 = rho[3];
    return wm * ((M(2, 1) * r2 + M(4, 3) * r4) - (M(1, 2) * r1 + M(3, 4) * r3)) +
           wp * ((M(3, 1) * r3 + M(4, 2) * r4) - (M(1, 3) * r1 + M(2, 4) * r2));
}

double direct_current(const TransitionRates& t, const PopulationVector& rho, double wm,
                      double wp) {
    const auto& M = t.M;
    const double r1 = rho[0], r2 = rho[1], r3 = rho[2], r4 = rho[3];
    return wm * (M[2] * (r2 + r4) - M[0] * (r1 + r3)) + wp * (M[3] * (r3 + r4) - M[1] * (r1 + r2));
}

double cross_current(const TransitionRates& t, const PopulationVector& rho, double wm,
                     double wp) {
    const auto& X = t.Xi;
    const double r1 = rho[0], r2 = rho[1], r3 = rho[2], r4 = rho[3];
    return wm * (X[2] * (r2 - r4) - X[0] * (r1 - r3)) + wp * (X[1] * (r1 - r2) - X[3] * (r3 - r4));
}

Channel qubit_channel(const SpectralStructure& s, int qubit) {
    return std::abs(s.amplitude(qubit, Channel::Minus)) >= std::abs(s.amplitude(qubit, Channel::Plus))
               ? Channel::Minus
               : Channel::Plus;
}

bool channels_equal(const ReservoirSpec& r) {
    const RateEntry& a = r.rate(Channel::Minus);
    const RateEntry& b = r.rate(Channel::Plus);
    return a.g11 == b.g11 && a.g22 == b.g22 && a.g12 == b.g12;
}

// Degenerate direct/cross split written with W^1..W^4.
std::pair<double, double> degenerate_split(const std::array<double, 4>& w,
                                           const std::array<double, 4>& wa, double wm, double wp,
                                           double rho22) {
    const double W1 = w[0], W2 = w[1], W3 = w[2], W4 = w[3];
    const double A1 = wa[0], A2 = wa[1], A3 = wa[2], A4 = wa[3];
    const double n = W2 * W4 + W1 * W4 + W1 * W3;
    const double f = (1.0 - rho22) / (2.0 * n);
    const double dark = 0.5 * rho22 * (wm * A4 - wp * A1);
    const double d = f * (wm * (A4 * W1 * W3 - A3 * W4 * (W1 + W2)) -
                          wp * (A1 * W2 * W4 - A2 * W1 * (W4 + W3))) +
                     dark;
    const double c = f * (wm * (A4 * W1 * W3 - A3 * W4 * (W1 - W2)) -
                          wp * (A1 * W2 * W4 - A2 * W1 * (W4 - W3))) -
                     dark;
    return {d, c};
}

}  // namespace

CurrentPair max_heat_current_degenerate(const Scenario& scenario) {
    if (scenario.regime() != Regime::ResonantDegenerate)
        mismatch("max_heat_current_degenerate", scenario);
    const DegenerateRates d = degenerate_rates(scenario);
    const EigenSystem eig = diagonalize(scenario.params);
    const auto& w = d.total;
    const double n = w[1] * w[3] + w[0] * w[3] + w[0] * w[2];
    auto q = [&](const std::array<double, 4>& a) {
        return eig.omega_minus * w[0] / n * (a[3] * w[2] - a[2] * w[3]) +
               eig.omega_plus * w[3] / n * (a[1] * w[0] - a[0] * w[1]);
    };
    return {q(d.left), q(d.right)};
}

CurrentPair max_heat_current_uncoupled(const Scenario& scenario) {
    if (scenario.regime() != Regime::ResonantDegenerate || scenario.params.is_coupled())
        mismatch("max_heat_current_uncoupled", scenario);
    if (!channels_equal(scenario.left) || !channels_equal(scenario.right))
        fail(ErrorCode::InvalidArgument,
             "uncoupled maximal current needs equal rates at both channels");
    const double w = scenario.params.omega1;
    auto jj = [&](const ReservoirSpec& r, Sign sign) {
        return -2.0 * spectral_density(r, 1, 2, Channel::Minus, w, sign);
    };
    const double jp_l = jj(scenario.left, Sign::Plus), jm_l = jj(scenario.left, Sign::Minus);
    const double jp_r = jj(scenario.right, Sign::Plus), jm_r = jj(scenario.right, Sign::Minus);
    const double jp = jp_l + jp_r, jm = jm_l + jm_r;
    const double n = jm * jm + jm * jp + jp * jp;
    auto q = [&](double jpa, double jma) { return 2.0 * w / n * (jp + jm) * (jma * jp - jpa * jm); };
    return {q(jp_l, jm_l), q(jp_r, jm_r)};
}

CurrentPair uncoupled_heat_current(const Scenario& scenario) {
    const Regime regime = scenario.regime();
    if (regime != Regime::UncoupledDetuned && regime != Regime::UncoupledIndependent)
        mismatch("uncoupled_heat_current", scenario);
    const SpectralStructure s = spectral_structure(scenario);
    CurrentPair out;
    for (int m = 1; m <= 2; ++m) {
        const Channel c = qubit_channel(s, m);
        const double w = s.frequency(c);
        auto jj = [&](const ReservoirSpec& r, Sign sign) {
            return -2.0 * spectral_density(r, m, m, c, w, sign);
        };
        const double jp_l = jj(scenario.left, Sign::Plus), jm_l = jj(scenario.left, Sign::Minus);
        const double jp_r = jj(scenario.right, Sign::Plus), jm_r = jj(scenario.right, Sign::Minus);
        const double jp = jp_l + jp_r, jm = jm_l + jm_r;
        out.left += w * (jm_l * jp - jp_l * jm) / (jp + jm);
        out.right += w * (jm_r * jp - jp_r * jm) / (jp + jm);
    }
    return out;
}

HeatCurrentReport heat_current_closed(const Scenario& scenario, double rho22) {
    scenario.validate();
    const Regime regime = scenario.regime();
    HeatCurrentReport r;
    r.regime = regime;

    if (regime == Regime::ResonantDegenerate) {
        if (!(rho22 >= 0.0 && rho22 <= 1.0))
            fail(ErrorCode::InvalidArgument, fmt::format("rho22 must lie in [0, 1], got {}", rho22));
        r.rho22 = rho22;
        const bool uncoupled = !scenario.params.is_coupled() && channels_equal(scenario.left) &&
                               channels_equal(scenario.right);
        const CurrentPair qmax = uncoupled ? max_heat_current_uncoupled(scenario)
                                           : max_heat_current_degenerate(scenario);
        const DegenerateRates d = degenerate_rates(scenario);
        const EigenSystem eig = diagonalize(scenario.params);
        for (ReservoirLabel label : kLabels) {
            ChannelCurrents& c = slot(r, label);
            c.total = (1.0 - rho22) * qmax.get(label);
            const auto [dir, cr] = degenerate_split(d.total, d.reservoir(label), eig.omega_minus,
                                                    eig.omega_plus, rho22);
            c.direct = dir;
            c.cross = cr;
        }
        update_inverse_flags(r);
        return r;
    }

    if (regime == Regime::UncoupledDetuned || regime == Regime::UncoupledIndependent) {
        const CurrentPair q = uncoupled_heat_current(scenario);
        r.left = {q.left, q.left, 0.0};
        r.right = {q.right, q.right, 0.0};
        update_inverse_flags(r);
        return r;
    }

    const SpectralStructure s = spectral_structure(scenario);
    const double wm = s.omega_minus, wp = s.omega_plus;

    if (scenario.topology == Topology::Independent) {
        std::array<TransitionRates, 2> t{};
        std::array<double, 4> sum{};
        for (ReservoirLabel label : kLabels) {
            t[static_cast<int>(label)] =
                transition_rates(s, scenario.reservoir(label), Topology::Independent);
            for (int k = 0; k < 4; ++k) sum[k] += t[static_cast<int>(label)].M[k];
        }
        const PopulationVector rho = product_steady_state(sum[0], sum[1], sum[2], sum[3]);
        for (ReservoirLabel label : kLabels) {
            const double q = direct_current(t[static_cast<int>(label)], rho, wm, wp);
            slot(r, label) = {q, q, 0.0};
        }
        update_inverse_flags(r);
        return r;
    }

    const RateMatrix rm = rate_matrix(scenario);
    const PopulationVector rho = normalize_populations(levi_civita_populations(rm.total()));
    for (ReservoirLabel label : kLabels) {
        const TransitionRates t = transition_rates(s, scenario.reservoir(label), Topology::Common);
        ChannelCurrents& c = slot(r, label);
        c.total = common_current(rm.reservoir(label).total(), rho, wm, wp);
        c.direct = direct_current(t, rho, wm, wp);
        c.cross = cross_current(t, rho, wm, wp);
    }
    update_inverse_flags(r);
    return r;
}

ChannelDecomposition channel_decomposition(const Scenario& scenario,
                                           const PopulationVector& state) {
    if (scenario.topology != Topology::Common) mismatch("channel_decomposition", scenario);
    const RateMatrix rm = rate_matrix(scenario);
    const EigenSystem eig = diagonalize(scenario.params);
    ChannelDecomposition out;
    for (ReservoirLabel label : kLabels) {
        const ReservoirRates& m = rm.reservoir(label);
        ChannelCurrents c{heat_flow(m.total(), state, eig.lambdas),
                          heat_flow(m.direct, state, eig.lambdas),
                          heat_flow(m.cross, state, eig.lambdas)};
        (label == ReservoirLabel::Left ? out.left : out.right) = c;
    }
    return out;
}

double cross_current_equal_rate(const Scenario& scenario) {
    scenario.validate();
    if (scenario.topology != Topology::Common || scenario.params.is_resonant())
        mismatch("cross_current_equal_rate", scenario);
    std::array<double, 2> gamma{};
    for (Channel c : kChannels) {
        const double g = scenario.left.rate(c).g11;
        for (const ReservoirSpec* res : {&scenario.left, &scenario.right}) {
            const RateEntry& e = res->rate(c);
            if (e.g11 != g || e.g22 != g || e.g12 != g)
                fail(ErrorCode::InvalidArgument,
                     "equal-rate cross current needs gamma^{mn}_alpha(w_i) = gamma_i");
        }
        gamma[index(c)] = g;
    }
    const EigenSystem eig = diagonalize(scenario.params);
    const double wm = eig.omega_minus, wp = eig.omega_plus;
    const double nl_m = bose_occupation(wm, scenario.left.temperature);
    const double nr_m = bose_occupation(wm, scenario.right.temperature);
    const double nl_p = bose_occupation(wp, scenario.left.temperature);
    const double nr_p = bose_occupation(wp, scenario.right.temperature);
    const double n_m = nl_m + nr_m, n_p = nl_p + nr_p;
    const double norm = (n_m + 2.0) * (n_p + 2.0) + n_m * (n_p + 2.0) + (n_m + 2.0) * n_p + n_m * n_p;
    const double u_m = nr_m - nl_m, u_p = nr_p - nl_p;
    const double cs_s = eig.sin_s * eig.cos_s, cs_d = eig.sin_d * eig.cos_d;
    const double a = gamma[0] * wm * u_m, b = gamma[1] * wp * u_p;
    return 8.0 / norm * (cs_s * (a + b) + cs_d * (a - b));
}

double delta_current(const Scenario& common, const Scenario& independent, double rho22) {
    if (common.topology != Topology::Common || independent.topology != Topology::Independent)
        fail(ErrorCode::InvalidArgument, "delta_current expects a common and an independent scenario");
    auto same_res = [](const ReservoirSpec& a, const ReservoirSpec& b) {
        if (a.temperature != b.temperature) return false;
        for (int c = 0; c < 2; ++c)
            if (a.rates[c].g11 != b.rates[c].g11 || a.rates[c].g22 != b.rates[c].g22 ||
                a.rates[c].g12 != b.rates[c].g12)
                return false;
        return true;
    };
    const auto& p = common.params;
    const auto& q = independent.params;
    if (p.omega1 != q.omega1 || p.omega2 != q.omega2 || p.g != q.g ||
        !same_res(common.left, independent.left) || !same_res(common.right, independent.right))
        fail(ErrorCode::InvalidArgument, "delta_current scenarios differ beyond topology");
    return heat_currents(independent).left.total - heat_currents(common, rho22).left.total;
}

double entropy_production(const Scenario& scenario, const HeatCurrentReport& report) {
    double s = 0.0;
    for (ReservoirLabel label : kLabels) {
        const double q = report.reservoir(label).total;
        const double t = scenario.reservoir(label).temperature;
        if (t > 0.0) {
            s -= q / t;
        } else if (sign_of(q) > 0) {
            return -std::numeric_limits<double>::infinity();
        } else if (sign_of(q) < 0) {
            s = std::numeric_limits<double>::infinity();
        }
    }
    return s;
}

std::vector<std::string> report_violations(const Scenario& scenario,
                                           const HeatCurrentReport& report, double tol) {
    std::vector<std::string> out;
    const double sum = report.left.total + report.right.total;
    if (!(std::abs(sum) <= tol))
        out.push_back(fmt::format("conservation: Q_L + Q_R = {:.3e}", sum));
    const double sigma = entropy_production(scenario, report);
    if (!(sigma >= -tol)) out.push_back(fmt::format("second law: entropy production {:.3e}", sigma));
    for (ReservoirLabel label : kLabels) {
        const ChannelCurrents& c = report.reservoir(label);
        const double gap = c.total - c.direct - c.cross;
        if (!(std::abs(gap) <= tol))
            out.push_back(fmt::format("additivity ({}): total - direct - cross = {:.3e}",
                                      to_string(label), gap));
    }
    return out;
}

const char* to_string(Axis axis) noexcept {
    switch (axis) {
        case Axis::TL: return "T_L";
        case Axis::G: return "g";
        case Axis::Omega2: return "omega2";
        case Axis::GammaMinus: return "gamma_minus";
        case Axis::GammaPlus: return "gamma_plus";
        case Axis::Rho22: return "rho22";
    }
    return "unknown";
}

std::optional<Axis> parse_axis(const std::string& name) {
    for (Axis a : {Axis::TL, Axis::G, Axis::Omega2, Axis::GammaMinus, Axis::GammaPlus, Axis::Rho22})
        if (name == to_string(a)) return a;
    return std::nullopt;
}

std::vector<double> AxisSpec::values() const {
    if (points < 1) fail(ErrorCode::InvalidArgument, "axis needs at least one point");
    std::vector<double> v(static_cast<std::size_t>(points));
    if (points == 1) {
        v[0] = start;
        return v;
    }
    const double step = (stop - start) / (points - 1);
    for (int i = 0; i < points; ++i) v[i] = start + step * i;
    v.back() = stop;
    return v;
}

void apply_axis(Scenario& scenario, double& rho22, Axis axis, double value) {
    switch (axis) {
        case Axis::TL: scenario.left.temperature = value; break;
        case Axis::G: scenario.params.g = value; break;
        case Axis::Omega2: scenario.params.omega2 = value; break;
        case Axis::GammaMinus:
        case Axis::GammaPlus: {
            const Channel c = axis == Axis::GammaMinus ? Channel::Minus : Channel::Plus;
            scenario.left.rates[index(c)] = {value, value, value};
            scenario.right.rates[index(c)] = {value, value, value};
            break;
        }
        case Axis::Rho22: rho22 = value; break;
    }
}

namespace {

void check_axis(const AxisSpec& a) {
    for (double v : a.values()) {
        bool ok = std::isfinite(v);
        switch (a.axis) {
            case Axis::TL: ok = ok && v >= 0.0; break;
            case Axis::G: ok = ok && v >= 0.0; break;
            case Axis::Omega2: ok = ok && v > 0.0; break;
            case Axis::GammaMinus:
            case Axis::GammaPlus: ok = ok && v >= 0.0; break;
            case Axis::Rho22: ok = ok && v >= 0.0 && v <= 1.0; break;
        }
        if (!ok)
            fail(ErrorCode::InvalidArgument,
                 fmt::format("axis {}: value {} outside the valid range", to_string(a.axis), v));
    }
}

SweepRow evaluate_row(const Scenario& base, const std::vector<AxisSpec>& axes,
                      const std::vector<std::vector<double>>& grids, std::size_t flat,
                      const SweepOptions& options) {
    SweepRow row;
    row.scenario = base;
    double rho22 = options.rho22;
    row.coords.resize(axes.size());
    std::size_t rem = flat;
    for (std::size_t k = axes.size(); k-- > 0;) {
        const std::size_t n = grids[k].size();
        const double v = grids[k][rem % n];
        rem /= n;
        row.coords[k] = v;
        apply_axis(row.scenario, rho22, axes[k].axis, v);
    }
    const RateMatrix rm = rate_matrix(row.scenario);
    row.populations = steady_state(rm, rho22).populations();
    row.report = heat_currents(row.scenario, rho22);
    if (options.with_delta) {
        Scenario other = row.scenario;
        other.topology = other.topology == Topology::Common ? Topology::Independent
                                                            : Topology::Common;
        const double q_other = heat_currents(other, rho22).left.total;
        const double q_self = row.report.left.total;
        row.report.delta =
            row.scenario.topology == Topology::Independent ? q_self - q_other : q_other - q_self;
    }
    const auto bad = report_violations(row.scenario, row.report);
    if (!bad.empty())
        fail(ErrorCode::InvariantViolation,
             fmt::format("sweep point {}: {}", flat, fmt::join(bad, "; ")));
    return row;
}

}  // namespace

std::vector<SweepRow> sweep(const Scenario& base, const std::vector<AxisSpec>& axes,
                            const SweepOptions& options) {
    if (axes.empty() || axes.size() > 2)
        fail(ErrorCode::InvalidArgument, "sweep takes one or two axes");
    base.validate();
    std::vector<std::vector<double>> grids;
    std::size_t total = 1;
    for (const AxisSpec& a : axes) {
        check_axis(a);
        grids.push_back(a.values());
        total *= grids.back().size();
    }

    std::vector<SweepRow> rows(total);
    std::vector<std::exception_ptr> errors(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            try {
                rows[i] = evaluate_row(base, axes, grids, i, options);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(options.threads, static_cast<int>(total)));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::vector<double> zero_crossings(const std::vector<double>& xs, const std::vector<double>& f) {
    if (xs.size() != f.size()) fail(ErrorCode::InvalidArgument, "zero_crossings: size mismatch");
    std::vector<double> out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (f[i] == 0.0) {
            out.push_back(xs[i]);
            continue;
        }
        if (i + 1 < xs.size() && f[i + 1] != 0.0 && (f[i] < 0.0) != (f[i + 1] < 0.0))
            out.push_back(xs[i] - f[i] * (xs[i + 1] - xs[i]) / (f[i + 1] - f[i]));
    }
    return out;
}

std::vector<std::pair<double, double>> zero_contour(const std::vector<double>& xs,
                                                    const std::vector<double>& ys,
                                                    const std::vector<double>& f) {
    const std::size_t nx = xs.size(), ny = ys.size();
    if (f.size() != nx * ny) fail(ErrorCode::InvalidArgument, "zero_contour: size mismatch");
    auto at = [&](std::size_t i, std::size_t j) { return f[i * ny + j]; };
    auto crosses = [](double a, double b) { return a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0); };
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double v = at(i, j);
            if (v == 0.0) {
                out.emplace_back(xs[i], ys[j]);
                continue;
            }
            if (i + 1 < nx && crosses(v, at(i + 1, j))) {
                const double t = v / (v - at(i + 1, j));
                out.emplace_back(xs[i] + t * (xs[i + 1] - xs[i]), ys[j]);
            }
            if (j + 1 < ny && crosses(v, at(i, j + 1))) {
                const double t = v / (v - at(i, j + 1));
                out.emplace_back(xs[i], ys[j] + t * (ys[j + 1] - ys[j]));
            }
        }
    }
    return out;
}

}  // namespace qheat
