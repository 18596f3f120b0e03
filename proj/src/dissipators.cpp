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

#include "qheat/dissipators.hpp"

#include "qheat/error.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <fmt/format.h>

#include <cmath>

namespace qheat {

const char* to_string(ReservoirLabel label) noexcept {
    return label == ReservoirLabel::Left ? "L" : "R";
}

const char* to_string(Topology t) noexcept {
    return t == Topology::Common ? "common" : "independent";
}

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::DetunedCoupled: return "detuned-coupled";
        case Regime::ResonantCoupled: return "resonant-coupled";
        case Regime::ResonantDegenerate: return "resonant-degenerate";
        case Regime::UncoupledDetuned: return "uncoupled-detuned";
        case Regime::UncoupledResonant: return "uncoupled-resonant";
        case Regime::UncoupledIndependent: return "uncoupled-independent";
    }
    return "unknown";
}

double RateEntry::get(int m, int n) const {
    if (m == 1 && n == 1) return g11;
    if (m == 2 && n == 2) return g22;
    if ((m == 1 && n == 2) || (m == 2 && n == 1)) return g12;
    fail(ErrorCode::InvalidArgument, fmt::format("rate index ({}, {}) out of range", m, n));
}

ReservoirSpec ReservoirSpec::flat(ReservoirLabel label, double temperature, double gamma) {
    return channels(label, temperature, gamma, gamma);
}

ReservoirSpec ReservoirSpec::channels(ReservoirLabel label, double temperature, double gamma_minus,
                                      double gamma_plus) {
    ReservoirSpec r;
    r.label = label;
    r.temperature = temperature;
    r.rates[index(Channel::Minus)] = {gamma_minus, gamma_minus, gamma_minus};
    r.rates[index(Channel::Plus)] = {gamma_plus, gamma_plus, gamma_plus};
    return r;
}

ReservoirSpec ReservoirSpec::per_qubit(ReservoirLabel label, double temperature,
                                       const std::array<double, 2>& g11,
                                       const std::array<double, 2>& g22) {
    ReservoirSpec r;
    r.label = label;
    r.temperature = temperature;
    for (int c = 0; c < 2; ++c) r.rates[c] = {g11[c], g22[c], std::sqrt(g11[c] * g22[c])};
    return r;
}

namespace {

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

bool ReservoirSpec::is_factorized() const noexcept {
    for (const auto& e : rates)
        if (!close_rel(e.g12, std::sqrt(e.g11 * e.g22), kRateEqualityRelTol)) return false;
    return true;
}

void ReservoirSpec::validate() const {
    const char* name = to_string(label);
    if (!std::isfinite(temperature) || temperature < 0.0)
        fail(ErrorCode::InvalidArgument,
             fmt::format("reservoir {}: temperature must be >= 0, got {}", name, temperature));
    for (Channel c : kChannels) {
        const RateEntry& e = rate(c);
        const char* ch = c == Channel::Minus ? "minus" : "plus";
        for (double v : {e.g11, e.g22, e.g12})
            if (!std::isfinite(v) || v < 0.0)
                fail(ErrorCode::InvalidArgument,
                     fmt::format("reservoir {}: rates at w_{} must be finite and >= 0", name, ch));
        const double bound = std::sqrt(e.g11 * e.g22);
        if (e.g12 > bound * (1.0 + kRateEqualityRelTol) + 1e-300)
            fail(ErrorCode::InvalidArgument,
                 fmt::format("reservoir {}: gamma12 = {} exceeds sqrt(gamma11 gamma22) = {} at w_{}",
                             name, e.g12, bound, ch));
    }
}

bool Scenario::has_degenerate_rates() const noexcept {
    for (const ReservoirSpec* r : {&left, &right})
        for (const auto& e : r->rates)
            if (!close_rel(e.g11, e.g22, kRateEqualityRelTol) ||
                !close_rel(e.g11, e.g12, kRateEqualityRelTol))
                return false;
    return true;
}

Regime Scenario::regime() const {
    const bool coupled = params.is_coupled();
    const bool resonant = params.is_resonant();
    if (topology == Topology::Independent) {
        if (!coupled) return Regime::UncoupledIndependent;
        return resonant ? Regime::ResonantCoupled : Regime::DetunedCoupled;
    }
    if (resonant) {
        if (has_degenerate_rates()) return Regime::ResonantDegenerate;
        return coupled ? Regime::ResonantCoupled : Regime::UncoupledResonant;
    }
    return coupled ? Regime::DetunedCoupled : Regime::UncoupledDetuned;
}

void Scenario::validate() const {
    params.validate();
    if (left.label != ReservoirLabel::Left || right.label != ReservoirLabel::Right)
        fail(ErrorCode::InvalidArgument, "scenario reservoirs must be labelled L and R");
    left.validate();
    right.validate();
}

double bose_occupation(double omega, double temperature) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        fail(ErrorCode::InvalidArgument, fmt::format("frequency must be positive, got {}", omega));
    if (!std::isfinite(temperature) || temperature < 0.0)
        fail(ErrorCode::InvalidArgument,
             fmt::format("temperature must be >= 0, got {}", temperature));
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

double spectral_density(const ReservoirSpec& res, int m, int n, Channel channel, double omega,
                        Sign sign) {
    const double gamma = res.rate(channel).get(m, n);
    const double nbar = bose_occupation(omega, res.temperature);
    return sign == Sign::Plus ? gamma * nbar : gamma * (nbar + 1.0);
}

namespace {

// Product basis {dd, lo up, hi up, uu} where lo is the lower-frequency qubit.
SpectralStructure product_structure(const SystemParams& p, const EigenSystem& eig) {
    SpectralStructure s;
    s.eig = eig;
    s.product_basis = true;
    const int lo = (p.is_resonant() || p.omega1 < p.omega2) ? 1 : 2;
    // Bare indices: uu=0, ud=1, du=2, dd=3.
    const int lo_up = lo == 1 ? 1 : 2;
    const int hi_up = 3 - lo_up;
    const std::array<int, 4> bare{3, lo_up, hi_up, 0};
    s.basis.setZero();
    for (int l = 0; l < 4; ++l) s.basis(bare[l], l) = 1.0;

    const double w_lo = lo == 1 ? p.omega1 : p.omega2;
    const double w_hi = lo == 1 ? p.omega2 : p.omega1;
    s.omega_minus = w_lo;
    s.omega_plus = w_hi;
    s.lambdas << -p.omega_s(), 0.5 * (w_lo - w_hi), 0.5 * (w_hi - w_lo), p.omega_s();

    for (int q = 1; q <= 2; ++q) {
        const Matrix4 v = s.basis.transpose() * sigma_minus(q) * s.basis;
        const Channel own = q == lo ? Channel::Minus : Channel::Plus;
        for (Channel c : kChannels) {
            const int k = 2 * (q - 1) + index(c);
            const bool active = c == own;
            s.ops[k] = {q, c, s.frequency(c), active ? v : Matrix4::Zero()};
            s.amp[k] = active ? 1.0 : 0.0;
        }
    }
    return s;
}

}  // namespace

SpectralStructure spectral_structure(const Scenario& scenario) {
    scenario.validate();
    const EigenSystem eig = diagonalize(scenario.params);
    if (scenario.regime() == Regime::UncoupledIndependent)
        return product_structure(scenario.params, eig);

    SpectralStructure s;
    s.eig = eig;
    s.basis = eig.basis;
    s.lambdas = eig.lambdas;
    s.omega_minus = eig.omega_minus;
    s.omega_plus = eig.omega_plus;
    s.ops = eigenoperators(scenario.params, eig);
    s.amp = {eig.sin_plus, eig.cos_plus, eig.cos_minus, eig.sin_minus};
    return s;
}

TransitionRates transition_rates(const SpectralStructure& s, const ReservoirSpec& res,
                                 Topology topology) {
    TransitionRates t;
    for (Channel c : kChannels) {
        const double w = s.frequency(c);
        const double a1 = s.amplitude(1, c);
        const double a2 = s.amplitude(2, c);
        const int up = index(c);       // M1 (w_-) or M2 (w_+)
        const int down = index(c) + 2;  // M3 (w_-) or M4 (w_+)
        for (Sign sign : {Sign::Plus, Sign::Minus}) {
            const double j11 = spectral_density(res, 1, 1, c, w, sign);
            const double j22 = spectral_density(res, 2, 2, c, w, sign);
            const int k = sign == Sign::Plus ? up : down;
            t.M[k] = -2.0 * (a1 * a1 * j11 + a2 * a2 * j22);
            if (topology == Topology::Common) {
                const double j12 = spectral_density(res, 1, 2, c, w, sign);
                t.Xi[k] = 4.0 * a1 * a2 * j12;
            }
        }
    }
    return t;
}

Matrix4 arrow_matrix(double m12, double m13, double m21, double m24, double m31, double m34,
                     double m42, double m43) {
    Matrix4 m;
    m << m12 + m13, -m21, -m31, 0.0,
         -m12, m21 + m24, 0.0, -m42,
         -m13, 0.0, m31 + m34, -m43,
         0.0, -m24, -m34, m42 + m43;
    return m;
}

Matrix4 independent_matrix(double m1, double m2, double m3, double m4) {
    Eigen::Matrix2d a, b;
    a << m1, -m3, -m1, m3;
    b << m2, -m4, -m2, m4;
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    return Eigen::kroneckerProduct(id, a).eval() + Eigen::kroneckerProduct(b, id).eval();
}

namespace {

ReservoirRates split_rates(const TransitionRates& t) {
    const auto& M = t.M;
    const auto& X = t.Xi;
    ReservoirRates r;
    r.direct = independent_matrix(M[0], M[1], M[2], M[3]);
    r.cross = arrow_matrix(X[0], -X[1], X[2], X[1], -X[3], -X[0], X[3], -X[2]);
    return r;
}

RateMatrix assemble(const Scenario& scenario, Topology topology) {
    const SpectralStructure s = spectral_structure(scenario);
    RateMatrix rm;
    rm.regime = scenario.regime();
    rm.topology = scenario.topology;
    rm.left = split_rates(transition_rates(s, scenario.left, topology));
    rm.right = split_rates(transition_rates(s, scenario.right, topology));
    return rm;
}

[[noreturn]] void mismatch(const char* op, const Scenario& scenario) {
    fail(ErrorCode::RegimeMismatch,
         fmt::format("{}: not applicable to {} regime with {} reservoirs", op,
                     to_string(scenario.regime()), to_string(scenario.topology)));
}

// Uncoupled resonant qubits on common baths, per reservoir:
// M^{1/2} = -[J11(w) + J22(w) -/+ 2 J12(w)], M^{3/4} the same at -w, which for
// rank-1 rates is -[sqrt(J11) -/+ sqrt(J22)]^2.
ReservoirRates uncoupled_resonant_rates(const SpectralStructure& s, const ReservoirSpec& res) {
    auto sf = [&](Channel c, int p) {
        const Sign sign = p <= 2 ? Sign::Plus : Sign::Minus;
        const double w = s.frequency(c);
        const double j11 = spectral_density(res, 1, 1, c, w, sign);
        const double j22 = spectral_density(res, 2, 2, c, w, sign);
        const double j12 = spectral_density(res, 1, 2, c, w, sign);
        const double mix = (p == 1 || p == 3) ? -2.0 * j12 : 2.0 * j12;
        return -(j11 + j22 + mix);
    };
    const Channel lo = Channel::Minus, hi = Channel::Plus;
    ReservoirRates r;
    const Matrix4 total = arrow_matrix(sf(lo, 1), sf(hi, 2), sf(lo, 3), sf(hi, 1), sf(hi, 4),
                                       sf(lo, 2), sf(hi, 3), sf(lo, 4));
    const TransitionRates t = transition_rates(s, res, Topology::Independent);
    r.direct = independent_matrix(t.M[0], t.M[1], t.M[2], t.M[3]);
    r.cross = total - r.direct;
    return r;
}

}  // namespace

RateMatrix rate_matrix_common_detuned(const Scenario& scenario) {
    scenario.validate();
    const Regime regime = scenario.regime();
    if (scenario.topology != Topology::Common ||
        (regime != Regime::DetunedCoupled && regime != Regime::UncoupledDetuned))
        mismatch("rate_matrix_common_detuned", scenario);
    return assemble(scenario, Topology::Common);
}

RateMatrix rate_matrix_independent(const Scenario& scenario) {
    scenario.validate();
    const bool ok = scenario.topology == Topology::Independent ||
                    scenario.regime() == Regime::UncoupledDetuned;
    if (!ok) mismatch("rate_matrix_independent", scenario);
    return assemble(scenario, Topology::Independent);
}

DegenerateRates degenerate_rates(const Scenario& scenario) {
    scenario.validate();
    if (scenario.regime() != Regime::ResonantDegenerate) mismatch("degenerate_rates", scenario);
    const EigenSystem eig = diagonalize(scenario.params);
    const double sin2 = eig.sin_plus * eig.sin_plus;  // sin^2(phi), phi = theta + pi/4
    const double cos2 = eig.cos_plus * eig.cos_plus;
    DegenerateRates d;
    for (ReservoirLabel label : {ReservoirLabel::Left, ReservoirLabel::Right}) {
        const ReservoirSpec& res = scenario.reservoir(label);
        auto j = [&](Channel c, Sign sign) {
            return spectral_density(res, 1, 2, c, eig.frequency(c), sign);
        };
        std::array<double, 4> w{
            -8.0 * cos2 * j(Channel::Plus, Sign::Plus),
            -8.0 * cos2 * j(Channel::Plus, Sign::Minus),
            -8.0 * sin2 * j(Channel::Minus, Sign::Plus),
            -8.0 * sin2 * j(Channel::Minus, Sign::Minus),
        };
        (label == ReservoirLabel::Left ? d.left : d.right) = w;
    }
    for (int k = 0; k < 4; ++k) d.total[k] = d.left[k] + d.right[k];
    return d;
}

std::array<double, 4> degenerate_rates_from_matrix(const Matrix4& m) {
    return {m(0, 0), -m(0, 2), -m(3, 2), m(3, 3)};
}

namespace {

Matrix4 degenerate_matrix(const std::array<double, 4>& w) {
    return arrow_matrix(0.0, w[0], 0.0, 0.0, w[1], w[2], 0.0, w[3]);
}

}  // namespace

RateMatrix rate_matrix_resonant(const Scenario& scenario) {
    scenario.validate();
    const Regime regime = scenario.regime();
    if (scenario.topology != Topology::Common || !scenario.params.is_resonant())
        mismatch("rate_matrix_resonant", scenario);

    if (regime == Regime::ResonantCoupled) return assemble(scenario, Topology::Common);

    const SpectralStructure s = spectral_structure(scenario);
    RateMatrix rm;
    rm.regime = regime;
    rm.topology = scenario.topology;
    if (regime == Regime::UncoupledResonant) {
        rm.left = uncoupled_resonant_rates(s, scenario.left);
        rm.right = uncoupled_resonant_rates(s, scenario.right);
        return rm;
    }

    const DegenerateRates d = degenerate_rates(scenario);
    for (ReservoirLabel label : {ReservoirLabel::Left, ReservoirLabel::Right}) {
        const TransitionRates t =
            transition_rates(s, scenario.reservoir(label), Topology::Independent);
        ReservoirRates r;
        r.direct = independent_matrix(t.M[0], t.M[1], t.M[2], t.M[3]);
        r.cross = degenerate_matrix(d.reservoir(label)) - r.direct;
        (label == ReservoirLabel::Left ? rm.left : rm.right) = r;
    }
    return rm;
}

RateMatrix rate_matrix(const Scenario& scenario) {
    scenario.validate();
    if (scenario.topology == Topology::Independent) return rate_matrix_independent(scenario);
    if (scenario.params.is_resonant()) return rate_matrix_resonant(scenario);
    return rate_matrix_common_detuned(scenario);
}

namespace {

using CMatrix4 = Eigen::Matrix4cd;

SuperOperator kron(const CMatrix4& a, const CMatrix4& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

// rate * [2 A rho B^dag - B^dag A rho - rho B^dag A]
void add_dissipator(SuperOperator& l, double rate, const CMatrix4& a, const CMatrix4& b) {
    if (rate == 0.0) return;
    const CMatrix4 id = CMatrix4::Identity();
    const CMatrix4 bda = b.adjoint() * a;
    l += rate * (2.0 * kron(b.conjugate(), a) - kron(id, bda) - kron(bda.transpose(), id));
}

}  // namespace

Liouvillian build_liouvillian(const Scenario& scenario) {
    const SpectralStructure s = spectral_structure(scenario);
    const bool common = scenario.topology == Topology::Common;
    Liouvillian out;
    for (ReservoirLabel label : {ReservoirLabel::Left, ReservoirLabel::Right}) {
        const ReservoirSpec& res = scenario.reservoir(label);
        SuperOperator& direct = label == ReservoirLabel::Left ? out.left_direct : out.right_direct;
        SuperOperator& cross = label == ReservoirLabel::Left ? out.left_cross : out.right_cross;
        for (Channel c : kChannels) {
            const double w = s.frequency(c);
            for (int m = 1; m <= 2; ++m) {
                for (int n = 1; n <= 2; ++n) {
                    if (m != n && !common) continue;
                    const CMatrix4 vm = s.op(m, c).matrix.cast<std::complex<double>>();
                    const CMatrix4 vn = s.op(n, c).matrix.cast<std::complex<double>>();
                    SuperOperator& target = m == n ? direct : cross;
                    add_dissipator(target, spectral_density(res, m, n, c, w, Sign::Minus), vn, vm);
                    add_dissipator(target, spectral_density(res, m, n, c, w, Sign::Plus),
                                   vn.adjoint(), vm.adjoint());
                }
            }
        }
    }
    return out;
}

Matrix4 population_block(const SuperOperator& l) {
    Matrix4 m;
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) m(p, q) = l(vec_index(p, p), vec_index(q, q)).real();
    return m;
}

}  // namespace qheat
