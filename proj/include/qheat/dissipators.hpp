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

// Reservoirs, scenario classification and the dissipative generators.
//
// Population dynamics follow d|rho>/dt = M |rho>, where M is a 4x4 rate
// matrix per reservoir. Entries are written in terms of non-positive
// transition coefficients M^{pq} (rate p -> q is -M^{pq}), so that
//
//     row 1 = [ M12+M13, -M21,     -M31,     0       ]
//     row 2 = [ -M12,    M21+M24,  0,        -M42    ]
//     row 3 = [ -M13,    0,        M31+M34,  -M43    ]
//     row 4 = [ 0,       -M24,     -M34,     M42+M43 ]
//
// Transitions 1<->2 and 3<->4 carry w_-, transitions 1<->3 and 2<->4 carry w_+.

#pragma once

#include "qheat/model.hpp"

#include <array>
#include <string>

namespace qheat {

enum class ReservoirLabel { Left = 0, Right = 1 };

const char* to_string(ReservoirLabel label) noexcept;

// gamma^{mn} at one transition frequency.
struct RateEntry {
    double g11 = 0.0;
    double g22 = 0.0;
    double g12 = 0.0;

    double get(int m, int n) const;
};

struct ReservoirSpec {
    ReservoirLabel label = ReservoirLabel::Left;
    double temperature = 0.0;
    std::array<RateEntry, 2> rates{};  // indexed by Channel

    // All gamma^{mn}(w_i) = gamma.
    static ReservoirSpec flat(ReservoirLabel label, double temperature, double gamma);
    // gamma^{mn}(w_-) = gamma_minus, gamma^{mn}(w_+) = gamma_plus.
    static ReservoirSpec channels(ReservoirLabel label, double temperature, double gamma_minus,
                                  double gamma_plus);
    // Per-qubit rates with the rank-1 default gamma^{12} = sqrt(gamma^{11} gamma^{22}).
    static ReservoirSpec per_qubit(ReservoirLabel label, double temperature,
                                   const std::array<double, 2>& g11,
                                   const std::array<double, 2>& g22);

    const RateEntry& rate(Channel c) const noexcept { return rates[index(c)]; }

    // gamma^{12} = sqrt(gamma^{11} gamma^{22}) at both frequencies (relative 1e-12).
    bool is_factorized() const noexcept;

    // T >= 0, gamma^{mm} >= 0, 0 <= gamma^{12} <= sqrt(gamma^{11} gamma^{22}).
    void validate() const;
};

enum class Topology { Common, Independent };

enum class Regime {
    DetunedCoupled,
    ResonantCoupled,
    ResonantDegenerate,
    UncoupledDetuned,
    UncoupledResonant,
    UncoupledIndependent,
};

const char* to_string(Topology t) noexcept;
const char* to_string(Regime r) noexcept;

// Relative tolerance for gamma^{11} = gamma^{22} = gamma^{12} in the degenerate test.
inline constexpr double kRateEqualityRelTol = 1e-12;

struct Scenario {
    SystemParams params;
    Topology topology = Topology::Common;
    ReservoirSpec left = ReservoirSpec::flat(ReservoirLabel::Left, 0.0, 0.0);
    ReservoirSpec right = ReservoirSpec::flat(ReservoirLabel::Right, 0.0, 0.0);

    const ReservoirSpec& reservoir(ReservoirLabel label) const noexcept {
        return label == ReservoirLabel::Left ? left : right;
    }

    // Every reservoir has gamma^{11} = gamma^{22} = gamma^{12} at each frequency.
    bool has_degenerate_rates() const noexcept;

    Regime regime() const;
    void validate() const;
};

// Mean photon number 1/(exp(w/T) - 1); zero at T = 0.
double bose_occupation(double omega, double temperature);

enum class Sign { Plus, Minus };

// J^{mn}(+w) = gamma^{mn} nbar (absorption), J^{mn}(-w) = gamma^{mn} (nbar + 1) (emission).
double spectral_density(const ReservoirSpec& res, int m, int n, Channel channel, double omega,
                        Sign sign);

// Basis, energies and jump operators a scenario's dissipators are written in.
// Coupled and common-bath scenarios use the eigenbasis of H_S. Uncoupled qubits
// on independent baths use the product basis ordered by energy, with the
// lower-frequency qubit (qubit 1 on a tie) excited in level 2.
struct SpectralStructure {
    EigenSystem eig;
    bool product_basis = false;
    Matrix4 basis = Matrix4::Identity();
    Vector4 lambdas = Vector4::Zero();
    double omega_minus = 0.0;
    double omega_plus = 0.0;
    std::array<EigenOperator, 4> ops{};  // V1(w_-), V1(w_+), V2(w_-), V2(w_+)
    // Signed amplitude of V_m(w_i) on its transition pattern:
    // eigenbasis -> {sin th+, cos th+, cos th-, sin th-}.
    std::array<double, 4> amp{};

    double frequency(Channel c) const noexcept {
        return c == Channel::Minus ? omega_minus : omega_plus;
    }
    const EigenOperator& op(int qubit, Channel c) const noexcept {
        return ops[2 * (qubit - 1) + index(c)];
    }
    double amplitude(int qubit, Channel c) const noexcept {
        return amp[2 * (qubit - 1) + index(c)];
    }
};

SpectralStructure spectral_structure(const Scenario& scenario);

// Direct coefficients M^1..M^4 (absorption/emission at w_-, w_+) and cross
// corrections Xi^1..Xi^4 for one reservoir:
//   M12 = M1 + Xi1, M34 = M1 - Xi1, M21 = M3 + Xi3, M43 = M3 - Xi3,
//   M13 = M2 - Xi2, M24 = M2 + Xi2, M31 = M4 - Xi4, M42 = M4 + Xi4.
struct TransitionRates {
    std::array<double, 4> M{};
    std::array<double, 4> Xi{};
};

TransitionRates transition_rates(const SpectralStructure& s, const ReservoirSpec& res,
                                 Topology topology);

// Rate matrix from the eight coefficients (M12, M13, M21, M24, M31, M34, M42, M43).
Matrix4 arrow_matrix(double m12, double m13, double m21, double m24, double m31, double m34,
                     double m42, double m43);

// M^I = 1 (x) [[M1, -M3], [-M1, M3]] + [[M2, -M4], [-M2, M4]] (x) 1.
Matrix4 independent_matrix(double m1, double m2, double m3, double m4);

struct ReservoirRates {
    Matrix4 direct = Matrix4::Zero();
    Matrix4 cross = Matrix4::Zero();

    Matrix4 total() const { return direct + cross; }
};

struct RateMatrix {
    Regime regime = Regime::DetunedCoupled;
    Topology topology = Topology::Common;
    ReservoirRates left;
    ReservoirRates right;

    const ReservoirRates& reservoir(ReservoirLabel label) const noexcept {
        return label == ReservoirLabel::Left ? left : right;
    }
    Matrix4 total() const { return left.total() + right.total(); }
    Matrix4 direct() const { return left.direct + right.direct; }
    Matrix4 cross() const { return left.cross + right.cross; }
};

// Common baths with w1 != w2 (DetunedCoupled or UncoupledDetuned).
RateMatrix rate_matrix_common_detuned(const Scenario& scenario);
// Independent baths, or common baths with g = 0 and w1 != w2.
RateMatrix rate_matrix_independent(const Scenario& scenario);
// Common baths with w1 = w2 (ResonantCoupled, ResonantDegenerate, UncoupledResonant).
RateMatrix rate_matrix_resonant(const Scenario& scenario);
// Dispatches on regime and topology.
RateMatrix rate_matrix(const Scenario& scenario);

// W^1..W^4 of the degenerate generator, summed over reservoirs (or one reservoir).
struct DegenerateRates {
    std::array<double, 4> total{};
    std::array<double, 4> left{};
    std::array<double, 4> right{};

    const std::array<double, 4>& reservoir(ReservoirLabel label) const noexcept {
        return label == ReservoirLabel::Left ? left : right;
    }
};

// W^{1/2} = -8 cos^2(phi) J(+/- w_+), W^{3/4} = -8 sin^2(phi) J(+/- w_-).
DegenerateRates degenerate_rates(const Scenario& scenario);

// Recovers W^1..W^4 from a degenerate-pattern rate matrix.
std::array<double, 4> degenerate_rates_from_matrix(const Matrix4& m);

using SuperOperator = Eigen::Matrix<std::complex<double>, 16, 16>;

// Superoperator on column-stacked 4x4 matrices in the scenario's working basis.
struct Liouvillian {
    SuperOperator left_direct = SuperOperator::Zero();
    SuperOperator left_cross = SuperOperator::Zero();
    SuperOperator right_direct = SuperOperator::Zero();
    SuperOperator right_cross = SuperOperator::Zero();

    SuperOperator reservoir(ReservoirLabel label) const {
        return label == ReservoirLabel::Left ? SuperOperator(left_direct + left_cross)
                                             : SuperOperator(right_direct + right_cross);
    }
    SuperOperator total() const { return left_direct + left_cross + right_direct + right_cross; }
};

Liouvillian build_liouvillian(const Scenario& scenario);

// vec index of element (i, j).
inline int vec_index(int i, int j) noexcept { return i + 4 * j; }

// Population-to-population block of a superoperator.
Matrix4 population_block(const SuperOperator& l);

}  // namespace qheat
