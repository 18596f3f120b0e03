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


#include "qheat/entanglement.hpp"

#include "qheat/error.hpp"

#include <Eigen/Eigenvalues>

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace qheat {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kRankFloor = 64.0 * std::numeric_limits<double>::epsilon();

}  // namespace

void XStateElements::validate() const {
    const double tr = D + E + F + J;
    if (std::abs(tr - 1.0) > 1e-12)
        fail(ErrorCode::InvariantViolation, fmt::format("X state trace is {}", tr));
    if (D < -1e-12 || E < -1e-12 || F < -1e-12 || J < -1e-12)
        fail(ErrorCode::InvariantViolation, "X state has a negative diagonal entry");
    if (std::abs(K) > std::sqrt(std::max(D * J, 0.0)) + 1e-12 ||
        std::abs(L) > std::sqrt(std::max(E * F, 0.0)) + 1e-12)
        fail(ErrorCode::InvariantViolation, "X state coherence exceeds the positivity bound");
}

DensityMatrix XStateElements::matrix() const {
    DensityMatrix m = DensityMatrix::Zero();
    m(0, 0) = D;
    m(1, 1) = E;
    m(2, 2) = F;
    m(3, 3) = J;
    m(0, 3) = m(3, 0) = K;
    m(1, 2) = m(2, 1) = L;
    return m;
}

XStateElements x_state(const PopulationVector& p, const EigenSystem& eig) {
    const double ss = eig.sin_s * eig.sin_s, cs = eig.cos_s * eig.cos_s;
    const double sd = eig.sin_d * eig.sin_d, cd = eig.cos_d * eig.cos_d;
    XStateElements x;
    x.D = ss * p[0] + cs * p[3];
    x.E = sd * p[1] + cd * p[2];
    x.F = cd * p[1] + sd * p[2];
    x.J = cs * p[0] + ss * p[3];
    x.K = eig.sin_s * eig.cos_s * (p[3] - p[0]);
    x.L = eig.sin_d * eig.cos_d * (p[2] - p[1]);
    return x;
}

DensityMatrix spin_flip(const DensityMatrix& rho) {
    Eigen::Matrix2cd sy;
    sy << 0.0, std::complex<double>(0.0, -1.0), std::complex<double>(0.0, 1.0), 0.0;
    DensityMatrix yy;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) yy(2 * a + c, 2 * b + d) = sy(a, b) * sy(c, d);
    return yy * rho.conjugate() * yy;
}

double coa_general(const DensityMatrix& rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kStateTol)
        fail(ErrorCode::InvalidArgument, "density matrix is not Hermitian");
    if (std::abs(rho.trace() - 1.0) > kStateTol)
        fail(ErrorCode::InvalidArgument,
             fmt::format("density matrix trace is {}", rho.trace().real()));
    const Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kStateTol)
        fail(ErrorCode::InvalidArgument,
             fmt::format("density matrix is not PSD (min eigenvalue {:.3e})",
                         es.eigenvalues().minCoeff()));

    const Eigen::ComplexEigenSolver<DensityMatrix> ce(rho * spin_flip(rho), false);
    // Eigenvalues below the rounding floor are zero; their square roots would
    // otherwise contribute ~sqrt(eps) for rank-deficient states.
    const double cut = kRankFloor * ce.eigenvalues().cwiseAbs().maxCoeff();
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double x = ce.eigenvalues()[k].real();
        if (x > cut) sum += std::sqrt(x);
    }
    return sum;
}

double coa_detuned_closed(const PopulationVector& p, const EigenSystem& eig) {
    const double hs = std::pow(eig.sin_s * eig.cos_s, 2);
    const double hd = std::pow(eig.sin_d * eig.cos_d, 2);
    const double a = p[0] - p[3], b = p[1] - p[2];
    return 2.0 * (std::sqrt(hs * a * a + p[0] * p[3]) + std::sqrt(hd * b * b + p[1] * p[2]));
}

double coa_resonant_intercept(const Scenario& scenario) {
    if (scenario.regime() != Regime::ResonantDegenerate)
        fail(ErrorCode::RegimeMismatch,
             fmt::format("resonant COA needs the {} regime, got {}",
                         to_string(Regime::ResonantDegenerate), to_string(scenario.regime())));
    const auto w = degenerate_rates(scenario).total;
    const EigenSystem eig = diagonalize(scenario.params);
    const double n = w[1] * w[3] + w[0] * w[3] + w[0] * w[2];
    const double sc2 = std::pow(eig.sin_s * eig.cos_s, 2);
    const double d = w[1] * w[3] - w[0] * w[2];
    return (w[0] * w[3] + 2.0 * std::sqrt(d * d * sc2 + w[0] * w[1] * w[2] * w[3])) / n;
}

double coa_resonant_closed(double rho22, const Scenario& scenario) {
    if (!(rho22 >= 0.0 && rho22 <= 1.0))
        fail(ErrorCode::InvalidArgument, fmt::format("rho22 must lie in [0, 1], got {}", rho22));
    const double h = coa_resonant_intercept(scenario);
    return (1.0 - h) * rho22 + h;
}

double coa_steady_state(const Scenario& scenario, double rho22) {
    const RateMatrix rm = rate_matrix(scenario);
    const PopulationVector p = steady_state(rm, rho22).populations();
    const SpectralStructure s = spectral_structure(scenario);
    DensityMatrix diag = DensityMatrix::Zero();
    for (int i = 0; i < 4; ++i) diag(i, i) = p[i];
    return coa_general(to_bare_basis(diag, s.basis));
}

}  // namespace qheat
