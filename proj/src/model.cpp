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

#include "qheat/model.hpp"

#include "qheat/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qheat {

bool SystemParams::is_resonant() const noexcept {
    return std::abs(omega1 - omega2) < kResonanceRelTol * std::max(omega1, omega2);
}

void SystemParams::validate() const {
    if (!std::isfinite(omega1) || omega1 <= 0.0)
        fail(ErrorCode::InvalidArgument, fmt::format("omega1 must be positive, got {}", omega1));
    if (!std::isfinite(omega2) || omega2 <= 0.0)
        fail(ErrorCode::InvalidArgument, fmt::format("omega2 must be positive, got {}", omega2));
    if (!std::isfinite(g) || g < 0.0)
        fail(ErrorCode::InvalidArgument, fmt::format("g must be non-negative, got {}", g));
}

namespace {

constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;

struct Trig {
    double sin;
    double cos;
};

// sin(theta) = g / sqrt((G + w)^2 + g^2), cos(theta) = (G + w) / sqrt(...).
// For w < 0, G + w = g^2 / (G - w) is substituted so that the g -> 0 limit
// (theta = pi/2) comes out exactly.
Trig mixing_angle(double omega, double gamma, double g) {
    if (omega >= 0.0) {
        const double r = std::hypot(gamma + omega, g);
        return {g / r, (gamma + omega) / r};
    }
    const double r = std::hypot(gamma - omega, g);
    return {(gamma - omega) / r, g / r};
}

}  // namespace

EigenSystem diagonalize(const SystemParams& params) {
    params.validate();

    EigenSystem e;
    e.resonant = params.is_resonant();
    const double ws = params.omega_s();
    const double wd = e.resonant ? 0.0 : params.omega_d();
    const double g = params.g;

    e.gamma_s = std::hypot(ws, g);
    e.gamma_d = e.resonant ? g : std::hypot(wd, g);

    const Trig ts = mixing_angle(ws, e.gamma_s, g);
    const Trig td = e.resonant ? Trig{kHalfSqrt2, kHalfSqrt2} : mixing_angle(wd, e.gamma_d, g);

    e.sin_s = ts.sin;
    e.cos_s = ts.cos;
    e.sin_d = td.sin;
    e.cos_d = td.cos;
    e.theta_s = std::atan2(ts.sin, ts.cos);
    e.theta_d = std::atan2(td.sin, td.cos);
    e.theta_plus = e.theta_d + e.theta_s;
    e.theta_minus = e.theta_d - e.theta_s;
    e.sin_plus = td.sin * ts.cos + td.cos * ts.sin;
    e.cos_plus = td.cos * ts.cos - td.sin * ts.sin;
    e.sin_minus = td.sin * ts.cos - td.cos * ts.sin;
    e.cos_minus = td.cos * ts.cos + td.sin * ts.sin;

    e.omega_plus = e.gamma_s + e.gamma_d;
    e.omega_minus = e.gamma_s - e.gamma_d;
    e.lambdas << -e.gamma_s, -e.gamma_d, e.gamma_d, e.gamma_s;

    // Columns: |1> = -s_s|uu> + c_s|dd>, |2> = -s_d|ud> + c_d|du>,
    //          |3> =  c_d|ud> + s_d|du>, |4> =  c_s|uu> + s_s|dd>.
    Matrix4& b = e.basis;
    b.setZero();
    b(0, 0) = -ts.sin;
    b(3, 0) = ts.cos;
    b(1, 1) = -td.sin;
    b(2, 1) = td.cos;
    b(1, 2) = td.cos;
    b(2, 2) = td.sin;
    b(0, 3) = ts.cos;
    b(3, 3) = ts.sin;
    return e;
}

Matrix4 hamiltonian_bare(const SystemParams& params) {
    Matrix4 h = Matrix4::Zero();
    h(0, 0) = params.omega_s();
    h(1, 1) = params.omega_d();
    h(2, 2) = -params.omega_d();
    h(3, 3) = -params.omega_s();
    h(0, 3) = h(3, 0) = params.g;
    h(1, 2) = h(2, 1) = params.g;
    return h;
}

namespace {

Matrix4 embed(const Eigen::Matrix2d& op, int qubit) {
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d& a = qubit == 1 ? op : id;
    const Eigen::Matrix2d& c = qubit == 1 ? id : op;
    Matrix4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * c;
    return out;
}

void check_qubit(int qubit) {
    if (qubit != 1 && qubit != 2)
        fail(ErrorCode::InvalidArgument, fmt::format("qubit index must be 1 or 2, got {}", qubit));
}

}  // namespace

Matrix4 sigma_x(int qubit) {
    check_qubit(qubit);
    Eigen::Matrix2d sx;
    sx << 0, 1, 1, 0;
    return embed(sx, qubit);
}

Matrix4 sigma_minus(int qubit) {
    check_qubit(qubit);
    Eigen::Matrix2d sm;
    sm << 0, 0, 1, 0;  // |d><u|
    return embed(sm, qubit);
}

std::array<EigenOperator, 4> eigenoperators(const SystemParams& params, const EigenSystem& eig) {
    params.validate();
    const double sp = eig.sin_plus, cp = eig.cos_plus;
    const double sm = eig.sin_minus, cm = eig.cos_minus;

    std::array<EigenOperator, 4> ops{};
    // V_1(w_-) = sin(theta_+) (|3><4| - |1><2|)
    ops[0] = {1, Channel::Minus, eig.omega_minus, Matrix4::Zero()};
    ops[0].matrix(2, 3) = sp;
    ops[0].matrix(0, 1) = -sp;
    // V_1(w_+) = cos(theta_+) (|1><3| + |2><4|)
    ops[1] = {1, Channel::Plus, eig.omega_plus, Matrix4::Zero()};
    ops[1].matrix(0, 2) = cp;
    ops[1].matrix(1, 3) = cp;
    // V_2(w_-) = cos(theta_-) (|1><2| + |3><4|)
    ops[2] = {2, Channel::Minus, eig.omega_minus, Matrix4::Zero()};
    ops[2].matrix(0, 1) = cm;
    ops[2].matrix(2, 3) = cm;
    // V_2(w_+) = sin(theta_-) (|1><3| - |2><4|)
    ops[3] = {2, Channel::Plus, eig.omega_plus, Matrix4::Zero()};
    ops[3].matrix(0, 2) = sm;
    ops[3].matrix(1, 3) = -sm;
    return ops;
}

DensityMatrix to_bare_basis(const DensityMatrix& rho_eigen, const Matrix4& basis) {
    const Eigen::Matrix4cd b = basis.cast<std::complex<double>>();
    return b * rho_eigen * b.adjoint();
}

DensityMatrix to_bare_basis(const DensityMatrix& rho_eigen, const EigenSystem& eig) {
    return to_bare_basis(rho_eigen, eig.basis);
}

}  // namespace qheat
