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

// Two transversely coupled qubits, H_S = w1/2 sz1 + w2/2 sz2 + g sx1 sx2.
//
// Units: hbar = k_B = 1. The bare (product) basis is ordered
// {|uu>, |ud>, |du>, |dd>} with |u> = (1,0)^T the excited state. Eigenlevels
// are labelled 1..4 in ascending energy and stored 0-based.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace qheat {

using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;
using DensityMatrix = Eigen::Matrix4cd;

// |w1 - w2| below this fraction of max(w1, w2) is treated as exact resonance.
inline constexpr double kResonanceRelTol = 1e-9;

struct SystemParams {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double g = 0.0;

    double omega_s() const noexcept { return 0.5 * (omega1 + omega2); }
    double omega_d() const noexcept { return 0.5 * (omega1 - omega2); }
    bool is_resonant() const noexcept;
    bool is_coupled() const noexcept { return g > 0.0; }

    // Throws Error(InvalidArgument) unless w1 > 0, w2 > 0, g >= 0 (all finite).
    void validate() const;
};

// The two dissipative transition frequencies w_- = G_s - G_d and w_+ = G_s + G_d.
enum class Channel { Minus = 0, Plus = 1 };

inline constexpr std::array<Channel, 2> kChannels{Channel::Minus, Channel::Plus};

inline int index(Channel c) noexcept { return static_cast<int>(c); }

struct EigenSystem {
    double gamma_s = 0.0;   // sqrt(w_s^2 + g^2)
    double gamma_d = 0.0;   // sqrt(w_d^2 + g^2)
    double theta_s = 0.0;
    double theta_d = 0.0;
    double theta_plus = 0.0;   // theta_d + theta_s
    double theta_minus = 0.0;  // theta_d - theta_s
    // Sines/cosines evaluated without cancellation; exact zeros at g = 0.
    double sin_s = 0.0, cos_s = 1.0;
    double sin_d = 0.0, cos_d = 1.0;
    double sin_plus = 0.0, cos_plus = 1.0;
    double sin_minus = 0.0, cos_minus = 1.0;
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    bool resonant = false;
    Vector4 lambdas = Vector4::Zero();  // [-G_s, -G_d, G_d, G_s]
    Matrix4 basis = Matrix4::Identity();  // column l = eigenstate |l+1> in the bare basis

    double frequency(Channel c) const noexcept {
        return c == Channel::Minus ? omega_minus : omega_plus;
    }
};

EigenSystem diagonalize(const SystemParams& params);

// Explicit 4x4 H_S in the bare basis.
Matrix4 hamiltonian_bare(const SystemParams& params);

// Single-qubit operators embedded in the bare basis (qubit is 1 or 2).
Matrix4 sigma_x(int qubit);
Matrix4 sigma_minus(int qubit);

// V_m(w) in the eigenbasis: [H_S, V] = -w V.
struct EigenOperator {
    int qubit = 1;
    Channel channel = Channel::Minus;
    double frequency = 0.0;
    Matrix4 matrix = Matrix4::Zero();
};

// Ordered V_1(w_-), V_1(w_+), V_2(w_-), V_2(w_+). For g = 0 away from
// resonance one operator of each qubit vanishes identically.
std::array<EigenOperator, 4> eigenoperators(const SystemParams& params, const EigenSystem& eig);

// rho_bare = B rho_eigen B^T with B = eig.basis (or an explicit working basis).
DensityMatrix to_bare_basis(const DensityMatrix& rho_eigen, const EigenSystem& eig);
DensityMatrix to_bare_basis(const DensityMatrix& rho_eigen, const Matrix4& basis);

}  // namespace qheat
