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

#pragma once

#include "qheat/dissipators.hpp"

#include <variant>

namespace qheat {

// Eigenbasis populations (rho_11, .., rho_44).
using PopulationVector = Vector4;

// Populations in [-kNegativeClamp, 0) are clamped to zero; anything lower is an error.
inline constexpr double kNegativeClamp = 1e-14;
// Singular values below this fraction of the largest count as zero.
inline constexpr double kNullspaceRelTol = 1e-10;
// Agreement required between the Levi-Civita and elimination routes.
inline constexpr double kRouteAgreementTol = 1e-12;

// Normalizes to unit sum after clamping tiny negatives; throws InvariantViolation otherwise.
PopulationVector normalize_populations(const Vector4& raw);

// Normalized exp(-lambda_l / T); the ground state at T = 0.
PopulationVector gibbs_populations(const Vector4& lambdas, double temperature);

// Numerical rank with singular values below kNullspaceRelTol * max treated as zero.
int numeric_rank(const Matrix4& m);

// Unnormalized 24-term Levi-Civita sum over the coefficients M^{pq} of m.
Vector4 levi_civita_populations(const Matrix4& m);

// Normalized solution of m |rho> = 0 by LU with the last row replaced by normalization.
PopulationVector elimination_steady_state(const Matrix4& m);

// (M3 M4, M1 M4, M2 M3, M1 M2) normalized.
PopulationVector product_steady_state(double m1, double m2, double m3, double m4);

struct SteadyStateFamily {
    double rho22 = 0.0;
    PopulationVector dark = PopulationVector(0.0, 1.0, 0.0, 0.0);
    PopulationVector residual = PopulationVector::Zero();

    PopulationVector at(double weight) const { return weight * dark + (1.0 - weight) * residual; }
    PopulationVector mixture() const { return at(rho22); }
};

struct SteadyStateResult {
    std::variant<PopulationVector, SteadyStateFamily> value;

    bool is_unique() const noexcept { return value.index() == 0; }
    const PopulationVector& unique() const { return std::get<PopulationVector>(value); }
    const SteadyStateFamily& family() const { return std::get<SteadyStateFamily>(value); }
    // The unique state, or the family member at its rho22.
    PopulationVector populations() const { return is_unique() ? unique() : family().mixture(); }
};

// Unique steady state of the total generator. Throws DegenerateSteadyState for the
// degenerate regime and InvariantViolation if the SVD rank or the two solution
// routes disagree with the classification.
PopulationVector steady_state_closed_form(const RateMatrix& m);

// Equal rates gamma^{mn}(w_i) = gamma_i, with n_- = n_L(w_-) + n_R(w_-) and n_+ likewise.
PopulationVector equal_rate_steady_state(double n_minus, double n_plus);

// Dark/residual family of the degenerate generator at the given rho22.
// Throws NotDegenerate for a rank-3 generator.
SteadyStateResult steady_state_family(const RateMatrix& m, double rho22);

// Residual state (J-^2, 0, J- J+, J+^2) of uncoupled resonant qubits, J+/- = -2 J(+/-w).
PopulationVector uncoupled_residual_state(double j_plus, double j_minus);

// Unique state or family (at rho22) according to the regime.
SteadyStateResult steady_state(const RateMatrix& m, double rho22 = 0.0);

struct NullspaceResult {
    int dimension = 0;
    DensityMatrix state = DensityMatrix::Zero();     // dimension 1
    DensityMatrix dark = DensityMatrix::Zero();      // dimension 2
    DensityMatrix residual = DensityMatrix::Zero();  // dimension 2, zero (2,2) entry
};

// Nullspace of a 16x16 generator by SVD. Throws NullspaceDimension unless the
// dimension is 1 or 2, and InvariantViolation if a 2-dimensional nullspace does
// not contain |2><2|.
NullspaceResult steady_state_nullspace(const SuperOperator& l);

}  // namespace qheat
