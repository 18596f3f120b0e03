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


// Concurrence of assistance: C_a = sum of the eigenvalues of
// R = sqrt(sqrt(rho) rho~ sqrt(rho)), rho~ = (sy x sy) rho* (sy x sy).

#pragma once

#include "qheat/steadystate.hpp"

namespace qheat {

// Bare-basis X state
//   [D 0 0 K]
//   [0 E L 0]
//   [0 L F 0]
//   [K 0 0 J]
struct XStateElements {
    double D = 0.0, E = 0.0, F = 0.0, J = 0.0;
    double K = 0.0, L = 0.0;

    // Unit trace and positivity, each within 1e-12.
    void validate() const;
    DensityMatrix matrix() const;
};

// X state of a diagonal eigenbasis state of a coupled system (detuned or resonant).
XStateElements x_state(const PopulationVector& populations, const EigenSystem& eig);

// rho~ = (sy x sy) rho* (sy x sy).
DensityMatrix spin_flip(const DensityMatrix& rho);

// Square roots of the spectrum of rho rho~, summed. Throws InvalidArgument for a
// non-Hermitian or non-PSD input (tolerance 1e-10).
double coa_general(const DensityMatrix& rho_bare);

// 2 sqrt(D J) + 2 sqrt(E F) written in the eigenbasis populations.
double coa_detuned_closed(const PopulationVector& populations, const EigenSystem& eig);

// Intercept h of C_a^R = (1 - h) rho22 + h.
double coa_resonant_intercept(const Scenario& scenario);

// (1 - h) rho22 + h. ResonantDegenerate only.
double coa_resonant_closed(double rho22, const Scenario& scenario);

// Generic route on the steady state of a scenario (family member at rho22 when degenerate).
double coa_steady_state(const Scenario& scenario, double rho22 = 0.0);

}  // namespace qheat
