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


// Seeded random scenarios for each regime. Used by the validate subcommand
// and the test suites.

#pragma once

#include "qheat/dissipators.hpp"

#include <random>

namespace qheat {

// Draws a scenario whose regime() equals the requested one. Parameter ranges:
// w1 in [1, 5], |w2 - w1| in [0.2, 2], g in [0.05, 1], T in [0.5, 200],
// rates in [1e-3, 1e-2]. Coupled regimes pick the topology at random.
Scenario random_scenario(Regime regime, std::mt19937_64& rng);

}  // namespace qheat
