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


#include "qheat/sampling.hpp"

#include "qheat/error.hpp"

#include <cmath>

namespace qheat {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ReservoirSpec random_rates(ReservoirLabel label, double temperature, std::mt19937_64& rng) {
    ReservoirSpec r = ReservoirSpec::flat(label, temperature, 0.0);
    for (RateEntry& e : r.rates) {
        e.g11 = uniform(rng, 1e-3, 1e-2);
        e.g22 = uniform(rng, 1e-3, 1e-2);
        e.g12 = uniform(rng, 0.0, 1.0) * std::sqrt(e.g11 * e.g22);
    }
    return r;
}

}  // namespace

Scenario random_scenario(Regime regime, std::mt19937_64& rng) {
    Scenario s;
    const double w1 = uniform(rng, 1.0, 5.0);
    const double delta = uniform(rng, 0.2, 2.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    const double w2_detuned = w1 + delta > 0.5 ? w1 + delta : w1 - delta;
    const double g = uniform(rng, 0.05, 1.0);
    const double tl = uniform(rng, 0.5, 200.0), tr = uniform(rng, 0.5, 200.0);
    const bool common = uniform(rng, 0.0, 1.0) < 0.5;

    switch (regime) {
        case Regime::DetunedCoupled:
            s.params = {w1, w2_detuned, g};
            s.topology = common ? Topology::Common : Topology::Independent;
            break;
        case Regime::ResonantCoupled:
            s.params = {w1, w1, g};
            s.topology = common ? Topology::Common : Topology::Independent;
            break;
        case Regime::ResonantDegenerate:
            s.params = {w1, w1, g};
            break;
        case Regime::UncoupledDetuned:
            s.params = {w1, w2_detuned, 0.0};
            break;
        case Regime::UncoupledResonant:
            s.params = {w1, w1, 0.0};
            break;
        case Regime::UncoupledIndependent:
            s.params = {w1, uniform(rng, 0.0, 1.0) < 0.25 ? w1 : w2_detuned, 0.0};
            s.topology = Topology::Independent;
            break;
    }
    if (regime == Regime::ResonantDegenerate) {
        const double gm = uniform(rng, 1e-3, 1e-2), gp = uniform(rng, 1e-3, 1e-2);
        s.left = ReservoirSpec::channels(ReservoirLabel::Left, tl, gm, gp);
        s.right = ReservoirSpec::channels(ReservoirLabel::Right, tr, gm, gp);
    } else {
        s.left = random_rates(ReservoirLabel::Left, tl, rng);
        s.right = random_rates(ReservoirLabel::Right, tr, rng);
    }
    if (s.regime() != regime)
        fail(ErrorCode::InvariantViolation, "random scenario landed in the wrong regime");
    return s;
}

}  // namespace qheat
