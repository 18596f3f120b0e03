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


#include "doctest.h"
#include "oracles.hpp"

#include "qheat/error.hpp"
#include "qheat/model.hpp"

#include <cmath>
#include <random>

using namespace qheat;

namespace {

Matrix4 commutator(const Matrix4& a, const Matrix4& b) { return a * b - b * a; }

double max_abs(const Matrix4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("bare Hamiltonian matches the Pauli construction") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int k = 0; k < 50; ++k) {
        const SystemParams p{u(rng), u(rng), u(rng) / 5.0};
        const oracle::CMat h = oracle::hamiltonian(p.omega1, p.omega2, p.g);
        CHECK((hamiltonian_bare(p).cast<std::complex<double>>() - h).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("uncoupled detuned eigensystem") {
    const EigenSystem e = diagonalize({3.0, 4.0, 0.0});
    CHECK(e.lambdas[0] == doctest::Approx(-3.5).epsilon(1e-15));
    CHECK(e.lambdas[1] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(e.lambdas[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.lambdas[3] == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(e.theta_s == 0.0);
    CHECK(e.omega_minus == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(e.omega_plus == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("detuned coupled eigensystem against a numeric eigensolve") {
    const SystemParams p{3.0, 4.0, 0.3};
    const EigenSystem e = diagonalize(p);
    const Eigen::SelfAdjointEigenSolver<oracle::CMat> es(oracle::hamiltonian(3.0, 4.0, 0.3));
    for (int l = 0; l < 4; ++l) CHECK(std::abs(e.lambdas[l] - es.eigenvalues()[l]) < 1e-13);
    CHECK(std::abs(e.gamma_s - 3.5128336140500592) < 1e-13);
    CHECK(std::abs(e.gamma_d - 0.58309518948453005) < 1e-13);
    CHECK(std::abs(e.omega_plus - 4.0959288035345892) < 1e-13);
    CHECK(std::abs(e.omega_minus - 2.9297384245655291) < 1e-13);
    // Each stored eigenvector spans the same line as the numeric one.
    for (int l = 0; l < 4; ++l) {
        const std::complex<double> overlap =
            es.eigenvectors().col(l).dot(e.basis.col(l).cast<std::complex<double>>());
        CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-13);
    }
}

TEST_CASE("resonant eigenvalues and singlet/triplet pair") {
    const EigenSystem e = diagonalize({3.0, 3.0, 0.3});
    const double root = std::sqrt(9.09);
    CHECK(e.lambdas[0] == doctest::Approx(-root).epsilon(1e-14));
    CHECK(e.lambdas[1] == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(e.lambdas[2] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(e.lambdas[3] == doctest::Approx(root).epsilon(1e-14));
    const double r = std::sqrt(0.5);
    // |2> = (-|ud> + |du>)/sqrt2, |3> = (|ud> + |du>)/sqrt2.
    CHECK(std::abs(e.basis(1, 1) + r) < 1e-15);
    CHECK(std::abs(e.basis(2, 1) - r) < 1e-15);
    CHECK(std::abs(e.basis(1, 2) - r) < 1e-15);
    CHECK(std::abs(e.basis(2, 2) - r) < 1e-15);
}

TEST_CASE("basis diagonalizes H_S for random parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> w(0.1, 10.0), g(0.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const SystemParams p{w(rng), w(rng), g(rng)};
        const EigenSystem e = diagonalize(p);
        const Matrix4 h = hamiltonian_bare(p);
        Matrix4 d = e.basis.transpose() * h * e.basis;
        for (int l = 0; l < 4; ++l) {
            CHECK(std::abs(d(l, l) - e.lambdas[l]) < 1e-10 * h.norm());
            d(l, l) = 0.0;
        }
        worst = std::max(worst, max_abs(d) / h.norm());
        CHECK(std::abs(e.basis.transpose().determinant()) == doctest::Approx(1.0));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("eigenoperators satisfy the ladder relation and rebuild sigma_x") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> w(0.5, 6.0), g(0.0, 2.0);
    for (int k = 0; k < 500; ++k) {
        SystemParams p{w(rng), w(rng), g(rng)};
        if (k % 5 == 0) p.omega2 = p.omega1;
        if (k % 7 == 0) p.g = 0.0;
        const EigenSystem e = diagonalize(p);
        const auto ops = eigenoperators(p, e);
        const Matrix4 h = e.lambdas.asDiagonal();
        for (const auto& v : ops) {
            CHECK(max_abs(commutator(h, v.matrix) + v.frequency * v.matrix) <= 1e-12);
        }
        for (int m = 1; m <= 2; ++m) {
            const Matrix4 sum = ops[2 * (m - 1)].matrix + ops[2 * (m - 1) + 1].matrix;
            const Matrix4 bare = e.basis * (sum + sum.transpose()) * e.basis.transpose();
            CHECK(max_abs(bare - sigma_x(m)) <= 1e-12);
        }
    }
}

TEST_CASE("eigenoperator element pattern at the detuned reference point") {
    const SystemParams p{3.0, 4.0, 0.3};
    const EigenSystem e = diagonalize(p);
    const auto ops = eigenoperators(p, e);
    const Matrix4& v = ops[0].matrix;
    CHECK(v(2, 3) == doctest::Approx(e.sin_plus));
    CHECK(v(0, 1) == doctest::Approx(-e.sin_plus));
    Matrix4 rest = v;
    rest(2, 3) = rest(0, 1) = 0.0;
    CHECK(max_abs(rest) == 0.0);
}

TEST_CASE("uncoupled eigenoperators are lowering operators") {
    const SystemParams p{3.0, 4.0, 0.0};
    const EigenSystem e = diagonalize(p);
    const auto ops = eigenoperators(p, e);
    for (int m = 1; m <= 2; ++m) {
        Matrix4 sum = Matrix4::Zero();
        for (int c = 0; c < 2; ++c) sum += ops[2 * (m - 1) + c].matrix;
        const Matrix4 bare = e.basis * sum * e.basis.transpose();
        CHECK(max_abs(bare - sigma_minus(m)) <= 1e-15);
    }
    // Qubit 1 has the lower frequency and only its w_- operator survives.
    CHECK(max_abs(ops[1].matrix) == 0.0);
    CHECK(max_abs(ops[2].matrix) == 0.0);
}

TEST_CASE("small coupling is continuous with g = 0") {
    const EigenSystem a = diagonalize({3.0, 4.0, 1e-9});
    const EigenSystem b = diagonalize({3.0, 4.0, 0.0});
    CHECK(std::abs(a.theta_s - b.theta_s) < 1e-6);
    CHECK(std::abs(a.theta_d - b.theta_d) < 1e-6);
    CHECK(std::abs(a.theta_plus - b.theta_plus) < 1e-6);
    CHECK(std::abs(a.theta_minus - b.theta_minus) < 1e-6);
}

TEST_CASE("bare-basis transforms") {
    const EigenSystem e = diagonalize({3.0, 3.0, 0.3});
    const DensityMatrix mixed = DensityMatrix::Identity() / 4.0;
    CHECK((to_bare_basis(mixed, e) - mixed).cwiseAbs().maxCoeff() < 1e-15);

    DensityMatrix dark = DensityMatrix::Zero();
    dark(1, 1) = 1.0;
    const DensityMatrix s = to_bare_basis(dark, e);
    CHECK(s(1, 1).real() == doctest::Approx(0.5));
    CHECK(s(2, 2).real() == doctest::Approx(0.5));
    CHECK(s(1, 2).real() == doctest::Approx(-0.5));

    const EigenSystem d = diagonalize({3.0, 4.0, 0.3});
    DensityMatrix diag = DensityMatrix::Zero();
    const double pop[4] = {0.4, 0.3, 0.2, 0.1};
    for (int l = 0; l < 4; ++l) diag(l, l) = pop[l];
    const DensityMatrix x = to_bare_basis(diag, d);
    CHECK(x(0, 0).real() == doctest::Approx(d.sin_s * d.sin_s * 0.4 + d.cos_s * d.cos_s * 0.1));
    CHECK(std::abs(x.trace() - 1.0) < 1e-15);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(diagonalize({0.0, 3.0, 0.1}), Error);
    CHECK_THROWS_AS(diagonalize({3.0, -1.0, 0.1}), Error);
    CHECK_THROWS_AS(diagonalize({3.0, 3.0, -0.1}), Error);
    CHECK_THROWS_AS(diagonalize({3.0, std::nan(""), 0.1}), Error);
}
