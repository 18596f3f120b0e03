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

#include "qheat/steadystate.hpp"

#include "qheat/error.hpp"

#include <Eigen/SVD>

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace qheat {

PopulationVector normalize_populations(const Vector4& raw) {
    const double sum = raw.sum();
    if (!std::isfinite(sum) || sum == 0.0)
        fail(ErrorCode::InvariantViolation, "population vector cannot be normalized");
    PopulationVector p = raw / sum;
    for (int i = 0; i < 4; ++i) {
        if (p[i] < -kNegativeClamp)
            fail(ErrorCode::InvariantViolation,
                 fmt::format("negative population rho_{}{} = {:.3e}", i + 1, i + 1, p[i]));
        if (p[i] < 0.0) p[i] = 0.0;
    }
    return p / p.sum();
}

PopulationVector gibbs_populations(const Vector4& lambdas, double temperature) {
    if (temperature == 0.0) return PopulationVector(1.0, 0.0, 0.0, 0.0);
    const double shift = lambdas.minCoeff();
    Vector4 w;
    for (int i = 0; i < 4; ++i) w[i] = std::exp(-(lambdas[i] - shift) / temperature);
    return w / w.sum();
}

int numeric_rank(const Matrix4& m) {
    const Eigen::JacobiSVD<Matrix4> svd(m);
    const Vector4 s = svd.singularValues();
    if (s[0] == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < 4; ++i)
        if (s[i] > kNullspaceRelTol * s[0]) ++rank;
    return rank;
}

Vector4 levi_civita_populations(const Matrix4& m) {
    // M^{pq} (1-based) = -m(q-1, p-1) for p != q.
    auto M = [&](int p, int q) { return -m(q - 1, p - 1); };
    Vector4 rho = Vector4::Zero();
    for (int i = 1; i <= 4; ++i) {
        const int j = 5 - i;
        for (int k = 1; k <= 4; ++k) {
            for (int l = 1; l <= 4; ++l) {
                // |eps_ijkl| = 1 iff (i, j, k, l) is a permutation.
                if (k == i || k == j || l == i || l == j || k == l) continue;
                rho[i - 1] += (M(k, i) + M(k, j)) * M(l, i) * M(j, l);
            }
        }
    }
    return rho;
}

PopulationVector elimination_steady_state(const Matrix4& m) {
    Matrix4 a = m;
    a.row(3).setOnes();
    const Vector4 b(0.0, 0.0, 0.0, 1.0);
    return normalize_populations(a.fullPivLu().solve(b));
}

PopulationVector product_steady_state(double m1, double m2, double m3, double m4) {
    return normalize_populations(Vector4(m3 * m4, m1 * m4, m2 * m3, m1 * m2));
}

PopulationVector steady_state_closed_form(const RateMatrix& rm) {
    if (rm.regime == Regime::ResonantDegenerate)
        fail(ErrorCode::DegenerateSteadyState,
             "degenerate regime has a one-parameter family of steady states");
    const Matrix4 m = rm.total();
    const int rank = numeric_rank(m);
    if (rank != 3)
        fail(ErrorCode::InvariantViolation,
             fmt::format("{} regime expects a rank-3 generator, SVD rank is {}",
                         to_string(rm.regime), rank));
    const PopulationVector lc = normalize_populations(levi_civita_populations(m));
    const PopulationVector lu = elimination_steady_state(m);
    const double diff = (lc - lu).cwiseAbs().maxCoeff();
    if (diff > kRouteAgreementTol)
        fail(ErrorCode::InvariantViolation,
             fmt::format("Levi-Civita and elimination steady states differ by {:.3e}", diff));
    return lc;
}

PopulationVector equal_rate_steady_state(double n_minus, double n_plus) {
    if (!(n_minus >= 0.0) || !(n_plus >= 0.0))
        fail(ErrorCode::InvalidArgument, "occupation sums must be >= 0");
    const Vector4 raw((n_minus + 2.0) * (n_plus + 2.0), n_minus * (n_plus + 2.0),
                      (n_minus + 2.0) * n_plus, n_minus * n_plus);
    return raw / raw.sum();
}

SteadyStateResult steady_state_family(const RateMatrix& rm, double rho22) {
    if (!(rho22 >= 0.0 && rho22 <= 1.0))
        fail(ErrorCode::InvalidArgument, fmt::format("rho22 must lie in [0, 1], got {}", rho22));
    const Matrix4 m = rm.total();
    const int rank = numeric_rank(m);
    if (rm.regime != Regime::ResonantDegenerate) {
        if (rank == 3) fail(ErrorCode::NotDegenerate, "generator has a unique steady state");
        fail(ErrorCode::InvariantViolation,
             fmt::format("{} regime with SVD rank {}", to_string(rm.regime), rank));
    }
    if (rank != 2)
        fail(ErrorCode::InvariantViolation,
             fmt::format("degenerate regime expects rank 2, SVD rank is {}", rank));

    const auto w = degenerate_rates_from_matrix(m);
    SteadyStateFamily fam;
    fam.rho22 = rho22;
    fam.residual = normalize_populations(Vector4(w[1] * w[3], 0.0, w[0] * w[3], w[0] * w[2]));
    return {fam};
}

PopulationVector uncoupled_residual_state(double j_plus, double j_minus) {
    return normalize_populations(
        Vector4(j_minus * j_minus, 0.0, j_minus * j_plus, j_plus * j_plus));
}

SteadyStateResult steady_state(const RateMatrix& m, double rho22) {
    if (!(rho22 >= 0.0 && rho22 <= 1.0))
        fail(ErrorCode::InvalidArgument, fmt::format("rho22 must lie in [0, 1], got {}", rho22));
    if (m.regime == Regime::ResonantDegenerate) return steady_state_family(m, rho22);
    return {steady_state_closed_form(m)};
}

namespace {

using Vector16 = Eigen::Matrix<std::complex<double>, 16, 1>;

DensityMatrix unvec(const Vector16& v) {
    DensityMatrix r;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) r(i, j) = v[vec_index(i, j)];
    return r;
}

DensityMatrix to_state(DensityMatrix r) {
    const std::complex<double> tr = r.trace();
    if (std::abs(tr) < 1e-300) fail(ErrorCode::InvariantViolation, "null vector has zero trace");
    r /= tr;
    r = 0.5 * (r + r.adjoint()).eval();
    const Eigen::SelfAdjointEigenSolver<DensityMatrix> es(r, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        fail(ErrorCode::InvariantViolation,
             fmt::format("nullspace state is not positive (min eigenvalue {:.3e})",
                         es.eigenvalues().minCoeff()));
    return r;
}

}  // namespace

NullspaceResult steady_state_nullspace(const SuperOperator& l) {
    const Eigen::JacobiSVD<SuperOperator> svd(l, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = kNullspaceRelTol * s[0];
    int dim = 0;
    for (int i = 0; i < 16; ++i)
        if (!(s[i] > cut)) ++dim;
    if (dim != 1 && dim != 2)
        fail(ErrorCode::NullspaceDimension,
             fmt::format("steady-state nullspace has dimension {}", dim));

    NullspaceResult out;
    out.dimension = dim;
    const auto& v = svd.matrixV();
    if (dim == 1) {
        out.state = to_state(unvec(v.col(15)));
        return out;
    }

    const Vector16 a = v.col(14), b = v.col(15);
    // The dark projector must lie in the span.
    Vector16 dark = Vector16::Zero();
    dark[vec_index(1, 1)] = 1.0;
    const Vector16 proj = a * a.dot(dark) + b * b.dot(dark);
    if ((proj - dark).norm() > 1e-8)
        fail(ErrorCode::InvariantViolation, "2-dimensional nullspace does not contain |2><2|");
    // Combination with vanishing (2,2) element.
    const Vector16 res = b[vec_index(1, 1)] * a - a[vec_index(1, 1)] * b;
    out.dark = unvec(dark);
    out.residual = to_state(unvec(res));
    out.residual(1, 1) = 0.0;
    return out;
}

}  // namespace qheat
