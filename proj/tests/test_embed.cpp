/*
 * Copyright (c) 2026, the ism authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <Eigen/QR>

#include "ism/embed.hpp"
#include "ism/graph.hpp"
#include "ism/swiss_roll.hpp"
#include "oracles.hpp"

using namespace ism;

namespace {

Matrix<double> random_factor(Index n, Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix<double> R(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index m = 0; m < d; ++m) R(i, m) = rng.normal();
  return R;
}

Matrix<double> random_orthogonal(Index d, std::uint64_t seed) {
  return Eigen::HouseholderQR<Matrix<double>>(random_factor(d, d, seed)).householderQ();
}

}  // namespace

TEST_CASE("jacobi eigensolver matches the dense symmetric oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto R = random_factor(50, 6, seed);
    Matrix<double> S = R.transpose() * R;  // PSD 6x6
    auto mine = jacobi_eigen_sym<double>(S);

    Eigen::SelfAdjointEigenSolver<Matrix<double>> oracle(S);
    Vector<double> expected = oracle.eigenvalues().reverse();
    for (Index i = 0; i < 6; ++i)
      CHECK(mine.eigenvalues[i] == doctest::Approx(expected[i]).epsilon(1e-9));

    // Residual of the eigen decomposition itself.
    CHECK((S * mine.eigenvectors - mine.eigenvectors * mine.eigenvalues.asDiagonal()).norm() <= 1e-9 * S.norm());
    CHECK((mine.eigenvectors.transpose() * mine.eigenvectors - Matrix<double>::Identity(6, 6)).norm() <= 1e-11);
  }

  // Indefinite symmetric input.
  Matrix<double> A(3, 3);
  A << 2, -1, 0.5, -1, -3, 1, 0.5, 1, 0.25;
  auto mine = jacobi_eigen_sym<double>(A);
  Eigen::SelfAdjointEigenSolver<Matrix<double>> oracle(A);
  Vector<double> expected = oracle.eigenvalues().reverse();
  for (Index i = 0; i < 3; ++i) CHECK(mine.eigenvalues[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("pca_spectrum: rank-1 factor has exactly one nonzero singular value") {
  Matrix<double> R = Matrix<double>::Zero(20, 4);
  Rng rng(5);
  for (Index i = 0; i < 20; ++i) R(i, 2) = rng.normal();
  auto spec = pca_spectrum(R);
  CHECK(spec.singular_values[0] > 0);
  for (Index i = 1; i < 4; ++i) CHECK(spec.singular_values[i] <= 1e-9 * spec.singular_values[0]);
  CHECK(spec.energy[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pca_spectrum: centered orthonormal columns times diag(3,2,1)") {
  const Index n = 40;
  auto raw = random_factor(n, 3, 9);
  Matrix<double> centered = raw.rowwise() - raw.colwise().mean();
  // QR of a centered matrix keeps the column span, hence zero column means.
  Eigen::HouseholderQR<Matrix<double>> qr(centered);
  Matrix<double> U = Matrix<double>(qr.householderQ()).leftCols(3);
  Matrix<double> R = U * Eigen::Vector3d(3, 2, 1).asDiagonal();

  auto spec = pca_spectrum(R);
  CHECK(spec.singular_values[0] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(spec.singular_values[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(spec.singular_values[2] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pca_spectrum invariants: rotation invariance, monotone energy ending at 1") {
  auto R = random_factor(30, 5, 12);
  auto spec = pca_spectrum(R);
  auto spec_rot = pca_spectrum(Matrix<double>(R * random_orthogonal(5, 13)));
  for (Index i = 0; i < 5; ++i)
    CHECK(spec.singular_values[i] == doctest::Approx(spec_rot.singular_values[i]).epsilon(1e-9));
  for (Index i = 1; i < 5; ++i) CHECK(spec.energy[i] >= spec.energy[i - 1]);
  CHECK(spec.energy[4] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(pca_spectrum(Matrix<double>(Matrix<double>::Zero(3, 65))), std::invalid_argument);
  Matrix<double> bad = Matrix<double>::Zero(3, 2);
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(pca_spectrum(bad), std::invalid_argument);
}

TEST_CASE("align_to_principal_axes: preserves RR^T, idempotent up to sign, kills dead columns") {
  auto R = random_factor(25, 5, 21);
  auto aligned = align_to_principal_axes(R);
  CHECK((aligned * aligned.transpose() - R * R.transpose()).norm() <= 1e-10 * (R * R.transpose()).norm());

  auto again = align_to_principal_axes(aligned);
  for (Index c = 0; c < 5; ++c) {
    const double same = (again.col(c) - aligned.col(c)).norm();
    const double flipped = (again.col(c) + aligned.col(c)).norm();
    CHECK(std::min(same, flipped) <= 1e-9);
  }

  // Rank-2 factor inside d' = 5: after alignment the trailing three columns
  // carry (almost) no variance.
  Matrix<double> lowrank = Matrix<double>::Zero(25, 5);
  lowrank.leftCols(2) = random_factor(25, 2, 22);
  Matrix<double> mixed = lowrank * random_orthogonal(5, 23);
  auto fixed = align_to_principal_axes(mixed);
  Matrix<double> centered = fixed.rowwise() - fixed.colwise().mean();
  for (Index c = 2; c < 5; ++c) CHECK(centered.col(c).squaredNorm() / 25.0 <= 1e-10);
}

TEST_CASE("feasibility_metrics: the input itself is exactly feasible") {
  SwissRollSpec spec;
  spec.n_points = 150;
  spec.seed = 31;
  auto data = gen_swiss_roll(spec);
  auto graph = build_knn(data, 4);
  ConstraintSet cs;
  for (const auto& e : graph.edges) cs.equalities.push_back({e.i, e.j, e.d});

  auto m = feasibility_metrics(Matrix<double>(data.points), cs);
  CHECK(m.eq_rrmse == 0.0);
  CHECK(m.max_abs_residual == 0.0);
  CHECK(m.sep_violation_rate == 0.0);
}

TEST_CASE("feasibility_metrics: analytic unrolling of a dense noiseless roll is nearly feasible") {
  // Oracle: map each point to (arc length, height). Residuals come only from
  // chord-vs-geodesic curvature, so the relative RMS error is small at this
  // density (measured 0.2924% for n=600, k=5, seed=1).
  SwissRollSpec spec;
  spec.n_points = 600;
  spec.seed = 1;
  spec.noise_sd = 0;
  auto data = gen_swiss_roll(spec);
  auto graph = build_knn(data, 5);
  ConstraintSet cs;
  for (const auto& e : graph.edges) cs.equalities.push_back({e.i, e.j, e.d});

  Matrix<double> unrolled(data.num_points(), 2);
  for (Index i = 0; i < data.num_points(); ++i) {
    const double t = std::hypot(data.points(i, 0), data.points(i, 2));
    unrolled(i, 0) = swiss_roll_arc_length(t, spec.t_min);
    unrolled(i, 1) = data.points(i, 1);
  }
  auto m = feasibility_metrics(unrolled, cs);
  CHECK(m.eq_rrmse <= 0.5);
  CHECK(m.eq_rrmse > 0.0);
}

TEST_CASE("feasibility_metrics: violating 1 of 100 separations gives a 1% rate") {
  const Index n = 102;
  Matrix<double> R = Matrix<double>::Zero(n, 2);
  R(0, 0) = 1.0;  // anchor along +x
  ConstraintSet cs;
  cs.anchors.anchors = {0};
  for (Index i = 1; i <= 100; ++i) {
    R(i, 0) = 1.0;
    cs.separations.push_back({0, i, +1, 0.0});
  }
  R(100, 0) = -1.0;  // one genuine violation
  auto m = feasibility_metrics(R, cs);
  CHECK(m.sep_violation_rate == doctest::Approx(0.01));
}
