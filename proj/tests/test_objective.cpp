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

#include <Eigen/QR>

#include "ism/objective.hpp"
#include "ism/rng.hpp"
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

Objective mfnu_ring(Index n) {
  // f(i) = point halfway around; never i itself.
  Objective obj;
  obj.kind = ObjectiveKind::mfnu;
  obj.furthest.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) obj.furthest[static_cast<std::size_t>(i)] = (i + n / 2) % n;
  return obj;
}

}  // namespace

TEST_CASE("objective at R = 0 is 0 with zero gradient") {
  Matrix<double> R = Matrix<double>::Zero(6, 3);
  Matrix<double> grad;
  for (auto obj : {Objective{ObjectiveKind::mvu, {}}, mfnu_ring(6)}) {
    CHECK(objective_value_grad(R, obj, grad) == 0.0);
    CHECK(grad.norm() == 0.0);
  }
}

TEST_CASE("mvu of the 2x2 identity: value 2, gradient 2I") {
  Matrix<double> R = Matrix<double>::Identity(2, 2);
  Matrix<double> grad;
  const double v = objective_value_grad(R, Objective{ObjectiveKind::mvu, {}}, grad);
  CHECK(v == 2.0);
  CHECK(testing::exact_equal(grad, Matrix<double>(2 * Matrix<double>::Identity(2, 2))));
}

TEST_CASE("gradients match central finite differences for both kinds") {
  const Index n = 9, d = 4;
  for (std::uint64_t seed : {10u, 11u, 12u}) {
    auto R = random_factor(n, d, seed);
    for (auto obj : {Objective{ObjectiveKind::mvu, {}}, mfnu_ring(n)}) {
      Matrix<double> grad;
      objective_value_grad(R, obj, grad);
      auto fn = [&](const Eigen::VectorXd& x) {
        Matrix<double> M = Eigen::Map<const Matrix<double>>(x.data(), n, d);
        return objective_value(M, obj);
      };
      Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(R.data(), R.size());
      const Eigen::VectorXd fd = testing::central_diff_grad(fn, x);
      CHECK(testing::grad_rel_error(Eigen::Map<Eigen::VectorXd>(grad.data(), grad.size()), fd) <= 1e-6);
    }
  }
}

TEST_CASE("mfnu is translation invariant, mvu is not") {
  const Index n = 8, d = 3;
  auto R = random_factor(n, d, 44);
  Matrix<double> shifted = R;
  Eigen::RowVector3d offset(1.5, -2.0, 0.75);
  shifted.rowwise() += offset;

  auto mfnu = mfnu_ring(n);
  CHECK(objective_value(shifted, mfnu) == doctest::Approx(objective_value(R, mfnu)).epsilon(1e-12));

  Objective mvu{ObjectiveKind::mvu, {}};
  CHECK(objective_value(shifted, mvu) != doctest::Approx(objective_value(R, mvu)).epsilon(1e-6));
}

TEST_CASE("both objectives are invariant under orthogonal right-multiplication and nonnegative") {
  const Index n = 10, d = 4;
  auto R = random_factor(n, d, 3);
  Matrix<double> Q = Eigen::HouseholderQR<Matrix<double>>(random_factor(d, d, 4)).householderQ();
  Matrix<double> RQ = R * Q;

  for (auto obj : {Objective{ObjectiveKind::mvu, {}}, mfnu_ring(n)}) {
    const double v = objective_value(R, obj);
    CHECK(v >= 0.0);
    CHECK(objective_value(RQ, obj) == doctest::Approx(v).epsilon(1e-10));
  }
}

TEST_CASE("mfnu without furthest pairs is rejected") {
  Matrix<double> R = Matrix<double>::Zero(4, 2);
  Objective bad{ObjectiveKind::mfnu, {0, 1}};  // wrong size
  Matrix<double> grad;
  CHECK_THROWS_AS(objective_value_grad(R, bad, grad), std::invalid_argument);
}
