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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ism/csv.hpp"
#include "ism/dataset.hpp"
#include "ism/swiss_roll.hpp"
#include "oracles.hpp"

using namespace ism;

namespace {

std::filesystem::path tmp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ism_test_" + name);
}

}  // namespace

TEST_CASE("swiss roll: points lie exactly on the surface when noiseless") {
  SwissRollSpec spec;
  spec.n_points = 200;
  spec.noise_sd = 0;
  spec.seed = 11;
  auto data = gen_swiss_roll(spec);
  REQUIRE(data.num_points() == 200);
  REQUIRE(data.dim() == 3);
  for (Index i = 0; i < data.num_points(); ++i) {
    const double x = data.points(i, 0), y = data.points(i, 1), z = data.points(i, 2);
    const double t = std::hypot(x, z);
    CHECK(t >= spec.t_min - 1e-9);
    CHECK(t <= spec.t_max + 1e-9);
    CHECK(x == doctest::Approx(t * std::cos(t)).epsilon(1e-9));
    CHECK(z == doctest::Approx(t * std::sin(t)).epsilon(1e-9));
    CHECK(y >= 0);
    CHECK(y <= spec.height);
  }
}

TEST_CASE("swiss roll: n=4 noiseless points reproduce the parameterization of the sampled (t, h)") {
  SwissRollSpec spec;
  spec.n_points = 4;
  spec.noise_sd = 0;
  spec.seed = 3;
  auto data = gen_swiss_roll(spec);

  // Replay the documented draw order of the "dataset" stream.
  Rng rng = Rng::stream(spec.seed, "dataset");
  for (Index i = 0; i < 4; ++i) {
    const double t = rng.uniform(spec.t_min, spec.t_max);
    const double h = rng.uniform(0.0, spec.height);
    rng.normal();
    rng.normal();
    rng.normal();
    CHECK(data.points(i, 0) == t * std::cos(t));
    CHECK(data.points(i, 1) == h);
    CHECK(data.points(i, 2) == t * std::sin(t));
  }
}

TEST_CASE("swiss roll: determinism and noise-independent labelings") {
  SwissRollSpec spec;
  spec.n_points = 300;
  spec.labeling = SwissRollLabeling::two_class_patches;
  spec.seed = 5;

  auto a = gen_swiss_roll(spec);
  auto b = gen_swiss_roll(spec);
  CHECK(testing::exact_equal(a.points, b.points));
  CHECK(a.labels == b.labels);

  spec.noise_sd = 0.3;
  auto noisy = gen_swiss_roll(spec);
  CHECK(noisy.labels == a.labels);  // patches depend on (t, h) only
  CHECK(!testing::exact_equal(noisy.points, a.points));

  spec.labeling = SwissRollLabeling::three_class_bands;
  spec.noise_sd = 0;
  auto bands0 = gen_swiss_roll(spec);
  spec.noise_sd = 0.7;
  auto bands1 = gen_swiss_roll(spec);
  CHECK(bands0.labels == bands1.labels);
}

TEST_CASE("swiss roll: two_class_patches gives two interleaved classes") {
  SwissRollSpec spec;
  spec.n_points = 1500;
  spec.labeling = SwissRollLabeling::two_class_patches;
  spec.seed = 1;
  auto data = gen_swiss_roll(spec);
  CHECK(data.num_classes() == 2);
  int c0 = 0;
  for (int l : data.labels) c0 += l == 0;
  CHECK(c0 > 100);
  CHECK(c0 < 1400);

  // Not linearly separable in the ambient 3-D space: a linear probe trained
  // to optimality stays far from perfect accuracy.
  const double acc3d = testing::linear_train_accuracy(data.points, data.labels);
  CHECK(acc3d < 0.95);

  // Nor after plain unfolding to the (arc-length, height) plane.
  Eigen::MatrixXd unrolled(data.num_points(), 2);
  for (Index i = 0; i < data.num_points(); ++i) {
    const double t = std::hypot(data.points(i, 0), data.points(i, 2));
    unrolled(i, 0) = swiss_roll_arc_length(t, spec.t_min);
    unrolled(i, 1) = data.points(i, 1);
  }
  const double acc2d = testing::linear_train_accuracy(unrolled, data.labels);
  CHECK(acc2d < 0.95);
}

TEST_CASE("swiss roll: three_class_random histogram is near-uniform (multinomial bound)") {
  SwissRollSpec spec;
  spec.n_points = 1000;
  spec.labeling = SwissRollLabeling::three_class_random;
  spec.seed = 7;
  auto data = gen_swiss_roll(spec);
  CHECK(data.num_classes() == 3);
  int counts[3] = {0, 0, 0};
  for (int l : data.labels) ++counts[l];
  // 3 sigma of Binomial(1000, 1/3): 3 * sqrt(1000 * (1/3) * (2/3)) = 44.72.
  const double expected = 1000.0 / 3.0;
  const double band = 3 * std::sqrt(1000.0 * (1.0 / 3.0) * (2.0 / 3.0));
  for (int c = 0; c < 3; ++c) CHECK(std::abs(counts[c] - expected) <= band);
}

TEST_CASE("swiss roll: invalid specs name the offending field") {
  SwissRollSpec spec;
  spec.n_points = 3;
  CHECK_THROWS_WITH_AS(gen_swiss_roll(spec), doctest::Contains("n_points"), std::invalid_argument);
  spec.n_points = 10;
  spec.t_min = 0;
  CHECK_THROWS_WITH_AS(gen_swiss_roll(spec), doctest::Contains("t_range"), std::invalid_argument);
  spec.t_min = 2;
  spec.t_max = 1;
  CHECK_THROWS_WITH_AS(gen_swiss_roll(spec), doctest::Contains("t_range"), std::invalid_argument);
  spec.t_max = 10;
  spec.height = 0;
  CHECK_THROWS_WITH_AS(gen_swiss_roll(spec), doctest::Contains("height"), std::invalid_argument);
  spec.height = 5;
  spec.noise_sd = -1;
  CHECK_THROWS_WITH_AS(gen_swiss_roll(spec), doctest::Contains("noise_sd"), std::invalid_argument);
}

TEST_CASE("csv: labeled round trip is exact") {
  Dataset d;
  d.points.resize(3, 2);
  d.points << 1.0, 2.5, -0.125, 1e-17, 3.333333333333333, 7.0;
  d.labels = {0, kUnlabeled, 1};
  d.ids = default_ids<double>(3);

  const auto path = tmp_file("roundtrip.csv");
  save_csv(d, path.string());
  auto back = load_csv(path.string(), /*labeled=*/true);
  CHECK(testing::exact_equal(back.points, d.points));
  CHECK(back.labels == d.labels);
  std::filesystem::remove(path);
}

TEST_CASE("csv: trailing empty label field means unlabeled") {
  const auto path = tmp_file("trailing.csv");
  {
    std::ofstream out(path);
    out << "1.0,2.0,\n3.0,4.0,0\n";
  }
  auto d = load_csv(path.string(), true);
  CHECK(d.labels == std::vector<int>{kUnlabeled, 0});
  CHECK(d.points(0, 0) == 1.0);
  CHECK(d.points(1, 1) == 4.0);
  std::filesystem::remove(path);
}

TEST_CASE("csv: parse errors cite the row") {
  const auto path = tmp_file("bad.csv");
  {
    std::ofstream out(path);
    out << "1.0,x\n";
  }
  CHECK_THROWS_WITH_AS(load_csv(path.string(), false), doctest::Contains("row 1"), IoError);

  {
    std::ofstream out(path);
    out << "1.0,2.0\n1.0\n";
  }
  CHECK_THROWS_WITH_AS(load_csv(path.string(), false), doctest::Contains("row 2"), IoError);

  {
    std::ofstream out(path);
    out << "1.0,2.0,-3\n";
  }
  CHECK_THROWS_WITH_AS(load_csv(path.string(), true), doctest::Contains("negative"), IoError);

  CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv", false), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("split_train_test: mask sizes, determinism, bit-exact points") {
  SwissRollSpec spec;
  spec.n_points = 1000;
  spec.labeling = SwissRollLabeling::three_class_random;
  spec.seed = 2;
  auto data = gen_swiss_roll(spec);

  auto split = split_train_test(data, 50, 9);
  Index labeled = 0, unlabeled = 0;
  for (int l : split.data.labels) (l == kUnlabeled ? unlabeled : labeled)++;
  CHECK(labeled == 50);
  CHECK(unlabeled == 950);
  CHECK(testing::exact_equal(split.data.points, data.points));
  CHECK(split.truth == data.labels);

  auto split2 = split_train_test(data, 50, 9);
  CHECK(split2.data.labels == split.data.labels);

  auto edge = split_train_test(data, data.num_points() - 1, 1);
  Index un = 0;
  for (int l : edge.data.labels) un += l == kUnlabeled;
  CHECK(un == 1);

  CHECK_THROWS_AS(split_train_test(data, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_train_test(data, data.num_points(), 1), std::invalid_argument);
  CHECK_THROWS_AS(split_train_test(split.data, 10, 1), std::invalid_argument);  // not fully labeled
}

TEST_CASE("dataset validation") {
  Dataset d;
  d.points.resize(2, 2);
  d.points.setZero();
  d.ids = {0, 1};
  CHECK_NOTHROW(validate(d));

  d.labels = {0, 2};  // not contiguous
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
  d.labels = {0, 1};
  CHECK_NOTHROW(validate(d));
  d.ids = {0, 0};
  CHECK_THROWS_AS(validate(d), std::invalid_argument);
}
