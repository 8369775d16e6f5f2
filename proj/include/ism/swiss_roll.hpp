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

#pragma once

#include <cmath>
#include <string>

#include "ism/dataset.hpp"
#include "ism/rng.hpp"

namespace ism {

enum class SwissRollLabeling { none, two_class_patches, three_class_bands, three_class_random };

inline const char* to_string(SwissRollLabeling l) {
  switch (l) {
    case SwissRollLabeling::none: return "none";
    case SwissRollLabeling::two_class_patches: return "two_class_patches";
    case SwissRollLabeling::three_class_bands: return "three_class_bands";
    case SwissRollLabeling::three_class_random: return "three_class_random";
  }
  return "?";
}

/// Parameters for the synthetic swiss-roll generator. The surface is
/// (t cos t, h, t sin t) with t in [t_min, t_max], h in [0, height).
struct SwissRollSpec {
  Index n_points = 1500;
  double t_min = 1.5 * M_PI;
  double t_max = 4.5 * M_PI;
  double height = 20.0;
  double noise_sd = 0.0;
  SwissRollLabeling labeling = SwissRollLabeling::none;
  std::uint64_t seed = 0;
};

inline void validate(const SwissRollSpec& spec) {
  if (spec.n_points < 4) throw std::invalid_argument("swiss_roll: n_points must be >= 4");
  if (!(spec.t_min > 0)) throw std::invalid_argument("swiss_roll: t_range lower bound must be > 0");
  if (!(spec.t_max > spec.t_min)) throw std::invalid_argument("swiss_roll: t_range must be a nonempty interval");
  if (!(spec.height > 0)) throw std::invalid_argument("swiss_roll: height must be > 0");
  if (spec.noise_sd < 0) throw std::invalid_argument("swiss_roll: noise_sd must be >= 0");
}

/// Checkerboard patches over (t, h); depends on the surface coordinates only,
/// never on the noise realization.
inline int swiss_roll_patch_label(double t, double h, double height) {
  const long p = static_cast<long>(std::floor(t / M_PI));
  const long q = static_cast<long>(std::floor(2.0 * h / height));
  return static_cast<int>((p + q) % 2);
}

/// Three contiguous bands along the roll parameter.
inline int swiss_roll_band_label(double t, double t_min, double t_max) {
  int b = static_cast<int>(std::floor(3.0 * (t - t_min) / (t_max - t_min)));
  return std::min(2, std::max(0, b));
}

/// Sample a swiss roll. Per point the draw order is fixed (t, h, three noise
/// normals, then the random label when applicable), so results are fully
/// determined by spec.seed.
template <typename Scalar = double>
DatasetT<Scalar> gen_swiss_roll(const SwissRollSpec& spec) {
  validate(spec);
  Rng rng = Rng::stream(spec.seed, "dataset");

  const Index n = spec.n_points;
  DatasetT<Scalar> out;
  out.points.resize(n, 3);
  out.ids = default_ids<Scalar>(n);
  if (spec.labeling != SwissRollLabeling::none) out.labels.assign(static_cast<std::size_t>(n), kUnlabeled);

  for (Index i = 0; i < n; ++i) {
    const double t = rng.uniform(spec.t_min, spec.t_max);
    const double h = rng.uniform(0.0, spec.height);
    const double n0 = rng.normal();
    const double n1 = rng.normal();
    const double n2 = rng.normal();
    out.points(i, 0) = static_cast<Scalar>(t * std::cos(t) + spec.noise_sd * n0);
    out.points(i, 1) = static_cast<Scalar>(h + spec.noise_sd * n1);
    out.points(i, 2) = static_cast<Scalar>(t * std::sin(t) + spec.noise_sd * n2);

    switch (spec.labeling) {
      case SwissRollLabeling::none:
        break;
      case SwissRollLabeling::two_class_patches:
        out.labels[static_cast<std::size_t>(i)] = swiss_roll_patch_label(t, h, spec.height);
        break;
      case SwissRollLabeling::three_class_bands:
        out.labels[static_cast<std::size_t>(i)] = swiss_roll_band_label(t, spec.t_min, spec.t_max);
        break;
      case SwissRollLabeling::three_class_random:
        out.labels[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_int(3));
        break;
    }
  }
  return out;
}

/// Arc length of the spiral (t cos t, t sin t) from t_min to t, i.e. the
/// unrolled coordinate of a point. Closed form of the integral of
/// sqrt(1 + u^2).
inline double swiss_roll_arc_length(double t, double t_min) {
  auto primitive = [](double u) { return 0.5 * (u * std::sqrt(1.0 + u * u) + std::asinh(u)); };
  return primitive(t) - primitive(t_min);
}

}  // namespace ism
