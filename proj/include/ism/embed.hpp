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

#include "ism/constraints.hpp"
#include "ism/jacobi.hpp"
#include "ism/solve_report.hpp"

namespace ism {

/// Embedding dimensions supported by the small-matrix spectrum machinery.
inline constexpr Index kMaxSpectrumRank = 64;

template <typename Scalar>
struct SpectrumT {
  Vector<Scalar> singular_values;  // descending
  Vector<Scalar> energy;           // cumulative fractions of squared singular values
};

template <typename Scalar>
struct FeasibilityMetricsT {
  Scalar eq_rrmse = 0;             // percent
  Scalar sep_violation_rate = 0;   // fraction in [0, 1]
  Scalar max_abs_residual = 0;     // max |h_e| over equalities
};

/// Final embedding plus diagnostics.
template <typename Scalar>
struct EmbeddingResultT {
  Matrix<Scalar> coords;           // N x rank
  Vector<Scalar> spectrum;         // singular values, descending
  Vector<Scalar> energy;           // cumulative energy fractions
  SolveReport report;
};

using EmbeddingResult = EmbeddingResultT<double>;

/// PCA (SVD) spectrum of the column-centered R: square roots of the
/// eigenvalues of centered(R)^T centered(R), via cyclic Jacobi. Centering
/// makes the spectrum translation independent.
template <typename Scalar>
SpectrumT<Scalar> pca_spectrum(const Matrix<Scalar>& R) {
  if (R.cols() > kMaxSpectrumRank)
    throw std::invalid_argument("pca_spectrum: rank exceeds the small-matrix cap of 64");
  if (!R.allFinite()) throw std::invalid_argument("pca_spectrum: non-finite entries");

  const Matrix<Scalar> centered = R.rowwise() - R.colwise().mean();
  const Matrix<Scalar> gram = centered.transpose() * centered;
  auto eig = jacobi_eigen_sym<Scalar>(gram);

  SpectrumT<Scalar> out;
  const Index d = R.cols();
  out.singular_values.resize(d);
  out.energy.resize(d);
  Scalar total = 0;
  for (Index i = 0; i < d; ++i) {
    const Scalar lambda = std::max(Scalar(0), eig.eigenvalues[i]);
    out.singular_values[i] = std::sqrt(lambda);
    total += lambda;
  }
  Scalar cum = 0;
  for (Index i = 0; i < d; ++i) {
    cum += out.singular_values[i] * out.singular_values[i];
    out.energy[i] = total > 0 ? cum / total : Scalar(0);
  }
  return out;
}

/// Feasibility of R against the constraint set. eq_rrmse is the relative RMS
/// equality residual in percent (absolute residual where the target distance
/// is zero). A separation counts as violated when its value drops below
/// -1e-9 * scale, where scale is the mean anchor norm times the mean point
/// norm.
template <typename Scalar>
FeasibilityMetricsT<Scalar> feasibility_metrics(const Matrix<Scalar>& R, const ConstraintSetT<Scalar>& constraints) {
  FeasibilityMetricsT<Scalar> m;

  if (!constraints.equalities.empty()) {
    Scalar sum_sq = 0;
    for (const auto& c : constraints.equalities) {
      const Scalar h = eq_residual(R, c);
      const Scalar rel = c.target != Scalar(0) ? h / c.target : h;
      sum_sq += rel * rel;
      m.max_abs_residual = std::max(m.max_abs_residual, std::abs(h));
    }
    m.eq_rrmse = 100 * std::sqrt(sum_sq / static_cast<Scalar>(constraints.equalities.size()));
  }

  if (!constraints.separations.empty()) {
    Scalar anchor_norm = 0;
    for (Index a : constraints.anchors.anchors) anchor_norm += R.row(a).norm();
    anchor_norm /= static_cast<Scalar>(constraints.anchors.anchors.size());
    const Scalar point_norm = R.rowwise().norm().mean();
    const Scalar tol = Scalar(1e-9) * anchor_norm * point_norm;

    Index violated = 0;
    for (const auto& c : constraints.separations)
      if (sep_value(R, c) < -tol) ++violated;
    m.sep_violation_rate = static_cast<Scalar>(violated) / static_cast<Scalar>(constraints.separations.size());
  }
  return m;
}

/// Rotate R onto its principal axes: R V with V the eigenvectors of the
/// centered Gram, columns ordered by decreasing variance. RR^T is unchanged.
template <typename Scalar>
Matrix<Scalar> align_to_principal_axes(const Matrix<Scalar>& R) {
  if (!R.allFinite()) throw std::invalid_argument("align_to_principal_axes: non-finite entries");
  const Matrix<Scalar> centered = R.rowwise() - R.colwise().mean();
  const Matrix<Scalar> gram = centered.transpose() * centered;
  auto eig = jacobi_eigen_sym<Scalar>(gram);
  return R * eig.eigenvectors;
}

}  // namespace ism
