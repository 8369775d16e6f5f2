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

#include <string>
#include <vector>

#include "ism/graph.hpp"
#include "ism/types.hpp"

namespace ism {

/// mvu maximizes the total squared distance from the origin (trace of RR^T);
/// mfnu maximizes the total squared distance between furthest-neighbor pairs
/// and is translation invariant.
enum class ObjectiveKind { mvu, mfnu };

inline const char* to_string(ObjectiveKind k) { return k == ObjectiveKind::mvu ? "mvu" : "mfnu"; }

/// Unfolding objective; mfnu carries the furthest pair of every point.
struct Objective {
  ObjectiveKind kind = ObjectiveKind::mfnu;
  std::vector<Index> furthest;  // f(i) for mfnu; empty for mvu
};

template <typename Scalar>
Objective make_objective(ObjectiveKind kind, const NeighborGraphT<Scalar>& graph) {
  Objective obj;
  obj.kind = kind;
  if (kind == ObjectiveKind::mfnu) {
    obj.furthest.reserve(graph.furthest.size());
    for (const auto& p : graph.furthest) obj.furthest.push_back(p.j);
  }
  return obj;
}

template <typename Scalar>
void check_objective(const Objective& obj, const Matrix<Scalar>& R) {
  if (obj.kind == ObjectiveKind::mfnu && static_cast<Index>(obj.furthest.size()) != R.rows())
    throw std::invalid_argument("objective: mfnu requires exactly N furthest pairs");
}

/// Value of the (maximized) objective at R.
template <typename Scalar>
Scalar objective_value(const Matrix<Scalar>& R, const Objective& obj) {
  check_objective(obj, R);
  if (obj.kind == ObjectiveKind::mvu) return R.squaredNorm();
  Scalar v = 0;
  for (Index i = 0; i < R.rows(); ++i)
    v += (R.row(i) - R.row(obj.furthest[static_cast<std::size_t>(i)])).squaredNorm();
  return v;
}

/// Value and gradient of the objective. grad is resized and overwritten.
template <typename Scalar>
Scalar objective_value_grad(const Matrix<Scalar>& R, const Objective& obj, Matrix<Scalar>& grad) {
  check_objective(obj, R);
  grad.resize(R.rows(), R.cols());
  if (obj.kind == ObjectiveKind::mvu) {
    grad = 2 * R;
    return R.squaredNorm();
  }
  grad.setZero();
  Scalar v = 0;
  for (Index i = 0; i < R.rows(); ++i) {
    const Index f = obj.furthest[static_cast<std::size_t>(i)];
    const auto diff = (R.row(i) - R.row(f)).eval();
    v += diff.squaredNorm();
    grad.row(i) += 2 * diff;
    grad.row(f) -= 2 * diff;
  }
  return v;
}

}  // namespace ism
