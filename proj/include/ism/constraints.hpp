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

#include <vector>

#include "ism/dataset.hpp"
#include "ism/graph.hpp"
#include "ism/rng.hpp"

namespace ism {

/// Isometry constraint: ||r_i - r_j||^2 must equal the input-space target.
template <typename Scalar>
struct EqualityConstraintT {
  Index i, j;
  Scalar target;  // squared distance in input space
};

/// Class-separation constraint: sign * <r_anchor, r_i> >= margin.
/// sign is +1 when i shares the anchor's class, -1 otherwise.
template <typename Scalar>
struct SeparationConstraintT {
  Index anchor, i;
  int sign;
  Scalar margin;
};

/// One anchor point per class; the embedded anchor acts as the normal of a
/// separating hyperplane through the origin.
struct AnchorAssignment {
  std::vector<Index> anchors;  // anchors[c] is a labeled point of class c
  Index num_classes() const { return static_cast<Index>(anchors.size()); }
};

enum class AnchorStrategy { first_labeled, random_labeled };

template <typename Scalar>
struct ConstraintSetT {
  std::vector<EqualityConstraintT<Scalar>> equalities;
  std::vector<SeparationConstraintT<Scalar>> separations;
  AnchorAssignment anchors;
};

using ConstraintSet = ConstraintSetT<double>;

/// Pick one labeled anchor per class. first_labeled takes the lowest index of
/// each class; random_labeled draws uniformly from the class (stream
/// "anchors" of seed).
template <typename Scalar>
AnchorAssignment select_anchors(const DatasetT<Scalar>& data, AnchorStrategy strategy, std::uint64_t seed = 0) {
  const int num_classes = data.num_classes();
  if (num_classes == 0) throw std::invalid_argument("select_anchors: dataset has no labeled points");

  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(num_classes));
  for (Index i = 0; i < data.num_points(); ++i) {
    const int l = data.label_of(i);
    if (l != kUnlabeled) by_class[static_cast<std::size_t>(l)].push_back(i);
  }

  AnchorAssignment out;
  out.anchors.resize(static_cast<std::size_t>(num_classes));
  Rng rng = Rng::stream(seed, "anchors");
  for (int c = 0; c < num_classes; ++c) {
    const auto& members = by_class[static_cast<std::size_t>(c)];
    if (members.empty())
      throw std::invalid_argument("select_anchors: class " + std::to_string(c) + " has no labeled point");
    out.anchors[static_cast<std::size_t>(c)] =
        strategy == AnchorStrategy::first_labeled
            ? members.front()
            : members[static_cast<std::size_t>(rng.uniform_int(members.size()))];
  }
  return out;
}

/// Assemble the full constraint set: one equality per symmetrized k-NN edge,
/// and signed separation constraints for the labeled points. The binary case
/// uses the single hyperplane of the class-0 anchor; with three or more
/// classes every class contributes a one-vs-rest hyperplane.
template <typename Scalar>
ConstraintSetT<Scalar> build_constraints(const NeighborGraphT<Scalar>& graph, const DatasetT<Scalar>& data,
                                         const AnchorAssignment& anchors, Scalar margin = 0) {
  if (graph.num_points != data.num_points())
    throw std::invalid_argument("build_constraints: graph and dataset sizes differ");
  if (margin < 0) throw std::invalid_argument("build_constraints: margin must be >= 0");
  for (Index c = 0; c < anchors.num_classes(); ++c) {
    const Index a = anchors.anchors[static_cast<std::size_t>(c)];
    if (a < 0 || a >= data.num_points() || data.label_of(a) != static_cast<int>(c))
      throw std::invalid_argument("build_constraints: anchor of class " + std::to_string(c) +
                                  " is not a labeled point of that class");
  }

  ConstraintSetT<Scalar> cs;
  cs.anchors = anchors;
  cs.equalities.reserve(graph.edges.size());
  for (const auto& e : graph.edges) cs.equalities.push_back({e.i, e.j, e.d});

  const Index num_classes = anchors.num_classes();
  const Index used_anchors = num_classes == 2 ? 1 : num_classes;
  for (Index c = 0; c < used_anchors; ++c) {
    const Index a = anchors.anchors[static_cast<std::size_t>(c)];
    for (Index i = 0; i < data.num_points(); ++i) {
      const int l = data.label_of(i);
      if (l == kUnlabeled || i == a) continue;
      cs.separations.push_back({a, i, l == static_cast<int>(c) ? +1 : -1, margin});
    }
  }
  return cs;
}

/// Equality residual h = ||r_i - r_j||^2 - target.
template <typename Scalar>
Scalar eq_residual(const Matrix<Scalar>& R, const EqualityConstraintT<Scalar>& c) {
  if (c.i < 0 || c.i >= R.rows() || c.j < 0 || c.j >= R.rows())
    throw std::invalid_argument("eq_residual: index out of range");
  return (R.row(c.i) - R.row(c.j)).squaredNorm() - c.target;
}

/// grad += weight * dh/dR. Only rows i and j are touched: 2(r_i - r_j) and
/// its negation.
template <typename Scalar>
void add_eq_residual_grad(const Matrix<Scalar>& R, const EqualityConstraintT<Scalar>& c, Scalar weight,
                          Matrix<Scalar>& grad) {
  const auto diff = (R.row(c.i) - R.row(c.j)).eval();
  grad.row(c.i) += weight * 2 * diff;
  grad.row(c.j) -= weight * 2 * diff;
}

/// Separation value g = sign * <r_a, r_i> - margin; the constraint is
/// satisfied iff g >= 0.
template <typename Scalar>
Scalar sep_value(const Matrix<Scalar>& R, const SeparationConstraintT<Scalar>& c) {
  if (c.anchor < 0 || c.anchor >= R.rows() || c.i < 0 || c.i >= R.rows())
    throw std::invalid_argument("sep_value: index out of range");
  return static_cast<Scalar>(c.sign) * R.row(c.anchor).dot(R.row(c.i)) - c.margin;
}

/// grad += weight * dg/dR: row a gets sign * r_i, row i gets sign * r_a.
template <typename Scalar>
void add_sep_value_grad(const Matrix<Scalar>& R, const SeparationConstraintT<Scalar>& c, Scalar weight,
                        Matrix<Scalar>& grad) {
  const Scalar w = weight * static_cast<Scalar>(c.sign);
  const auto ra = R.row(c.anchor).eval();
  grad.row(c.anchor) += w * R.row(c.i);
  grad.row(c.i) += w * ra;
}

}  // namespace ism
