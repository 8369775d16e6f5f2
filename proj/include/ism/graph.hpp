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

#include <algorithm>
#include <vector>

#include "ism/dataset.hpp"
#include "ism/parallel.hpp"
#include "ism/types.hpp"

namespace ism {

/// Symmetrized k-NN edge with the target squared distance; i < j.
template <typename Scalar>
struct EdgeT {
  Index i, j;
  Scalar d;
};

/// Furthest point of i over the whole dataset, with its squared distance.
template <typename Scalar>
struct FurthestPairT {
  Index i, j;
  Scalar d;
};

/// k-NN structure of a dataset: deduplicated symmetric edges (sorted
/// lexicographically by (i, j)) plus one furthest-neighbor pair per point.
template <typename Scalar>
struct NeighborGraphT {
  std::vector<EdgeT<Scalar>> edges;
  std::vector<FurthestPairT<Scalar>> furthest;  // exactly N entries, furthest[i].i == i
  Index k = 0;
  Index num_points = 0;
};

using NeighborGraph = NeighborGraphT<double>;

/// Squared Euclidean distance between two coordinate vectors. Plain
/// sequential accumulation; algebraically equals G_ii + G_jj - 2 G_ij for the
/// Gram matrix G = X X^T.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar pairwise_sq_dist(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) {
  using Scalar = typename DerivedA::Scalar;
  if (x.size() != y.size()) throw std::invalid_argument("pairwise_sq_dist: dimension mismatch");
  Scalar s = 0;
  for (Index m = 0; m < x.size(); ++m) {
    const Scalar diff = x(m) - y(m);
    s += diff * diff;
  }
  return s;
}

/// Exact brute-force k-NN with symmetrized, deduplicated edges and exact
/// furthest pairs. Ties are broken by the smaller index, so the result does
/// not depend on evaluation order or thread count.
template <typename Scalar>
NeighborGraphT<Scalar> build_knn(const DatasetT<Scalar>& data, Index k, unsigned threads = 1) {
  const Index n = data.num_points();
  if (n < 2) throw std::invalid_argument("build_knn: need at least 2 points");
  if (k < 1 || k >= n) throw std::invalid_argument("build_knn: k out of range [1, N-1]");

  NeighborGraphT<Scalar> graph;
  graph.k = k;
  graph.num_points = n;
  graph.furthest.resize(static_cast<std::size_t>(n));

  // Per-row nearest lists; row i owns slots [i*k, (i+1)*k).
  std::vector<EdgeT<Scalar>> directed(static_cast<std::size_t>(n * k));

  parallel_for(n, threads, [&](Index begin, Index end) {
    std::vector<std::pair<Scalar, Index>> cand;
    for (Index i = begin; i < end; ++i) {
      cand.clear();
      cand.reserve(static_cast<std::size_t>(n - 1));
      Scalar far_d = -1;
      Index far_j = -1;
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const Scalar d = pairwise_sq_dist(data.points.row(i), data.points.row(j));
        cand.emplace_back(d, j);
        if (d > far_d || (d == far_d && j < far_j)) {
          far_d = d;
          far_j = j;
        }
      }
      std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
      for (Index t = 0; t < k; ++t) {
        const auto& [d, j] = cand[static_cast<std::size_t>(t)];
        directed[static_cast<std::size_t>(i * k + t)] = {std::min(i, j), std::max(i, j), d};
      }
      graph.furthest[static_cast<std::size_t>(i)] = {i, far_j, far_d};
    }
  });

  std::sort(directed.begin(), directed.end(),
            [](const EdgeT<Scalar>& a, const EdgeT<Scalar>& b) { return a.i < b.i || (a.i == b.i && a.j < b.j); });
  directed.erase(std::unique(directed.begin(), directed.end(),
                             [](const EdgeT<Scalar>& a, const EdgeT<Scalar>& b) { return a.i == b.i && a.j == b.j; }),
                 directed.end());
  graph.edges = std::move(directed);
  return graph;
}

/// Mean edge length (root of the squared targets); used to scale random
/// initializations.
template <typename Scalar>
Scalar mean_edge_length(const NeighborGraphT<Scalar>& graph) {
  if (graph.edges.empty()) return Scalar(1);
  Scalar s = 0;
  for (const auto& e : graph.edges) s += std::sqrt(e.d);
  return s / static_cast<Scalar>(graph.edges.size());
}

}  // namespace ism
