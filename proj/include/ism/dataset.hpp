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

#include <numeric>
#include <set>
#include <vector>

#include "ism/rng.hpp"
#include "ism/types.hpp"

namespace ism {

/// A point cloud with optional per-point class labels.
///
/// `labels` is either empty (fully unlabeled dataset) or holds one entry per
/// point: a class id in {0..C-1} or kUnlabeled. Class ids of a valid dataset
/// are contiguous from 0.
template <typename Scalar>
struct DatasetT {
  Matrix<Scalar> points;               // N x d
  std::vector<int> labels;             // empty, or N entries
  std::vector<std::int64_t> ids;       // N unique row identifiers

  Index num_points() const { return points.rows(); }
  Index dim() const { return points.cols(); }
  bool has_labels() const { return !labels.empty(); }

  /// Count of distinct class ids present (0 when nothing is labeled).
  int num_classes() const {
    int c = 0;
    for (int l : labels)
      if (l != kUnlabeled && l + 1 > c) c = l + 1;
    return c;
  }

  int label_of(Index i) const { return labels.empty() ? kUnlabeled : labels[static_cast<std::size_t>(i)]; }
};

using Dataset = DatasetT<double>;

template <typename Scalar>
std::vector<std::int64_t> default_ids(Index n) {
  std::vector<std::int64_t> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

template <typename Scalar>
void validate(const DatasetT<Scalar>& data) {
  const Index n = data.num_points();
  if (n < 1 || data.dim() < 1) throw std::invalid_argument("dataset: need N >= 1 and d >= 1");
  if (!data.labels.empty() && static_cast<Index>(data.labels.size()) != n)
    throw std::invalid_argument("dataset: label count does not match point count");
  if (static_cast<Index>(data.ids.size()) != n)
    throw std::invalid_argument("dataset: id count does not match point count");
  std::set<std::int64_t> uniq(data.ids.begin(), data.ids.end());
  if (static_cast<Index>(uniq.size()) != n) throw std::invalid_argument("dataset: ids are not unique");

  // Class ids must be contiguous: every labeled id < count of distinct ids.
  std::set<int> classes;
  for (int l : data.labels) {
    if (l == kUnlabeled) continue;
    if (l < 0) throw std::invalid_argument("dataset: negative class id");
    classes.insert(l);
  }
  for (int l : classes)
    if (l >= static_cast<int>(classes.size()))
      throw std::invalid_argument("dataset: class ids are not contiguous from 0");
}

template <typename Scalar>
struct TrainTestSplitT {
  DatasetT<Scalar> data;     // points unchanged, labels kept on the train subset only
  std::vector<int> truth;    // original labels of every point, for scoring
};

/// Keep labels on a uniformly sampled subset of n_train points and mark the
/// rest unlabeled. The point matrix is carried over bit-exactly.
template <typename Scalar>
TrainTestSplitT<Scalar> split_train_test(const DatasetT<Scalar>& data, Index n_train, std::uint64_t seed) {
  const Index n = data.num_points();
  if (n_train <= 0 || n_train >= n) throw std::invalid_argument("split_train_test: n_train out of range");
  if (!data.has_labels()) throw std::invalid_argument("split_train_test: dataset has no labels");
  for (int l : data.labels)
    if (l == kUnlabeled) throw std::invalid_argument("split_train_test: dataset is not fully labeled");

  // Partial Fisher-Yates: the first n_train slots are a uniform subset.
  Rng rng = Rng::stream(seed, "split");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (Index t = 0; t < n_train; ++t) {
    const Index pick = t + static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(n - t)));
    std::swap(order[static_cast<std::size_t>(t)], order[static_cast<std::size_t>(pick)]);
  }

  TrainTestSplitT<Scalar> out;
  out.truth = data.labels;
  out.data = data;
  std::vector<char> keep(static_cast<std::size_t>(n), 0);
  for (Index t = 0; t < n_train; ++t) keep[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] = 1;
  for (Index i = 0; i < n; ++i)
    if (!keep[static_cast<std::size_t>(i)]) out.data.labels[static_cast<std::size_t>(i)] = kUnlabeled;
  return out;
}

}  // namespace ism
