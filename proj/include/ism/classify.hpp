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

#include "ism/constraints.hpp"
#include "ism/types.hpp"

namespace ism {

/// Transductive predictions read off the embedding. decision(i, c) holds the
/// per-class decision values; labels are the argmax with ties broken by the
/// lowest class id. A point abstains when every decision value is zero (the
/// fallback label 0 keeps scoring total).
template <typename Scalar>
struct PredictionT {
  std::vector<int> labels;
  Matrix<Scalar> decision;          // N x C
  std::vector<std::uint8_t> abstained;
};

using Prediction = PredictionT<double>;

/// Classify every embedded point from the anchor dot products. The binary
/// case is the sign rule of the single class-0 hyperplane (decision values
/// are +g and -g); with three or more classes the rule is one-vs-rest argmax
/// over <r_{a_c}, r_i>.
template <typename Scalar>
PredictionT<Scalar> predict(const Matrix<Scalar>& R, const AnchorAssignment& anchors) {
  const Index num_classes = anchors.num_classes();
  if (num_classes < 1) throw std::invalid_argument("predict: no anchors");
  for (Index a : anchors.anchors)
    if (a < 0 || a >= R.rows()) throw std::invalid_argument("predict: anchor index out of range");

  const Index n = R.rows();
  PredictionT<Scalar> out;
  out.labels.resize(static_cast<std::size_t>(n));
  out.abstained.assign(static_cast<std::size_t>(n), 0);
  out.decision.resize(n, num_classes);

  if (num_classes == 2) {
    const Index a = anchors.anchors[0];
    for (Index i = 0; i < n; ++i) {
      const Scalar g = R.row(a).dot(R.row(i));
      out.decision(i, 0) = g;
      out.decision(i, 1) = -g;
    }
  } else {
    for (Index c = 0; c < num_classes; ++c) {
      const Index a = anchors.anchors[static_cast<std::size_t>(c)];
      for (Index i = 0; i < n; ++i) out.decision(i, c) = R.row(a).dot(R.row(i));
    }
  }

  for (Index i = 0; i < n; ++i) {
    Index best = 0;
    bool all_zero = true;
    for (Index c = 0; c < num_classes; ++c) {
      if (out.decision(i, c) != Scalar(0)) all_zero = false;
      if (out.decision(i, c) > out.decision(i, best)) best = c;
    }
    out.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    if (all_zero) out.abstained[static_cast<std::size_t>(i)] = 1;
  }
  return out;
}

/// Percent of correctly predicted points over the masked subset.
template <typename Scalar>
double score(const PredictionT<Scalar>& prediction, const std::vector<int>& truth,
             const std::vector<std::uint8_t>& eval_mask) {
  const std::size_t n = prediction.labels.size();
  if (truth.size() != n || eval_mask.size() != n)
    throw std::invalid_argument("score: size mismatch between prediction, truth and mask");
  long total = 0, correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!eval_mask[i]) continue;
    ++total;
    if (prediction.labels[i] == truth[i]) ++correct;
  }
  if (total == 0) throw std::invalid_argument("score: empty evaluation mask");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace ism
