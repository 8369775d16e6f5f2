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
#include <limits>

#include "ism/types.hpp"

namespace ism {

template <typename Scalar>
struct JacobiEigenResultT {
  Vector<Scalar> eigenvalues;   // descending
  Matrix<Scalar> eigenvectors;  // columns match eigenvalues
  int sweeps = 0;
};

/// Eigendecomposition of a small symmetric matrix by cyclic Jacobi sweeps.
/// Converges when the off-diagonal Frobenius norm drops below
/// rel_tol * trace(|A|); eigenpairs are returned sorted by descending
/// eigenvalue.
template <typename Scalar>
JacobiEigenResultT<Scalar> jacobi_eigen_sym(Matrix<Scalar> A, Scalar rel_tol = Scalar(1e-12), int max_sweeps = 50) {
  const Index n = A.rows();
  if (A.cols() != n) throw std::invalid_argument("jacobi_eigen_sym: matrix must be square");

  JacobiEigenResultT<Scalar> res;
  res.eigenvectors = Matrix<Scalar>::Identity(n, n);

  Scalar abs_trace = 0;
  for (Index i = 0; i < n; ++i) abs_trace += std::abs(A(i, i));
  const Scalar tol = rel_tol * std::max(abs_trace, std::numeric_limits<Scalar>::min());

  auto off_norm = [&A, n]() {
    Scalar s = 0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) s += 2 * A(p, q) * A(p, q);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_norm() <= tol) break;
    ++res.sweeps;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const Scalar apq = A(p, q);
        if (apq == Scalar(0)) continue;
        const Scalar theta = (A(q, q) - A(p, p)) / (2 * apq);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const Scalar c = Scalar(1) / std::sqrt(t * t + 1);
        const Scalar s = t * c;

        // A <- J^T A J for the (p, q) rotation.
        for (Index k = 0; k < n; ++k) {
          const Scalar akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const Scalar vkp = res.eigenvectors(k, p), vkq = res.eigenvectors(k, q);
          res.eigenvectors(k, p) = c * vkp - s * vkq;
          res.eigenvectors(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Sort descending, carrying the eigenvector columns along.
  res.eigenvalues.resize(n);
  for (Index i = 0; i < n; ++i) res.eigenvalues[i] = A(i, i);
  for (Index i = 0; i < n; ++i) {
    Index best = i;
    for (Index j = i + 1; j < n; ++j)
      if (res.eigenvalues[j] > res.eigenvalues[best]) best = j;
    if (best != i) {
      std::swap(res.eigenvalues[i], res.eigenvalues[best]);
      res.eigenvectors.col(i).swap(res.eigenvectors.col(best));
    }
  }
  return res;
}

}  // namespace ism
