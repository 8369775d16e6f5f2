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

#include <cstdint>
#include <string>

#include "ism/types.hpp"

namespace ism {

enum class InitKind { random_gaussian, input_pca };

inline const char* to_string(InitKind k) { return k == InitKind::random_gaussian ? "random_gaussian" : "input_pca"; }

struct SolverConfig {
  Index rank = 2;               // embedding dimension d'
  double sigma0 = 0.0;          // initial penalty; 0 = auto (balances the objective
                                // against the constraint violation at the start)
  double sigma_growth = 10.0;   // penalty growth factor
  double feas_tol = 0.1;        // target eq_rrmse, in percent
  double grad_tol = 0.0;        // inner ||grad||_inf tolerance; 0 = auto (1e-6 * N)
  int max_outer = 60;
  int max_inner = 5000;
  int lbfgs_memory = 10;
  InitKind init = InitKind::random_gaussian;
  double init_scale = 0.0;      // gaussian init scale; 0 = auto (mean k-NN distance / sqrt(rank))
  std::uint64_t seed = 0;
  bool center = false;          // penalized equality sum_i r_i = 0
  unsigned threads = 1;         // evaluation parallelism; 0 = all cores. Does not affect results.
};

inline void validate(const SolverConfig& cfg) {
  if (cfg.rank < 1) throw std::invalid_argument("solver config: rank must be >= 1");
  if (cfg.sigma0 < 0) throw std::invalid_argument("solver config: sigma0 must be > 0 (or 0 for auto)");
  if (!(cfg.sigma_growth > 1)) throw std::invalid_argument("solver config: sigma_growth must be > 1");
  if (!(cfg.feas_tol >= 0)) throw std::invalid_argument("solver config: feas_tol must be >= 0");
  if (cfg.grad_tol < 0) throw std::invalid_argument("solver config: grad_tol must be >= 0");
  if (cfg.max_outer < 1) throw std::invalid_argument("solver config: max_outer must be >= 1");
  if (cfg.max_inner < 1) throw std::invalid_argument("solver config: max_inner must be >= 1");
  if (cfg.lbfgs_memory < 1) throw std::invalid_argument("solver config: lbfgs_memory must be >= 1");
  if (cfg.init_scale < 0) throw std::invalid_argument("solver config: init_scale must be >= 0");
}

/// Factor matrix plus the dual state of the augmented Lagrangian.
template <typename Scalar>
struct SolverStateT {
  Matrix<Scalar> R;               // N x rank
  Vector<Scalar> lambda_eq;       // one multiplier per equality constraint
  Vector<Scalar> mu_ineq;         // one multiplier per separation constraint, >= 0
  Vector<Scalar> lambda_center;   // rank entries when centering is active, else empty
  Scalar sigma = 1;
  int outer_iter = 0;
  long inner_iters = 0;
};

using SolverState = SolverStateT<double>;

struct SolveReport {
  bool converged = false;
  double objective = 0;            // value of the maximized objective at the final R
  double eq_rrmse = 0;             // percent
  double sep_violation_rate = 0;   // fraction in [0, 1]
  double max_abs_residual = 0;     // max |h_e| over equality constraints
  int outer_iterations = 0;
  long inner_iterations = 0;
  double wall_time_seconds = 0;
  bool inner_stalled = false;      // an inner line search gave up at least once
};

}  // namespace ism
