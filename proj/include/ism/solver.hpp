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

#include <chrono>
#include <functional>

#include "ism/aug_lagrangian.hpp"
#include "ism/embed.hpp"
#include "ism/lbfgs.hpp"
#include "ism/rng.hpp"

namespace ism {

struct OuterIterationInfo {
  int outer = 0;
  double sigma = 0;
  double lagrangian = 0;
  double objective = 0;
  double eq_rrmse = 0;
  double sep_violation_rate = 0;
  int inner_iterations = 0;
  LbfgsStatus inner_status = LbfgsStatus::max_iterations;
};

using OuterCallback = std::function<void(const OuterIterationInfo&)>;

/// Initial factor matrix. random_gaussian scales entries by init_scale (auto:
/// mean k-NN edge length / sqrt(rank), stream "init" of the seed); input_pca
/// projects the centered input onto its top principal axes, with faint noise
/// in any surplus columns since exactly-zero columns are stationary under the
/// gradient flow.
template <typename Scalar>
Matrix<Scalar> init_factor(const DatasetT<Scalar>& data, const NeighborGraphT<Scalar>& graph,
                           const SolverConfig& cfg) {
  const Index n = data.num_points();
  Rng rng = Rng::stream(cfg.seed, "init");
  const Scalar auto_scale = static_cast<Scalar>(mean_edge_length(graph)) / std::sqrt(static_cast<Scalar>(cfg.rank));
  const Scalar scale = cfg.init_scale > 0 ? static_cast<Scalar>(cfg.init_scale) : auto_scale;

  Matrix<Scalar> R(n, cfg.rank);
  if (cfg.init == InitKind::random_gaussian) {
    for (Index i = 0; i < n; ++i)
      for (Index m = 0; m < cfg.rank; ++m) R(i, m) = scale * static_cast<Scalar>(rng.normal());
    return R;
  }

  if (data.dim() > kMaxSpectrumRank)
    throw std::invalid_argument("init_factor: input_pca supports at most 64 input dimensions");
  const Matrix<Scalar> centered = data.points.rowwise() - data.points.colwise().mean();
  auto eig = jacobi_eigen_sym<Scalar>(Matrix<Scalar>(centered.transpose() * centered));
  const Index lead = std::min(cfg.rank, data.dim());
  R.setZero();
  R.leftCols(lead) = centered * eig.eigenvectors.leftCols(lead);
  for (Index m = lead; m < cfg.rank; ++m)
    for (Index i = 0; i < n; ++i) R(i, m) = Scalar(1e-3) * scale * static_cast<Scalar>(rng.normal());
  return R;
}

/// Augmented-Lagrangian outer loop: repeat { minimize L with L-BFGS; update
/// multipliers lambda <- lambda - sigma h, mu <- max(0, mu - sigma g); grow
/// sigma when the aggregate constraint violation shrank by less than 4x }
/// until the isometry residuals meet feas_tol with no separation violations,
/// or max_outer is exhausted.
template <typename Scalar>
EmbeddingResultT<Scalar> outer_solve(const DatasetT<Scalar>& data, const NeighborGraphT<Scalar>& graph,
                                     const ConstraintSetT<Scalar>& constraints, ObjectiveKind kind,
                                     const SolverConfig& cfg, const OuterCallback& on_outer = {}) {
  validate(cfg);
  if (graph.num_points != data.num_points())
    throw std::invalid_argument("outer_solve: graph and dataset sizes differ");
  const auto t0 = std::chrono::steady_clock::now();

  const Index n = data.num_points();
  const Objective objective = make_objective(kind, graph);
  // Relative residual scaling: the penalty then acts on h_e / d_e, the same
  // quantity eq_rrmse measures, so conditioning does not depend on the spread
  // of the isometry targets.
  AugLagrangianT<Scalar> lagrangian(constraints, objective, n, cfg.center, cfg.threads,
                                    AugLagrangianT<Scalar>::relative_eq_scale(constraints));

  SolverStateT<Scalar> state;
  state.R = init_factor(data, graph, cfg);
  state.lambda_eq = Vector<Scalar>::Zero(lagrangian.num_eq());
  state.mu_ineq = Vector<Scalar>::Zero(lagrangian.num_sep());
  if (cfg.center) state.lambda_center = Vector<Scalar>::Zero(cfg.rank);

  // With zero multipliers the first subproblem behaves like a pure penalty
  // method; sigma must be large enough that the (scale-linear) objective
  // cannot stretch the configuration far off the constraint manifold before
  // the duals take over. The input configuration is feasible, so the
  // objective evaluated on the input geometry gives the scale of the duals:
  // lambda ~ obj_in / sum_e d_e, and sigma0 = C * obj_in / sum_e d_e^2 keeps
  // the first-round violations at a few percent of the targets.
  Scalar sigma0 = static_cast<Scalar>(cfg.sigma0);
  if (sigma0 <= 0) {
    Scalar obj_in;
    if (kind == ObjectiveKind::mfnu) {
      obj_in = 0;
      for (const auto& p : graph.furthest) obj_in += static_cast<Scalar>(p.d);
    } else {
      obj_in = (data.points.rowwise() - data.points.colwise().mean()).squaredNorm();
    }
    Scalar d_sq = 0;
    for (const auto& c : constraints.equalities) d_sq += c.target * c.target;
    sigma0 = std::clamp(10 * obj_in / std::max(d_sq, Scalar(1e-12)), Scalar(1e-8), Scalar(1e8));
  }
  state.sigma = sigma0;
  const Scalar sigma_cap = sigma0 * Scalar(1e12);

  LbfgsOptions inner_opts;
  inner_opts.memory = cfg.lbfgs_memory;
  inner_opts.max_iterations = cfg.max_inner;
  inner_opts.step_tol = 1e-11;
  const double grad_tol_final = cfg.grad_tol > 0 ? cfg.grad_tol : 1e-6 * static_cast<double>(n);

  // Inexact scheme: early subproblems are solved loosely and the tolerance
  // tightens after every dual update, which keeps the L-BFGS tail short where
  // it would crawl. Seeded from the gradient norm at the starting point.
  double omega = 0;
  {
    Matrix<Scalar> g0;
    lagrangian.value_grad(state.R, state.lambda_eq, state.mu_ineq, state.lambda_center, state.sigma, g0);
    omega = 1e-2 * static_cast<double>(g0.template lpNorm<Eigen::Infinity>());
  }

  SolveReport report;
  Matrix<Scalar> grad_scratch;
  Matrix<Scalar> r_scratch(n, cfg.rank);
  Scalar prev_infeas = std::numeric_limits<Scalar>::infinity();
  Scalar prev_objective = std::numeric_limits<Scalar>::quiet_NaN();

  for (int outer = 1; outer <= cfg.max_outer; ++outer) {
    inner_opts.grad_tol = std::max(grad_tol_final, omega);
    auto value_grad = [&](const Vector<Scalar>& x, Vector<Scalar>& g) -> Scalar {
      r_scratch = Eigen::Map<const Matrix<Scalar>>(x.data(), n, cfg.rank);
      const Scalar v = lagrangian.value_grad(r_scratch, state.lambda_eq, state.mu_ineq, state.lambda_center,
                                             state.sigma, grad_scratch);
      g = Eigen::Map<const Vector<Scalar>>(grad_scratch.data(), grad_scratch.size());
      return v;
    };

    Vector<Scalar> x0 = Eigen::Map<const Vector<Scalar>>(state.R.data(), state.R.size());
    auto inner = lbfgs_minimize<Scalar>(value_grad, std::move(x0), inner_opts);
    state.R = Eigen::Map<const Matrix<Scalar>>(inner.x.data(), n, cfg.rank);
    state.outer_iter = outer;
    state.inner_iters += inner.iterations;
    if (inner.status == LbfgsStatus::stalled) report.inner_stalled = true;

    if (!state.R.allFinite() || !std::isfinite(static_cast<double>(inner.value)))
      throw NumericalError("outer_solve: non-finite iterate at outer iteration " + std::to_string(outer));

    const auto metrics = feasibility_metrics(state.R, constraints);
    const Scalar obj_value = objective_value(state.R, objective);
    if (on_outer) {
      OuterIterationInfo info;
      info.outer = outer;
      info.sigma = static_cast<double>(state.sigma);
      info.lagrangian = static_cast<double>(inner.value);
      info.objective = static_cast<double>(obj_value);
      info.eq_rrmse = static_cast<double>(metrics.eq_rrmse);
      info.sep_violation_rate = static_cast<double>(metrics.sep_violation_rate);
      info.inner_iterations = inner.iterations;
      info.inner_status = inner.status;
      on_outer(info);
    }

    const bool feasible =
        metrics.eq_rrmse <= static_cast<Scalar>(cfg.feas_tol) && metrics.sep_violation_rate == Scalar(0);
    // First-order movement has ceased either when the inner solver reports it
    // or when the objective froze between outer rounds.
    const bool stationary = inner.status != LbfgsStatus::max_iterations ||
                            (std::isfinite(static_cast<double>(prev_objective)) &&
                             std::abs(obj_value - prev_objective) <=
                                 Scalar(1e-9) * std::max(Scalar(1), std::abs(obj_value)));
    prev_objective = obj_value;
    if (feasible && stationary) {
      report.converged = true;
      break;
    }

    // Dual updates are only meaningful at a stationary point of the
    // subproblem; when the inner run merely exhausted its budget, the next
    // round continues the same subproblem instead of updating multipliers
    // from a non-stationary iterate or stiffening a penalty it never solved.
    const bool subproblem_solved = inner.status != LbfgsStatus::max_iterations;
    if (subproblem_solved) {
      lagrangian.residuals(state.R);
      const auto& h = lagrangian.eq_residuals();
      const auto& g = lagrangian.sep_values();
      state.lambda_eq -= state.sigma * h;
      for (Index s = 0; s < g.size(); ++s)
        state.mu_ineq[s] = std::max(Scalar(0), state.mu_ineq[s] - state.sigma * g[s]);

      Scalar infeas_sq = h.squaredNorm();
      for (Index s = 0; s < g.size(); ++s) infeas_sq += std::min(Scalar(0), g[s]) * std::min(Scalar(0), g[s]);
      if (cfg.center) {
        state.lambda_center -= state.sigma * lagrangian.center_residual();
        infeas_sq += lagrangian.center_residual().squaredNorm();
      }
      const Scalar infeas = std::sqrt(infeas_sq);
      if (infeas > prev_infeas / 4 && state.sigma < sigma_cap)
        state.sigma *= static_cast<Scalar>(cfg.sigma_growth);
      prev_infeas = infeas;
      omega = std::max(grad_tol_final, omega * 0.5);
    }
  }

  const auto metrics = feasibility_metrics(state.R, constraints);
  report.objective = static_cast<double>(objective_value(state.R, objective));
  report.eq_rrmse = static_cast<double>(metrics.eq_rrmse);
  report.sep_violation_rate = static_cast<double>(metrics.sep_violation_rate);
  report.max_abs_residual = static_cast<double>(metrics.max_abs_residual);
  report.outer_iterations = state.outer_iter;
  report.inner_iterations = state.inner_iters;
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  EmbeddingResultT<Scalar> result;
  result.coords = std::move(state.R);
  if (cfg.rank <= kMaxSpectrumRank) {
    auto spec = pca_spectrum(result.coords);
    result.spectrum = std::move(spec.singular_values);
    result.energy = std::move(spec.energy);
  }
  result.report = report;
  return result;
}

}  // namespace ism
