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

#include <utility>
#include <vector>

#include "ism/constraints.hpp"
#include "ism/objective.hpp"
#include "ism/parallel.hpp"
#include "ism/solve_report.hpp"

namespace ism {

/// Augmented Lagrangian of the negated unfolding objective:
///
///   L = -obj(R) + sum_e [ -lambda_e h_e + (sigma/2) h_e^2 ]
///              + sum_s Phi(g_s, mu_s, sigma) + centering terms
///
/// with h_e the equality residuals, g_s the separation values and
/// Phi(g, mu, sigma) = (max(0, mu - sigma g)^2 - mu^2) / (2 sigma), the
/// clamped-multiplier form for inequalities.
///
/// An optional per-equality scaling replaces h_e by scale_e * h_e throughout
/// (residual, multiplier term and penalty). The solver uses 1/d_e so that the
/// penalty acts on relative residuals: isometry targets span several decades
/// and a uniform absolute penalty would have to over-stiffen the small edges
/// to reach a relative tolerance.
///
/// Evaluation is batched: residuals are filled constraint-parallel into fixed
/// slots, scalar reductions run sequentially, and the gradient is assembled
/// row-parallel from precomputed incidence lists with a fixed per-row term
/// order. Results are therefore identical for any thread count. Instances
/// hold scratch buffers and must not be shared across threads mid-solve.
template <typename Scalar>
class AugLagrangianT {
 public:
  AugLagrangianT(const ConstraintSetT<Scalar>& constraints, Objective objective, Index n_points, bool center,
                 unsigned threads = 1, Vector<Scalar> eq_scale = {})
      : cs_(constraints),
        obj_(std::move(objective)),
        n_(n_points),
        center_(center),
        threads_(resolve_threads(threads)),
        scale_(std::move(eq_scale)) {
    if (scale_.size() != 0 && scale_.size() != static_cast<Index>(cs_.equalities.size()))
      throw std::invalid_argument("aug_lagrangian: eq_scale size does not match the equality count");
    build_incidence();
    h_.resize(static_cast<Index>(cs_.equalities.size()));
    g_.resize(static_cast<Index>(cs_.separations.size()));
    w_eq_.resize(h_.size());
    w_sep_.resize(g_.size());
  }

  /// Relative scaling for a constraint set: 1/target per equality (absolute
  /// residual where the target is zero).
  static Vector<Scalar> relative_eq_scale(const ConstraintSetT<Scalar>& constraints) {
    Vector<Scalar> s(static_cast<Index>(constraints.equalities.size()));
    for (Index e = 0; e < s.size(); ++e) {
      const Scalar d = constraints.equalities[static_cast<std::size_t>(e)].target;
      s[e] = d != Scalar(0) ? 1 / d : Scalar(1);
    }
    return s;
  }

  Index num_eq() const { return h_.size(); }
  Index num_sep() const { return g_.size(); }
  bool centering() const { return center_; }

  /// Residuals of the last evaluate()/residuals() call.
  const Vector<Scalar>& eq_residuals() const { return h_; }
  const Vector<Scalar>& sep_values() const { return g_; }
  const Vector<Scalar>& center_residual() const { return c_; }

  /// Fill the (scaled) h, g and the centering residual at R without forming
  /// a gradient.
  void residuals(const Matrix<Scalar>& R) {
    const bool scaled = scale_.size() != 0;
    parallel_for(h_.size(), threads_, [&](Index b, Index e) {
      for (Index k = b; k < e; ++k) {
        const auto& c = cs_.equalities[static_cast<std::size_t>(k)];
        h_[k] = (R.row(c.i) - R.row(c.j)).squaredNorm() - c.target;
        if (scaled) h_[k] *= scale_[k];
      }
    });
    parallel_for(g_.size(), threads_, [&](Index b, Index e) {
      for (Index k = b; k < e; ++k) {
        const auto& c = cs_.separations[static_cast<std::size_t>(k)];
        g_[k] = static_cast<Scalar>(c.sign) * R.row(c.anchor).dot(R.row(c.i)) - c.margin;
      }
    });
    if (center_) c_ = R.colwise().sum().transpose();
  }

  /// L and dL/dR for the given multipliers and penalty. grad is resized.
  Scalar value_grad(const Matrix<Scalar>& R, const Vector<Scalar>& lambda_eq, const Vector<Scalar>& mu_ineq,
                    const Vector<Scalar>& lambda_center, Scalar sigma, Matrix<Scalar>& grad) {
    residuals(R);

    // Chain factors: dL/d(h_e) and dL/dg_s; the equality factor carries the
    // residual scaling since grad(scale * h) = scale * grad(h).
    const bool scaled = scale_.size() != 0;
    for (Index e = 0; e < h_.size(); ++e)
      w_eq_[e] = (-lambda_eq[e] + sigma * h_[e]) * (scaled ? scale_[e] : Scalar(1));
    for (Index s = 0; s < g_.size(); ++s) w_sep_[s] = -std::max(Scalar(0), mu_ineq[s] - sigma * g_[s]);

    Scalar value = -objective_value(R, obj_);
    for (Index e = 0; e < h_.size(); ++e) value += -lambda_eq[e] * h_[e] + sigma / 2 * h_[e] * h_[e];
    for (Index s = 0; s < g_.size(); ++s) {
      const Scalar active = std::max(Scalar(0), mu_ineq[s] - sigma * g_[s]);
      value += (active * active - mu_ineq[s] * mu_ineq[s]) / (2 * sigma);
    }

    grad.resize(n_, R.cols());
    Vector<Scalar> center_term;
    if (center_) {
      value += -lambda_center.dot(c_) + sigma / 2 * c_.squaredNorm();
      center_term = -lambda_center + sigma * c_;
    }

    parallel_for(n_, threads_, [&](Index b, Index e) {
      for (Index i = b; i < e; ++i) assemble_row(R, i, center_term, grad);
    });
    return value;
  }

 private:
  // Row-incidence entries; orientation +1 when the row is the constraint's
  // first/anchor slot.
  struct EqRef {
    Index e;
    Scalar orient;
  };
  struct SepRef {
    Index s;
    Index other;  // the opposite endpoint (anchor or point)
  };

  void build_incidence() {
    eq_inc_.assign(static_cast<std::size_t>(n_), {});
    sep_inc_.assign(static_cast<std::size_t>(n_), {});
    for (Index e = 0; e < static_cast<Index>(cs_.equalities.size()); ++e) {
      const auto& c = cs_.equalities[static_cast<std::size_t>(e)];
      eq_inc_[static_cast<std::size_t>(c.i)].push_back({e, Scalar(1)});
      eq_inc_[static_cast<std::size_t>(c.j)].push_back({e, Scalar(-1)});
    }
    for (Index s = 0; s < static_cast<Index>(cs_.separations.size()); ++s) {
      const auto& c = cs_.separations[static_cast<std::size_t>(s)];
      sep_inc_[static_cast<std::size_t>(c.anchor)].push_back({s, c.i});
      sep_inc_[static_cast<std::size_t>(c.i)].push_back({s, c.anchor});
    }
    if (obj_.kind == ObjectiveKind::mfnu) {
      inv_furthest_.assign(static_cast<std::size_t>(n_), {});
      for (Index i = 0; i < static_cast<Index>(obj_.furthest.size()); ++i)
        inv_furthest_[static_cast<std::size_t>(obj_.furthest[static_cast<std::size_t>(i)])].push_back(i);
    }
  }

  void assemble_row(const Matrix<Scalar>& R, Index i, const Vector<Scalar>& center_term,
                    Matrix<Scalar>& grad) const {
    auto row = grad.row(i);
    // Negated objective gradient.
    if (obj_.kind == ObjectiveKind::mvu) {
      row = -2 * R.row(i);
    } else {
      row = -2 * (R.row(i) - R.row(obj_.furthest[static_cast<std::size_t>(i)]));
      for (Index j : inv_furthest_[static_cast<std::size_t>(i)]) row -= 2 * (R.row(i) - R.row(j));
    }
    for (const auto& ref : eq_inc_[static_cast<std::size_t>(i)]) {
      const auto& c = cs_.equalities[static_cast<std::size_t>(ref.e)];
      row += (w_eq_[ref.e] * ref.orient * 2) * (R.row(c.i) - R.row(c.j));
    }
    for (const auto& ref : sep_inc_[static_cast<std::size_t>(i)]) {
      const auto& c = cs_.separations[static_cast<std::size_t>(ref.s)];
      row += (w_sep_[ref.s] * static_cast<Scalar>(c.sign)) * R.row(ref.other);
    }
    if (center_) row += center_term.transpose();
  }

  const ConstraintSetT<Scalar>& cs_;
  Objective obj_;
  Index n_;
  bool center_;
  unsigned threads_;

  std::vector<std::vector<EqRef>> eq_inc_;
  std::vector<std::vector<SepRef>> sep_inc_;
  std::vector<std::vector<Index>> inv_furthest_;

  Vector<Scalar> h_, g_, c_;
  Vector<Scalar> w_eq_, w_sep_;
  Vector<Scalar> scale_;
};

/// One-shot evaluation of the augmented Lagrangian at a solver state.
/// Convenience for tests and diagnostics; solves keep a persistent evaluator.
template <typename Scalar>
std::pair<Scalar, Matrix<Scalar>> aug_lagrangian_value_grad(const SolverStateT<Scalar>& state,
                                                            const ConstraintSetT<Scalar>& constraints,
                                                            const Objective& objective) {
  if (state.lambda_eq.size() != static_cast<Index>(constraints.equalities.size()) ||
      state.mu_ineq.size() != static_cast<Index>(constraints.separations.size()))
    throw std::invalid_argument("aug_lagrangian: multiplier sizes do not match the constraint set");
  const bool center = state.lambda_center.size() > 0;
  if (center && state.lambda_center.size() != state.R.cols())
    throw std::invalid_argument("aug_lagrangian: centering multiplier size does not match rank");
  AugLagrangianT<Scalar> eval(constraints, objective, state.R.rows(), center);
  Matrix<Scalar> grad;
  const Scalar value = eval.value_grad(state.R, state.lambda_eq, state.mu_ineq, state.lambda_center, state.sigma, grad);
  return {value, std::move(grad)};
}

}  // namespace ism
