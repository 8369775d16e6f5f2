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
#include <deque>
#include <limits>

#include "ism/types.hpp"

namespace ism {

struct LbfgsOptions {
  int memory = 10;          // history length m
  double grad_tol = 1e-8;   // terminate when ||grad||_inf <= grad_tol
  int max_iterations = 1000;
  double c1 = 1e-4;         // sufficient decrease
  double c2 = 0.9;          // curvature
  int max_bracket = 20;
  int max_zoom = 30;
  double step_tol = 0;      // also stop when ||dx||_inf <= step_tol * (1 + ||x||_inf); 0 = off
};

enum class LbfgsStatus { converged, max_iterations, stalled };

inline const char* to_string(LbfgsStatus s) {
  switch (s) {
    case LbfgsStatus::converged: return "converged";
    case LbfgsStatus::max_iterations: return "max_iterations";
    case LbfgsStatus::stalled: return "stalled";
  }
  return "?";
}

template <typename Scalar>
struct LbfgsResultT {
  Vector<Scalar> x;
  Scalar value = 0;
  Scalar grad_inf_norm = 0;
  int iterations = 0;
  int evaluations = 0;
  LbfgsStatus status = LbfgsStatus::max_iterations;
};

namespace detail {

template <typename Scalar>
struct WolfeResult {
  Scalar alpha = 0;
  Scalar value = 0;
  bool ok = false;
};

/// Strong Wolfe line search (bracket + zoom with cubic interpolation).
/// x_new/g_new are work vectors holding the last evaluated point; on success
/// they hold the accepted point. Non-finite trial values are treated as "step
/// too long".
template <typename Scalar, typename Fn>
WolfeResult<Scalar> wolfe_line_search(Fn& value_grad, const Vector<Scalar>& x, const Vector<Scalar>& d, Scalar f0,
                                      Scalar dphi0, Scalar alpha_init, const LbfgsOptions& opts, int& evals,
                                      Vector<Scalar>& x_new, Vector<Scalar>& g_new) {
  const Scalar c1 = static_cast<Scalar>(opts.c1);
  const Scalar c2 = static_cast<Scalar>(opts.c2);
  WolfeResult<Scalar> res;
  if (!(dphi0 < 0)) return res;  // not a descent direction

  auto eval = [&](Scalar a, Scalar& phi, Scalar& dphi) {
    x_new = x + a * d;
    phi = value_grad(x_new, g_new);
    ++evals;
    dphi = g_new.dot(d);
  };
  auto sufficient = [&](Scalar a, Scalar phi) { return phi <= f0 + c1 * a * dphi0; };

  // Zoom keeps [lo, hi] bracketing a strong-Wolfe point, with lo the best
  // sufficient-decrease point found so far.
  auto zoom = [&](Scalar lo, Scalar phi_lo, Scalar dphi_lo, Scalar hi, Scalar phi_hi, Scalar dphi_hi) {
    for (int z = 0; z < opts.max_zoom; ++z) {
      // Cubic interpolation; fall back to bisection when it misbehaves.
      Scalar a;
      {
        const Scalar d1 = dphi_lo + dphi_hi - 3 * (phi_lo - phi_hi) / (lo - hi);
        const Scalar rad = d1 * d1 - dphi_lo * dphi_hi;
        if (rad >= 0 && std::isfinite(phi_hi) && std::isfinite(dphi_hi)) {
          const Scalar d2 = (hi > lo ? Scalar(1) : Scalar(-1)) * std::sqrt(rad);
          a = hi - (hi - lo) * (dphi_hi + d2 - d1) / (dphi_hi - dphi_lo + 2 * d2);
        } else {
          a = (lo + hi) / 2;
        }
        const Scalar lo_guard = std::min(lo, hi) + Scalar(0.1) * std::abs(hi - lo);
        const Scalar hi_guard = std::max(lo, hi) - Scalar(0.1) * std::abs(hi - lo);
        if (!std::isfinite(a) || a < lo_guard || a > hi_guard) a = (lo + hi) / 2;
      }
      Scalar phi, dphi;
      eval(a, phi, dphi);
      if (!std::isfinite(phi) || !sufficient(a, phi) || phi >= phi_lo) {
        hi = a;
        phi_hi = phi;
        dphi_hi = dphi;
      } else {
        if (std::abs(dphi) <= -c2 * dphi0) {
          res.alpha = a;
          res.value = phi;
          res.ok = true;
          return;
        }
        if (dphi * (hi - lo) >= 0) {
          hi = lo;
          phi_hi = phi_lo;
          dphi_hi = dphi_lo;
        }
        lo = a;
        phi_lo = phi;
        dphi_lo = dphi;
      }
      if (std::abs(hi - lo) <= Scalar(1e-14) * std::max(Scalar(1), std::abs(lo))) break;
    }
    // Exhausted: settle for the best sufficient-decrease point if it made
    // real progress (the curvature pair is filtered by the y.s test anyway).
    if (lo > 0 && phi_lo < f0) {
      Scalar phi, dphi;
      eval(lo, phi, dphi);
      res.alpha = lo;
      res.value = phi;
      res.ok = true;
    }
  };

  Scalar a_prev = 0, phi_prev = f0, dphi_prev = dphi0;
  Scalar a = alpha_init;
  for (int it = 0; it < opts.max_bracket; ++it) {
    Scalar phi, dphi;
    eval(a, phi, dphi);
    if (!std::isfinite(phi) || !sufficient(a, phi) || (it > 0 && phi >= phi_prev)) {
      zoom(a_prev, phi_prev, dphi_prev, a, phi, dphi);
      return res;
    }
    if (std::abs(dphi) <= -c2 * dphi0) {
      res.alpha = a;
      res.value = phi;
      res.ok = true;
      return res;
    }
    if (dphi >= 0) {
      zoom(a, phi, dphi, a_prev, phi_prev, dphi_prev);
      return res;
    }
    a_prev = a;
    phi_prev = phi;
    dphi_prev = dphi;
    a *= 2;
  }
  return res;
}

}  // namespace detail

/// Limited-memory BFGS with two-loop recursion and a strong Wolfe line
/// search. value_grad has signature Scalar(const Vector<Scalar>& x,
/// Vector<Scalar>& grad). Terminates when ||grad||_inf <= grad_tol; returns
/// the best iterate seen. A line-search failure triggers one steepest-descent
/// restart before the result is flagged stalled.
template <typename Scalar, typename Fn>
LbfgsResultT<Scalar> lbfgs_minimize(Fn&& value_grad, Vector<Scalar> x0, const LbfgsOptions& opts = {}) {
  if (opts.memory < 1) throw std::invalid_argument("lbfgs: memory must be >= 1");
  const Index n = x0.size();
  LbfgsResultT<Scalar> res;

  Vector<Scalar> x = std::move(x0);
  Vector<Scalar> g(n), x_new(n), g_new(n);
  Scalar f = value_grad(x, g);
  ++res.evaluations;
  if (!std::isfinite(f)) throw NumericalError("lbfgs: objective is not finite at the starting point");

  res.x = x;
  res.value = f;
  res.grad_inf_norm = g.template lpNorm<Eigen::Infinity>();
  if (res.grad_inf_norm <= static_cast<Scalar>(opts.grad_tol)) {
    res.status = LbfgsStatus::converged;
    return res;
  }

  struct Pair {
    Vector<Scalar> s, y;
    Scalar rho;
  };
  std::deque<Pair> history;
  Vector<Scalar> d(n), q(n);
  std::vector<Scalar> alpha_buf(static_cast<std::size_t>(opts.memory));

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    // Two-loop recursion for d = -H g.
    q = g;
    const int h = static_cast<int>(history.size());
    for (int k = h - 1; k >= 0; --k) {
      const auto& p = history[static_cast<std::size_t>(k)];
      const Scalar a = p.rho * p.s.dot(q);
      alpha_buf[static_cast<std::size_t>(k)] = a;
      q -= a * p.y;
    }
    if (h > 0) {
      const auto& last = history.back();
      q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (int k = 0; k < h; ++k) {
      const auto& p = history[static_cast<std::size_t>(k)];
      const Scalar b = p.rho * p.y.dot(q);
      q += (alpha_buf[static_cast<std::size_t>(k)] - b) * p.s;
    }
    d = -q;

    Scalar dphi0 = d.dot(g);
    if (!(dphi0 < 0)) {
      history.clear();
      d = -g;
      dphi0 = -g.squaredNorm();
    }

    const Scalar alpha_init =
        h == 0 ? std::min(Scalar(1), Scalar(1) / std::max(Scalar(1e-12), g.norm())) : Scalar(1);
    auto ls = detail::wolfe_line_search(value_grad, x, d, f, dphi0, alpha_init, opts, res.evaluations, x_new, g_new);
    if (!ls.ok) {
      if (!history.empty()) {
        history.clear();
        d = -g;
        dphi0 = -g.squaredNorm();
        ls = detail::wolfe_line_search(value_grad, x, d, f, dphi0,
                                       std::min(Scalar(1), Scalar(1) / std::max(Scalar(1e-12), g.norm())), opts,
                                       res.evaluations, x_new, g_new);
      }
      if (!ls.ok) {
        res.status = LbfgsStatus::stalled;
        res.iterations = iter;
        return res;
      }
    }

    const Vector<Scalar> s = x_new - x;
    const Vector<Scalar> y = g_new - g;
    const Scalar sy = s.dot(y);
    if (sy > Scalar(1e-12) * s.norm() * y.norm()) {
      history.push_back({s, y, Scalar(1) / sy});
      if (static_cast<int>(history.size()) > opts.memory) history.pop_front();
    }

    const Scalar step_inf = s.template lpNorm<Eigen::Infinity>();
    x.swap(x_new);
    g.swap(g_new);
    f = ls.value;
    res.iterations = iter + 1;
    if (f < res.value) {
      res.value = f;
      res.x = x;
      res.grad_inf_norm = g.template lpNorm<Eigen::Infinity>();
    }
    const bool grad_done = g.template lpNorm<Eigen::Infinity>() <= static_cast<Scalar>(opts.grad_tol);
    const bool step_done = opts.step_tol > 0 && step_inf <= static_cast<Scalar>(opts.step_tol) *
                                                                (1 + x.template lpNorm<Eigen::Infinity>());
    if (grad_done || step_done) {
      res.value = f;
      res.x = x;
      res.grad_inf_norm = g.template lpNorm<Eigen::Infinity>();
      res.status = LbfgsStatus::converged;
      return res;
    }
  }
  res.status = LbfgsStatus::max_iterations;
  return res;
}

}  // namespace ism
