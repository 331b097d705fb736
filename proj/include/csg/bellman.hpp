// Bellman machinery: one-step local matrices, value-iteration sweeps
// (serial reference and OpenMP-parallel kernel), exact finite-horizon
// values, and Min-action classification against a value vector.
//
// The exact sweep solves every per-state matrix game in rational arithmetic;
// the double sweep uses the floating-point value kernel, since iteration only
// needs approximate values and exactness is re-established downstream by
// strategy extraction and certificates. Per-state solves are independent,
// which is what makes the sweep a data-parallel kernel.
#pragma once

#include <omp.h>

#include <cmath>
#include <vector>

#include "csg/game.hpp"
#include "csg/matrix_game.hpp"
#include "csg/strategy.hpp"

namespace csg {

enum class Objective { Reach, Avoid };

// Payoff matrix of the one-step game at s under the value vector v:
// entry (a, b) = sum_t p(s,a,b)(t) * v(t).
inline Matrix local_matrix(const Game& g, StateId s, const std::vector<Rat>& v) {
  Matrix m(g.num_max(s), g.num_min(s));
  for (ActionId a = 0; a < g.num_max(s); ++a)
    for (ActionId b = 0; b < g.num_min(s); ++b) {
      Rat& cell = m.at(a, b);
      for (const auto& [t, p] : g.p(s, a, b).entries) cell += p * v[t];
    }
  return m;
}

namespace detail {

inline Rat state_solve_exact(const Game& g, StateId s, const std::vector<Rat>& v) {
  if (g.is_sink_state(s)) return v[s];
  return solve_matrix_game(local_matrix(g, s, v)).value;
}

inline double state_solve_double(const Game& g, StateId s, const std::vector<double>& v) {
  if (g.is_sink_state(s)) return v[s];
  const int na = g.num_max(s), nb = g.num_min(s);
  std::vector<double> m(static_cast<std::size_t>(na) * nb, 0.0);
  for (ActionId a = 0; a < na; ++a)
    for (ActionId b = 0; b < nb; ++b) {
      double cell = 0;
      for (const auto& [t, p] : g.p(s, a, b).entries) cell += rat_to_double(p) * v[t];
      m[static_cast<std::size_t>(a) * nb + b] = cell;
    }
  return solve_matrix_value_double(m.data(), na, nb);
}

}  // namespace detail

// Serial reference sweep (exact vector).
inline std::vector<Rat> sweep_exact_serial(const Game& g, const std::vector<Rat>& v) {
  std::vector<Rat> out(v.size());
  for (StateId s = 0; s < g.num_states(); ++s) out[s] = detail::state_solve_exact(g, s, v);
  return out;
}

// OpenMP kernel (exact vector): per-state solves are independent, so the
// result is bit-identical to the serial reference.
inline std::vector<Rat> sweep_exact_parallel(const Game& g, const std::vector<Rat>& v) {
  std::vector<Rat> out(v.size());
  const int n = g.num_states();
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < n; ++s) out[s] = detail::state_solve_exact(g, s, v);
  return out;
}

// Serial reference sweep (double vector, floating-point value kernel).
inline std::vector<double> sweep_double_serial(const Game& g, const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (StateId s = 0; s < g.num_states(); ++s) out[s] = detail::state_solve_double(g, s, v);
  return out;
}

// OpenMP kernel (double vector).
inline std::vector<double> sweep_double_parallel(const Game& g, const std::vector<double>& v) {
  std::vector<double> out(v.size());
  const int n = g.num_states();
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < n; ++s) out[s] = detail::state_solve_double(g, s, v);
  return out;
}

inline std::vector<Rat> initial_vector_exact(const Game& g, Objective obj) {
  std::vector<Rat> v(g.num_states(), obj == Objective::Reach ? Rat(0) : Rat(1));
  v[g.top] = 1;
  v[g.bottom] = 0;
  return v;
}

inline std::vector<double> initial_vector_double(const Game& g, Objective obj) {
  std::vector<double> v(g.num_states(), obj == Objective::Reach ? 0.0 : 1.0);
  v[g.top] = 1.0;
  v[g.bottom] = 0.0;
  return v;
}

// Exact n-step values: val[0] = indicator of top, val[i+1](s) = value of the
// one-step game at s over val[i]. Reach within <= i steps.
inline std::vector<std::vector<Rat>> horizon_values(const Game& g, int n, bool parallel = false) {
  std::vector<std::vector<Rat>> vals;
  vals.reserve(n + 1);
  vals.push_back(initial_vector_exact(g, Objective::Reach));
  for (int i = 0; i < n; ++i)
    vals.push_back(parallel ? sweep_exact_parallel(g, vals.back())
                            : sweep_exact_serial(g, vals.back()));
  return vals;
}

struct IterationOptions {
  double tol = 1e-9;
  long max_iter = 1000000;
  bool parallel = false;
};

struct IterationOutcome {
  std::vector<double> v;
  long iterations = 0;
  double residual = 0;
  bool converged = false;
};

// Raw double-kernel value iteration, monotone from below (Reach) or above
// (Avoid). Stops when the sup-norm residual drops below tol.
inline IterationOutcome iterate_double(const Game& g, Objective obj,
                                       const IterationOptions& opt = {}) {
  IterationOutcome out;
  out.v = initial_vector_double(g, obj);
  for (out.iterations = 0; out.iterations < opt.max_iter; ++out.iterations) {
    std::vector<double> next =
        opt.parallel ? sweep_double_parallel(g, out.v) : sweep_double_serial(g, out.v);
    double res = 0;
    for (std::size_t i = 0; i < next.size(); ++i) res = std::max(res, std::fabs(next[i] - out.v[i]));
    out.v = std::move(next);
    out.residual = res;
    if (res < opt.tol) {
      ++out.iterations;
      out.converged = true;
      break;
    }
  }
  return out;
}

// Classification of Min's pure actions at s against a fixed Max mix and a
// value vector: preserving (payoff == v(s) within theta), increasing
// (payoff > v(s) + theta), decreasing (the rest). theta = 0 in exact mode.
struct MinActionClasses {
  std::vector<ActionId> preserving, increasing, decreasing;
};

inline MinActionClasses classify_min_actions(const Game& g, StateId s, const Distribution& alpha,
                                             const std::vector<Rat>& v, const Rat& theta = Rat(0)) {
  MinActionClasses out;
  for (ActionId b = 0; b < g.num_min(s); ++b) {
    Rat payoff(0);
    for (const auto& [a, pa] : alpha.entries)
      for (const auto& [t, p] : g.p(s, a, b).entries) payoff += pa * p * v[t];
    if (abs(payoff - v[s]) <= theta)
      out.preserving.push_back(b);
    else if (payoff > v[s] + theta)
      out.increasing.push_back(b);
    else
      out.decreasing.push_back(b);
  }
  return out;
}

// True when v is an exact fixpoint of the Bellman operator with the sink
// boundary conditions.
inline bool is_exact_fixpoint(const Game& g, const std::vector<Rat>& v) {
  if (v[g.top] != 1 || v[g.bottom] != 0) return false;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.is_sink_state(s)) continue;
    if (solve_matrix_game(local_matrix(g, s, v)).value != v[s]) return false;
  }
  return true;
}

}  // namespace csg
