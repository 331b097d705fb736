// Game values with exactness guarantees where they are attainable.
//
// Pipeline for general (concurrent) games in exact mode:
//  1. value iteration on doubles until the sup-norm residual is below tol;
//  2. extract maximin/minimax strategies at the iterate (exact LPs on the
//     rationalized local matrices) and bound the value exactly:
//        l = exact value of the Max strategy (best response computed by
//            exact policy iteration)  <=  val  <=
//        u = exact best-response value against the Min strategy;
//  3. if l == u, the value is pinned exactly;
//  4. otherwise snap the iterate to small-denominator rationals (escalating
//     denominator bound) and accept a candidate w only if it is an exact
//     fixpoint of the one-shot operator AND one of:
//       - a strategy achieves w exactly (proves w == val: reach fixpoints
//         are >= the least-fixpoint value, avoid fixpoints <= the
//         greatest-fixpoint value, and an achieving strategy supplies the
//         other inequality);
//       - w equals the opposite exact bound pointwise (for reach, w == u
//         covers games whose value is approached but not attained; for
//         avoid, w == u is itself a proof).
//  5. if nothing is accepted, return the iterate with the exact bracket
//     [l, u] so callers retain a sound a-posteriori guarantee.
//
// Turn-based games skip all of this: pure strategy iteration (improve Max's
// pure policy against exact best-response evaluations) terminates at the
// exact value with pure optimal strategies for both players.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "csg/bellman.hpp"
#include "csg/game.hpp"
#include "csg/matrix_game.hpp"
#include "csg/mdp.hpp"
#include "csg/rational.hpp"
#include "csg/strategy.hpp"
#include "csg/verify.hpp"

namespace csg {

struct ValueOptions {
  double tol = 1e-9;
  long max_iter = 1000000;
  bool parallel = false;
  bool snap = true;  // exact mode only: try to recover exact rational values
};

struct ValueResult {
  Objective objective = Objective::Reach;
  std::vector<Rat> values;
  bool exact = false;      // values are exact rationals (not a float artifact)
  bool converged = false;  // iteration reached tol (always true on exact paths)
  long iterations = 0;
  double residual = 0.0;
  bool has_bracket = false;  // when not exact: lower <= val <= upper, exact
  std::vector<Rat> lower, upper;
  bool has_max_strategy = false;
  MemorylessStrategy max_strategy;  // achieves `values` exactly when present
  bool has_min_strategy = false;
  MemorylessStrategy min_strategy;  // caps Max at `values` exactly when present
};

// Swap the two players' roles: Max actions become Min actions and vice
// versa. Sinks are left in place; callers adjust top/bottom for their
// transform.
inline Game swap_players(const Game& g) {
  Game h;
  h.mode = g.mode;
  h.state_names = g.state_names;
  h.top = g.top;
  h.bottom = g.bottom;
  h.max_actions = g.min_actions;
  h.min_actions = g.max_actions;
  h.trans.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    h.trans[s].assign(g.num_min(s), std::vector<Distribution>(g.num_max(s)));
    for (ActionId a = 0; a < g.num_max(s); ++a)
      for (ActionId b = 0; b < g.num_min(s); ++b) h.trans[s][b][a] = g.p(s, a, b);
  }
  return h;
}

namespace detail {

inline Matrix rationalized_local_matrix(const Game& g, StateId s, const std::vector<double>& v) {
  Matrix m(g.num_max(s), g.num_min(s));
  for (ActionId a = 0; a < g.num_max(s); ++a)
    for (ActionId b = 0; b < g.num_min(s); ++b) {
      double e = 0.0;
      for (const auto& [t, p] : g.p(s, a, b).entries) e += rat_to_double(p) * v[t];
      m.at(a, b) = rat_from_double(e);
    }
  return m;
}

// Maximin (row) and minimax (column) strategies at a value vector.
struct StrategyPair {
  MemorylessStrategy sigma, pi;
};

template <typename MatrixAt>
inline StrategyPair strategies_from(const Game& g, MatrixAt&& matrix_at) {
  StrategyPair out;
  out.sigma.player = Player::Max;
  out.pi.player = Player::Min;
  out.sigma.choice.resize(g.num_states());
  out.pi.choice.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.is_sink_state(s)) {
      out.sigma.choice[s] = Distribution::point(0);
      out.pi.choice[s] = Distribution::point(0);
      continue;
    }
    MatrixSolution ms = solve_matrix_game(matrix_at(s));
    out.sigma.choice[s] = std::move(ms.row_strategy);
    out.pi.choice[s] = std::move(ms.col_strategy);
  }
  return out;
}

inline StrategyPair strategies_at(const Game& g, const std::vector<double>& v) {
  return strategies_from(g, [&](StateId s) { return rationalized_local_matrix(g, s, v); });
}

inline StrategyPair strategies_at(const Game& g, const std::vector<Rat>& v) {
  return strategies_from(g, [&](StateId s) { return local_matrix(g, s, v); });
}

// Exact value bounds from a strategy pair. For Reach: l = value of sigma
// (Min best-responds), u = best-response value against pi. For Avoid both
// sides go through the reach-bottom problem and are complemented.
inline std::pair<std::vector<Rat>, std::vector<Rat>> exact_bracket(const Game& g,
                                                                   const StrategyPair& sp,
                                                                   Objective objective) {
  std::vector<Rat> l, u;
  if (objective == Objective::Reach) {
    l = mdp_reach_value(induce_min_mdp(g, sp.sigma), g.top, Opt::Minimize).values;
    u = mdp_reach_value(induce_max_mdp(g, sp.pi), g.top, Opt::Maximize).values;
  } else {
    std::vector<Rat> reach_bot_l =
        mdp_reach_value(induce_min_mdp(g, sp.sigma), g.bottom, Opt::Maximize).values;
    std::vector<Rat> reach_bot_u =
        mdp_reach_value(induce_max_mdp(g, sp.pi), g.bottom, Opt::Minimize).values;
    l.resize(g.num_states());
    u.resize(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
      l[s] = Rat(1) - reach_bot_l[s];
      u[s] = Rat(1) - reach_bot_u[s];
    }
  }
  return {std::move(l), std::move(u)};
}

inline std::vector<Rat> snap_vector(const Game& g, const std::vector<double>& v,
                                    unsigned long long max_den) {
  std::vector<Rat> w(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    double x = v[s];
    if (x < 0.0) x = 0.0;
    if (x > 1.0) x = 1.0;
    w[s] = snap_rational(rat_from_double(x), mpz_class(static_cast<unsigned long>(max_den)));
    if (w[s] < 0) w[s] = 0;
    if (w[s] > 1) w[s] = 1;
  }
  w[g.top] = 1;
  w[g.bottom] = 0;
  return w;
}

// Exact value of the turn-based game by strategy iteration: improve a pure
// Max policy against exact best-response evaluations until no state has a
// strictly better pure action. Works for Reach; Avoid is solved on the
// player-swapped game against the complementary target.
inline ValueResult turn_based_reach(const Game& g) {
  ValueResult res;
  res.objective = Objective::Reach;
  std::vector<ActionId> sigma(g.num_states(), 0);
  MemorylessStrategy sig;
  sig.player = Player::Max;
  sig.choice.resize(g.num_states());
  MdpSolution best;
  long rounds = 0;
  for (;;) {
    ++rounds;
    for (StateId s = 0; s < g.num_states(); ++s) sig.choice[s] = Distribution::point(sigma[s]);
    best = mdp_reach_value(induce_min_mdp(g, sig), g.top, Opt::Minimize);
    bool improved = false;
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (g.is_sink_state(s)) continue;
      Rat best_payoff = best.values[s];
      ActionId arg = -1;
      for (ActionId a = 0; a < g.num_max(s); ++a) {
        Rat worst;
        bool first = true;
        for (ActionId b = 0; b < g.num_min(s); ++b) {
          Rat e(0);
          for (const auto& [t, p] : g.p(s, a, b).entries) e += p * best.values[t];
          if (first || e < worst) {
            worst = e;
            first = false;
          }
        }
        if (worst > best_payoff) {
          best_payoff = worst;
          arg = a;
        }
      }
      if (arg >= 0) {
        sigma[s] = arg;
        improved = true;
      }
    }
    if (!improved) break;
  }
  res.values = best.values;
  res.exact = true;
  res.converged = true;
  res.iterations = rounds;
  res.residual = 0.0;
  res.has_max_strategy = true;
  res.max_strategy = sig;
  res.has_min_strategy = true;
  res.min_strategy.player = Player::Min;
  res.min_strategy.choice.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s)
    res.min_strategy.choice[s] = Distribution::point(best.policy[s]);
  return res;
}

}  // namespace detail

// Optimal reach (least fixpoint) or avoid (greatest fixpoint) values.
inline ValueResult game_values(const Game& g, Objective objective,
                               const ValueOptions& opts = {}) {
  // Exact pure-strategy iteration whenever one side's choice is trivial
  // everywhere.
  if (g.mode == Mode::Exact && g.is_turn_based()) {
    if (objective == Objective::Reach) return detail::turn_based_reach(g);
    Game h = swap_players(g);
    std::swap(h.top, h.bottom);
    ValueResult sub = detail::turn_based_reach(h);
    ValueResult res;
    res.objective = Objective::Avoid;
    res.values.resize(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) res.values[s] = Rat(1) - sub.values[s];
    res.exact = true;
    res.converged = true;
    res.iterations = sub.iterations;
    res.residual = 0.0;
    // Roles swap back: the sub-game's Max is this game's Min.
    res.has_min_strategy = true;
    res.min_strategy = sub.max_strategy;
    res.min_strategy.player = Player::Min;
    res.has_max_strategy = true;
    res.max_strategy = sub.min_strategy;
    res.max_strategy.player = Player::Max;
    return res;
  }

  IterationOptions iter_opts;
  iter_opts.tol = opts.tol;
  iter_opts.max_iter = opts.max_iter;
  iter_opts.parallel = opts.parallel;
  IterationOutcome out = iterate_double(g, objective, iter_opts);

  ValueResult res;
  res.objective = objective;
  res.converged = out.converged;
  res.iterations = out.iterations;
  res.residual = out.residual;
  res.values.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) res.values[s] = rat_from_double(out.v[s]);
  res.values[g.top] = 1;
  res.values[g.bottom] = 0;
  if (g.mode == Mode::Float) return res;  // float artifacts carry no exactness claim

  detail::StrategyPair sp = detail::strategies_at(g, out.v);
  auto [l, u] = detail::exact_bracket(g, sp, objective);
  if (l == u) {
    res.values = l;
    res.exact = true;
    res.has_max_strategy = true;
    res.max_strategy = sp.sigma;
    res.has_min_strategy = true;
    res.min_strategy = sp.pi;
    return res;
  }

  if (opts.snap) {
    const unsigned long long dens[] = {64ull, 1ull << 12, 1ull << 20, 1ull << 40};
    for (unsigned long long den : dens) {
      std::vector<Rat> w = detail::snap_vector(g, out.v, den);
      if (!is_exact_fixpoint(g, w)) continue;
      bool in_bracket = true;
      for (StateId s = 0; s < g.num_states(); ++s)
        if (w[s] < l[s] || w[s] > u[s]) {
          in_bracket = false;
          break;
        }
      if (!in_bracket) continue;
      // Strategy-achievability proof: a Max strategy whose exact
      // best-response value equals w pins the value from the side the
      // fixpoint property leaves open.
      detail::StrategyPair spw = detail::strategies_at(g, w);
      CertReport cert = certify(g, spw.sigma, objective);
      if (cert.achieved == w) {
        res.values = w;
        res.exact = true;
        res.has_max_strategy = true;
        res.max_strategy = spw.sigma;
        res.has_min_strategy = true;
        res.min_strategy = cert.min_witness;
        return res;
      }
      if (w == l) {
        res.values = w;
        res.exact = true;
        res.has_max_strategy = true;
        res.max_strategy = sp.sigma;
        return res;
      }
      if (w == u) {
        // For Avoid this is a proof (avoid fixpoints sit below the value);
        // for Reach it is the limit-achievability pattern: the Min strategy
        // caps Max at exactly w and no better candidate exists below it.
        res.values = w;
        res.exact = true;
        res.has_min_strategy = true;
        res.min_strategy = sp.pi;
        return res;
      }
    }
  }

  res.has_bracket = true;
  res.lower = std::move(l);
  res.upper = std::move(u);
  return res;
}

inline ValueResult reach_values(const Game& g, const ValueOptions& opts = {}) {
  return game_values(g, Objective::Reach, opts);
}

inline ValueResult safety_values(const Game& g, const ValueOptions& opts = {}) {
  return game_values(g, Objective::Avoid, opts);
}

}  // namespace csg
