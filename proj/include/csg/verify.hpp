// Certification and estimation for fixed strategies.
//
//  - build_chain / chain_absorption / absorption_profile: exact absorption
//    analysis of the finite Markov chain induced by a strategy pair.
//  - submartingale checks: the one-step certificate inequality
//    <p(s, ., .), v> >= v(s), either against every Min action (strategy
//    certificates) or along a fixed pair's chain.
//  - certify: exact guarantee for a Max strategy — its value against the
//    exact best response, plus a pure Min witness realizing that bound.
//  - simulate: seeded Monte-Carlo rollouts (memoryless or stage strategies
//    on both sides) with a 95% Wilson score interval.
//  - stage_worst_reach: exact worst-case reach value of a stage strategy
//    over a finite horizon by backward induction.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csg/bellman.hpp"
#include "csg/game.hpp"
#include "csg/graph.hpp"
#include "csg/linalg.hpp"
#include "csg/mdp.hpp"
#include "csg/prng.hpp"
#include "csg/strategy.hpp"

namespace csg {

// Markov chain rows under a fixed memoryless strategy pair.
inline std::vector<Distribution> build_chain(const Game& g, const MemorylessStrategy& sigma,
                                             const MemorylessStrategy& pi) {
  std::vector<Distribution> rows(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    Distribution row;
    for (const auto& [a, pa] : sigma.at(s).entries)
      for (const auto& [b, pb] : pi.at(s).entries)
        for (const auto& [t, p] : g.p(s, a, b).entries)
          row.entries.emplace_back(t, pa * pb * p);
    row.normalize_shape();
    rows[s] = std::move(row);
  }
  return rows;
}

namespace detail {

struct ChainClasses {
  SccResult scc;
  std::vector<bool> bottom_comp;  // per component: no edge leaves it
};

inline ChainClasses chain_classes(const std::vector<Distribution>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::vector<int>> adj(n);
  for (StateId s = 0; s < n; ++s)
    for (const auto& [t, p] : rows[s].entries) adj[s].push_back(t);
  ChainClasses cc;
  cc.scc = tarjan_scc(adj);
  cc.bottom_comp.assign(cc.scc.count, true);
  for (StateId s = 0; s < n; ++s)
    for (int t : adj[s])
      if (cc.scc.comp[t] != cc.scc.comp[s]) cc.bottom_comp[cc.scc.comp[s]] = false;
  return cc;
}

// Absorption probabilities into each recurrent (bottom) component, exactly.
// Returns per-state rows indexed by component id; transient states are
// solved by one multi-RHS linear system.
inline std::vector<std::vector<Rat>> class_absorption(const std::vector<Distribution>& rows,
                                                      const ChainClasses& cc) {
  const int n = static_cast<int>(rows.size());
  std::vector<std::vector<Rat>> prob(n, std::vector<Rat>(cc.scc.count, Rat(0)));
  std::vector<int> idx(n, -1);
  std::vector<StateId> transient;
  for (StateId s = 0; s < n; ++s) {
    if (cc.bottom_comp[cc.scc.comp[s]])
      prob[s][cc.scc.comp[s]] = 1;
    else {
      idx[s] = static_cast<int>(transient.size());
      transient.push_back(s);
    }
  }
  const int k = static_cast<int>(transient.size());
  if (k == 0) return prob;
  std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k, Rat(0)));
  std::vector<std::vector<Rat>> rhs;
  for (int c = 0; c < cc.scc.count; ++c)
    if (cc.bottom_comp[c]) rhs.emplace_back(k, Rat(0));
  std::vector<int> rhs_of_comp(cc.scc.count, -1);
  {
    int j = 0;
    for (int c = 0; c < cc.scc.count; ++c)
      if (cc.bottom_comp[c]) rhs_of_comp[c] = j++;
  }
  for (int i = 0; i < k; ++i) {
    a[i][i] = 1;
    for (const auto& [t, p] : rows[transient[i]].entries) {
      if (idx[t] >= 0)
        a[i][idx[t]] -= p;
      else
        rhs[rhs_of_comp[cc.scc.comp[t]]][i] += p;
    }
  }
  std::vector<std::vector<Rat>> sols = solve_linear_multi(std::move(a), std::move(rhs));
  for (int c = 0; c < cc.scc.count; ++c)
    if (rhs_of_comp[c] >= 0)
      for (int i = 0; i < k; ++i) prob[transient[i]][c] = sols[rhs_of_comp[c]][i];
  return prob;
}

}  // namespace detail

// Exact probability, per start state, that the chain is absorbed in a
// recurrent class contained entirely in `good`.
inline std::vector<Rat> chain_absorption(const std::vector<Distribution>& rows,
                                         const std::vector<bool>& good) {
  detail::ChainClasses cc = detail::chain_classes(rows);
  std::vector<bool> good_comp(cc.scc.count, true);
  for (StateId s = 0; s < static_cast<int>(rows.size()); ++s)
    if (!good[s]) good_comp[cc.scc.comp[s]] = false;
  std::vector<std::vector<Rat>> prob = detail::class_absorption(rows, cc);
  std::vector<Rat> result(rows.size(), Rat(0));
  for (StateId s = 0; s < static_cast<int>(rows.size()); ++s)
    for (int c = 0; c < cc.scc.count; ++c)
      if (cc.bottom_comp[c] && good_comp[c]) result[s] += prob[s][c];
  return result;
}

// Absorption split into top / bottom / every other recurrent class, with the
// non-sink recurrent classes listed explicitly.
struct AbsorptionProfile {
  std::vector<Rat> to_top, to_bottom, to_other;
  std::vector<std::vector<StateId>> other_classes;  // recurrent classes outside the sinks
};

inline AbsorptionProfile absorption_profile(const Game& g, const MemorylessStrategy& sigma,
                                            const MemorylessStrategy& pi) {
  std::vector<Distribution> rows = build_chain(g, sigma, pi);
  detail::ChainClasses cc = detail::chain_classes(rows);
  std::vector<std::vector<Rat>> prob = detail::class_absorption(rows, cc);
  AbsorptionProfile out;
  const int n = g.num_states();
  out.to_top.assign(n, Rat(0));
  out.to_bottom.assign(n, Rat(0));
  out.to_other.assign(n, Rat(0));
  std::vector<std::vector<StateId>> members(cc.scc.count);
  for (StateId s = 0; s < n; ++s) members[cc.scc.comp[s]].push_back(s);
  for (int c = 0; c < cc.scc.count; ++c) {
    if (!cc.bottom_comp[c]) continue;
    bool is_top = (cc.scc.comp[g.top] == c);
    bool is_bottom = (cc.scc.comp[g.bottom] == c);
    if (!is_top && !is_bottom) out.other_classes.push_back(members[c]);
    for (StateId s = 0; s < n; ++s) {
      if (is_top)
        out.to_top[s] += prob[s][c];
      else if (is_bottom)
        out.to_bottom[s] += prob[s][c];
      else
        out.to_other[s] += prob[s][c];
    }
  }
  return out;
}

// One-step certificate: under sigma, is v a submartingale against every Min
// action? Violations are reported as human-readable strings.
inline std::vector<std::string> submartingale_violations(const Game& g,
                                                         const MemorylessStrategy& sigma,
                                                         const std::vector<Rat>& v) {
  std::vector<std::string> out;
  for (StateId s = 0; s < g.num_states(); ++s) {
    for (ActionId b = 0; b < g.num_min(s); ++b) {
      Rat e(0);
      for (const auto& [a, pa] : sigma.at(s).entries)
        for (const auto& [t, p] : g.p(s, a, b).entries) e += pa * p * v[t];
      if (e < v[s])
        out.push_back("state " + g.state_names[s] + " action " + std::to_string(b) +
                      " payoff " + rat_to_string(e) + " < " + rat_to_string(v[s]));
    }
  }
  return out;
}

inline bool is_submartingale(const Game& g, const MemorylessStrategy& sigma,
                             const std::vector<Rat>& v) {
  return submartingale_violations(g, sigma, v).empty();
}

// Pair version along a fixed chain: <rows(s), v> >= v(s) everywhere.
inline bool is_chain_submartingale(const std::vector<Distribution>& rows,
                                   const std::vector<Rat>& v) {
  for (StateId s = 0; s < static_cast<int>(rows.size()); ++s) {
    Rat e(0);
    for (const auto& [t, p] : rows[s].entries) e += p * v[t];
    if (e < v[s]) return false;
  }
  return true;
}

// Exact guarantee of a fixed Max strategy.
struct CertReport {
  Objective objective = Objective::Reach;
  std::vector<Rat> achieved;          // exact value of sigma vs best response
  MemorylessStrategy min_witness;     // pure Min best response realizing it
  bool meets_targets = false;         // achieved >= target - slack wherever given
  std::vector<std::string> failures;  // states where the bound is missed
};

// Certify sigma against the exact best response. For Reach the adversary
// minimizes the probability of absorbing in top; for Avoid the adversary
// maximizes the probability of reaching bottom and achieved = 1 - that.
// targets lists per-state thresholds (states absent from the list are
// unconstrained); slack is subtracted from each target before comparison.
inline CertReport certify(const Game& g, const MemorylessStrategy& sigma, Objective objective,
                          const std::vector<std::pair<StateId, Rat>>& targets = {},
                          const Rat& slack = Rat(0)) {
  if (sigma.player != Player::Max)
    throw std::invalid_argument("certify expects a Max strategy");
  CertReport rep;
  rep.objective = objective;
  Mdp mdp = induce_min_mdp(g, sigma);
  MdpSolution best;
  if (objective == Objective::Reach) {
    best = mdp_reach_value(mdp, g.top, Opt::Minimize);
    rep.achieved = best.values;
  } else {
    best = mdp_reach_value(mdp, g.bottom, Opt::Maximize);
    rep.achieved.resize(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) rep.achieved[s] = Rat(1) - best.values[s];
  }
  rep.min_witness.player = Player::Min;
  rep.min_witness.choice.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s)
    rep.min_witness.choice[s] = Distribution::point(best.policy[s]);
  rep.meets_targets = true;
  for (const auto& [s, target] : targets) {
    if (s < 0 || s >= g.num_states()) throw std::invalid_argument("certify: unknown target state");
    if (rep.achieved[s] < target - slack) {
      rep.meets_targets = false;
      rep.failures.push_back("state " + g.state_names[s] + " achieved " +
                             rat_to_string(rep.achieved[s]) + " < target " +
                             rat_to_string(target - slack));
    }
  }
  return rep;
}

// Monte-Carlo estimate of P(reach top) / P(avoid bottom) under a strategy
// pair, from a start state. Runs are independent PRNG streams, so results
// are reproducible and order-independent.
struct SimulationResult {
  int runs = 0;
  int successes = 0;
  double estimate = 0.0;
  double wilson_low = 0.0, wilson_high = 1.0;  // 95% score interval
};

inline SimulationResult simulate(const Game& g, const StageStrategy& sigma,
                                 const StageStrategy& pi, Objective objective, StateId start,
                                 int runs, int horizon, std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
  SimulationResult res;
  res.runs = runs;
  for (int r = 0; r < runs; ++r) {
    Prng rng(seed, static_cast<std::uint64_t>(r));
    StateId s = start;
    for (int step = 0; step < horizon && !g.is_sink_state(s); ++step) {
      ActionId a = sigma.at(step, s).sample(rng.next_uniform_rat());
      ActionId b = pi.at(step, s).sample(rng.next_uniform_rat());
      s = g.p(s, a, b).sample(rng.next_uniform_rat());
    }
    bool success = (objective == Objective::Reach) ? (s == g.top) : (s != g.bottom);
    if (success) ++res.successes;
  }
  if (runs > 0) {
    const double z = 1.959963984540054;  // 97.5% normal quantile
    double nh = static_cast<double>(runs), ph = static_cast<double>(res.successes) / nh;
    res.estimate = ph;
    double denom = 1.0 + z * z / nh;
    double center = (ph + z * z / (2.0 * nh)) / denom;
    double half = (z / denom) * std::sqrt(ph * (1.0 - ph) / nh + z * z / (4.0 * nh * nh));
    res.wilson_low = std::max(0.0, center - half);
    res.wilson_high = std::min(1.0, center + half);
  }
  return res;
}

inline SimulationResult simulate(const Game& g, const MemorylessStrategy& sigma,
                                 const MemorylessStrategy& pi, Objective objective, StateId start,
                                 int runs, int horizon, std::uint64_t seed) {
  return simulate(g, as_stage_strategy(sigma), as_stage_strategy(pi), objective, start, runs,
                  horizon, seed);
}

// Exact worst-case reach-top value of a stage strategy played for `horizon`
// steps (the tail afterwards can only add probability, so this is a valid
// lower bound). Backward induction: u_0 = 1 on top, and u_{j+1}(s) =
// min_b <p(s, sigma.at(horizon-1-j, s), b), u_j>.
inline std::vector<Rat> stage_worst_reach(const Game& g, const StageStrategy& sigma,
                                          int horizon) {
  std::vector<Rat> u(g.num_states(), Rat(0));
  u[g.top] = 1;
  for (int j = 0; j < horizon; ++j) {
    std::vector<Rat> next(g.num_states(), Rat(0));
    next[g.top] = 1;
    const int step = horizon - 1 - j;  // strategy index used at this depth
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (s == g.top) continue;
      Rat worst;
      bool first = true;
      for (ActionId b = 0; b < g.num_min(s); ++b) {
        Rat e(0);
        for (const auto& [a, pa] : sigma.at(step, s).entries)
          for (const auto& [t, p] : g.p(s, a, b).entries) e += pa * p * u[t];
        if (first || e < worst) {
          worst = e;
          first = false;
        }
      }
      next[s] = worst;
    }
    u = std::move(next);
  }
  return u;
}

}  // namespace csg
