// Exact MDP machinery for certification: fix one player's memoryless
// strategy, then compute the other player's exact best-response reachability
// values by policy iteration with exact linear solves.
//
// Conventions that make the exact fixpoint unique (least-fixpoint semantics):
//  - minimizing: states where the chooser can trap the play away from the
//    target (greatest closed set with an all-mass-inside action) have value 0
//    and are made absorbing before iteration; on the rest, every policy is
//    transient, so evaluation systems are nonsingular and any greedy policy
//    at the fixpoint attains it.
//  - maximizing: each policy is evaluated by its least solution (solve only
//    on states that reach the target under the policy; 0 elsewhere); an
//    improvement step never lowers the value (optional-stopping argument),
//    so iteration terminates at the least fixpoint.
#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "csg/distribution.hpp"
#include "csg/game.hpp"
#include "csg/graph.hpp"
#include "csg/linalg.hpp"
#include "csg/strategy.hpp"

namespace csg {

// One controller, exact rows. act[s] is nonempty for every state.
struct Mdp {
  StateId top = -1, bottom = -1;
  std::vector<std::vector<Distribution>> act;
  int num_states() const { return static_cast<int>(act.size()); }
};

// Fix Max's strategy; Min keeps their action sets: q(s,b) = sum_a sigma(a) p(s,a,b).
inline Mdp induce_min_mdp(const Game& g, const MemorylessStrategy& sigma) {
  Mdp mdp;
  mdp.top = g.top;
  mdp.bottom = g.bottom;
  mdp.act.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    mdp.act[s].resize(g.num_min(s));
    for (ActionId b = 0; b < g.num_min(s); ++b) {
      Distribution q;
      for (const auto& [a, pa] : sigma.at(s).entries)
        for (const auto& [t, p] : g.p(s, a, b).entries) q.entries.emplace_back(t, pa * p);
      q.normalize_shape();
      mdp.act[s][b] = std::move(q);
    }
  }
  return mdp;
}

// Fix Min's strategy; Max keeps their action sets.
inline Mdp induce_max_mdp(const Game& g, const MemorylessStrategy& pi) {
  Mdp mdp;
  mdp.top = g.top;
  mdp.bottom = g.bottom;
  mdp.act.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    mdp.act[s].resize(g.num_max(s));
    for (ActionId a = 0; a < g.num_max(s); ++a) {
      Distribution q;
      for (const auto& [b, pb] : pi.at(s).entries)
        for (const auto& [t, p] : g.p(s, a, b).entries) q.entries.emplace_back(t, pb * p);
      q.normalize_shape();
      mdp.act[s][a] = std::move(q);
    }
  }
  return mdp;
}

enum class Opt { Minimize, Maximize };

struct MdpSolution {
  std::vector<Rat> values;
  std::vector<ActionId> policy;  // pure memoryless witness attaining values
};

namespace detail {

// Least-fixpoint evaluation of a fixed policy: reach probabilities of
// `target`, solving only on states that reach it under the policy.
inline std::vector<Rat> evaluate_policy(const Mdp& mdp, const std::vector<ActionId>& policy,
                                        StateId target) {
  const int n = mdp.num_states();
  std::vector<std::vector<int>> adj(n);
  for (StateId s = 0; s < n; ++s)
    if (s != target)
      for (const auto& [t, p] : mdp.act[s][policy[s]].entries) adj[s].push_back(t);
  std::vector<bool> reaches = can_reach(adj, target);
  std::vector<int> idx(n, -1);
  std::vector<StateId> order;
  for (StateId s = 0; s < n; ++s)
    if (reaches[s] && s != target) {
      idx[s] = static_cast<int>(order.size());
      order.push_back(s);
    }
  const int k = static_cast<int>(order.size());
  std::vector<Rat> values(n, Rat(0));
  values[target] = 1;
  if (k > 0) {
    std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k, Rat(0)));
    std::vector<Rat> b(k, Rat(0));
    for (int i = 0; i < k; ++i) {
      a[i][i] = 1;
      for (const auto& [t, p] : mdp.act[order[i]][policy[order[i]]].entries) {
        if (t == target)
          b[i] += p;
        else if (idx[t] >= 0)
          a[i][idx[t]] -= p;
      }
    }
    std::vector<Rat> x = solve_linear(std::move(a), std::move(b));
    for (int i = 0; i < k; ++i) values[order[i]] = x[i];
  }
  return values;
}

}  // namespace detail

// Exact optimal reach-probability of `target` for the MDP's single
// controller, minimizing or maximizing. Returns exact values and a pure
// memoryless witness policy attaining them (lowest action index when the
// choice is free).
inline MdpSolution mdp_reach_value(const Mdp& mdp, StateId target, Opt direction) {
  const int n = mdp.num_states();
  MdpSolution sol;
  sol.values.assign(n, Rat(0));
  sol.policy.assign(n, 0);
  sol.values[target] = 1;

  // Zero set, plus a working copy where zero states absorb.
  std::vector<bool> zero(n, false);
  Mdp work_mdp = mdp;
  if (direction == Opt::Minimize) {
    // Greatest set U of non-target states with some action staying inside U:
    // exactly the states whose controller can avoid the target surely.
    std::vector<bool> in_u(n, true);
    in_u[target] = false;
    auto staying_action = [&](StateId s) -> ActionId {
      for (ActionId k = 0; k < static_cast<int>(mdp.act[s].size()); ++k) {
        bool stays = true;
        for (const auto& [t, p] : mdp.act[s][k].entries)
          if (!in_u[t]) {
            stays = false;
            break;
          }
        if (stays) return k;
      }
      return -1;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      for (StateId s = 0; s < n; ++s)
        if (in_u[s] && staying_action(s) < 0) {
          in_u[s] = false;
          changed = true;
        }
    }
    for (StateId s = 0; s < n; ++s) {
      if (!in_u[s]) continue;
      zero[s] = true;
      sol.policy[s] = staying_action(s);  // witness: trap the play forever
      work_mdp.act[s] = {Distribution::point(s)};
    }
  } else {
    // Value 0 exactly where no action sequence reaches the target at all.
    std::vector<std::vector<int>> adj(n);
    for (StateId s = 0; s < n; ++s)
      for (const auto& action : mdp.act[s])
        for (const auto& [t, p] : action.entries) adj[s].push_back(t);
    std::vector<bool> reaches = can_reach(adj, target);
    for (StateId s = 0; s < n; ++s)
      if (!reaches[s] && s != target) zero[s] = true;
  }

  std::vector<StateId> undecided;
  for (StateId s = 0; s < n; ++s)
    if (s != target && !zero[s]) undecided.push_back(s);
  if (undecided.empty()) return sol;

  std::vector<ActionId> policy(n, 0);
  std::vector<Rat> values;
  for (;;) {
    values = detail::evaluate_policy(work_mdp, policy, target);
    bool improved = false;
    for (StateId s : undecided) {
      Rat best = values[s];
      ActionId arg = -1;
      for (ActionId k = 0; k < static_cast<int>(work_mdp.act[s].size()); ++k) {
        Rat e(0);
        for (const auto& [t, p] : work_mdp.act[s][k].entries) e += p * values[t];
        if ((direction == Opt::Minimize && e < best) || (direction == Opt::Maximize && e > best)) {
          best = e;
          arg = k;
        }
      }
      if (arg >= 0) {
        policy[s] = arg;
        improved = true;
      }
    }
    if (!improved) break;
  }

  for (StateId s : undecided) {
    sol.values[s] = values[s];
    sol.policy[s] = policy[s];
  }
  if (direction == Opt::Minimize) {
    // Any greedy policy attains the minimizing fixpoint (evaluation systems
    // are nonsingular), so canonicalize to the lowest greedy action.
    for (StateId s : undecided)
      for (ActionId k = 0; k < static_cast<int>(work_mdp.act[s].size()); ++k) {
        Rat e(0);
        for (const auto& [t, p] : work_mdp.act[s][k].entries) e += p * sol.values[t];
        if (e == sol.values[s]) {
          sol.policy[s] = k;
          break;
        }
      }
  } else {
    // Greedy is not enough on the maximizing side (a self-loop is greedy at
    // its own value); only adopt a lower-index action if re-evaluation
    // confirms it still attains the same values.
    for (StateId s : undecided)
      for (ActionId k = 0; k < policy[s]; ++k) {
        Rat e(0);
        for (const auto& [t, p] : work_mdp.act[s][k].entries) e += p * sol.values[t];
        if (e != sol.values[s]) continue;
        std::vector<ActionId> probe = policy;
        probe[s] = k;
        std::vector<Rat> pv = detail::evaluate_policy(work_mdp, probe, target);
        bool same = true;
        for (StateId w : undecided)
          if (pv[w] != sol.values[w]) {
            same = false;
            break;
          }
        if (same) {
          policy[s] = k;
          sol.policy[s] = k;
          break;
        }
      }
  }
  return sol;
}

}  // namespace csg
