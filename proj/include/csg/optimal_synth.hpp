// Optimal-where-possible reachability synthesis. The state space is split
// into a region S0 where Max has a memoryless strategy achieving the value
// exactly and a remainder S1 where only eps-optimality is possible; the
// returned strategy is exact on S0 and eps-optimal on S1, with an exact
// certificate chain backing both claims.
//
// S0 is found as the greatest region closed under a ranked witness
// condition: a state is ranked when some mixed action keeps every Min
// reply's payoff at or above the value, keeps play inside the region
// against value-preserving replies, and pushes positive mass toward
// lower-ranked states against every value-preserving reply.
#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csg/bellman.hpp"
#include "csg/exact_values.hpp"
#include "csg/game.hpp"
#include "csg/leaky.hpp"
#include "csg/lp.hpp"
#include "csg/matrix_game.hpp"
#include "csg/reach_eps.hpp"
#include "csg/strategy.hpp"
#include "csg/verify.hpp"

namespace csg {

// ---- Value-zero pruning ----

struct Pruning {
  Game game;
  std::vector<StateId> new_of_old;  // total: value-zero states map to the new bottom
  std::vector<StateId> old_of_new;
};

// Merges every state of value <= theta into the bottom sink (theta = 0 in
// exact mode). The surviving states' values are re-verified by one exact
// operator sweep; a mismatch is a logic error, not a tolerated drift.
inline Pruning prune_value_zero(const Game& g, const std::vector<Rat>& v,
                                const Rat& theta = Rat(0)) {
  if (v.size() != static_cast<std::size_t>(g.num_states()))
    throw std::invalid_argument("value vector size mismatch");
  if (v[g.top] <= theta) throw std::invalid_argument("top sink must not be value-zero");
  if (v[g.bottom] > theta) throw std::invalid_argument("bottom sink must be value-zero");

  Pruning out;
  out.new_of_old.assign(g.num_states(), -1);
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (v[s] <= theta && s != g.bottom) continue;
    out.new_of_old[s] = static_cast<StateId>(out.old_of_new.size());
    out.old_of_new.push_back(s);
  }
  const StateId new_bottom = out.new_of_old[g.bottom];
  for (StateId s = 0; s < g.num_states(); ++s)
    if (out.new_of_old[s] < 0) out.new_of_old[s] = new_bottom;

  Game h;
  h.mode = g.mode;
  h.top = out.new_of_old[g.top];
  h.bottom = new_bottom;
  const int n = static_cast<int>(out.old_of_new.size());
  h.state_names.reserve(n);
  for (StateId ns = 0; ns < n; ++ns) h.state_names.push_back(g.state_names[out.old_of_new[ns]]);
  h.max_actions.resize(n);
  h.min_actions.resize(n);
  h.trans.resize(n);
  for (StateId ns = 0; ns < n; ++ns) {
    const StateId s = out.old_of_new[ns];
    if (ns == h.top || ns == h.bottom) {
      h.max_actions[ns] = {"a"};
      h.min_actions[ns] = {"b"};
      h.trans[ns] = {{Distribution::point(ns)}};
      continue;
    }
    h.max_actions[ns] = g.max_actions[s];
    h.min_actions[ns] = g.min_actions[s];
    h.trans[ns].resize(g.num_max(s));
    for (ActionId a = 0; a < g.num_max(s); ++a) {
      h.trans[ns][a].resize(g.num_min(s));
      for (ActionId b = 0; b < g.num_min(s); ++b) {
        std::vector<std::pair<int, Rat>> entries;
        for (const auto& [t, p] : g.p(s, a, b).entries)
          entries.emplace_back(out.new_of_old[t], p);
        h.trans[ns][a][b] = Distribution(std::move(entries));
      }
    }
  }
  require_valid(h, "prune_value_zero");

  std::vector<Rat> v_new(n);
  for (StateId ns = 0; ns < n; ++ns) v_new[ns] = v[out.old_of_new[ns]];
  for (StateId ns = 0; ns < n; ++ns) {
    if (h.is_sink_state(ns)) continue;
    const Rat val = solve_matrix_game(local_matrix(h, ns, v_new)).value;
    if (abs(val - v_new[ns]) > theta)
      throw std::logic_error("pruning changed the value at state '" + h.state_names[ns] + "'");
  }
  out.game = std::move(h);
  return out;
}

// ---- Ranked witness search ----

struct RankResult {
  std::vector<int> rank;                     // >= 0 iff ranked; top has rank 0
  std::vector<Distribution> alpha;           // witness mix at ranked states
  std::vector<Rat> delta;                    // positive progress mass at ranked states
  std::vector<std::vector<StateId>> levels;  // levels[r] = states of rank r
};

namespace detail {

struct WitnessCandidate {
  bool accepted = false;
  Rat t;
  Distribution alpha;
  Rat delta;
};

// Searches for a witness mix at s: enumerate the equality set E of Min
// replies held exactly at v(s); every reply outside E must beat v(s) by t,
// every reply in E must keep the support inside the region and put mass
// >= t into the ranked set. The LP maximizes t; E runs over all subsets,
// keeping the best t (lowest-index subset on ties).
inline WitnessCandidate witness_at(const Game& g, StateId s, const std::vector<Rat>& v,
                                   const std::vector<bool>& in_region,
                                   const std::vector<bool>& ranked) {
  const int na = g.num_max(s), nb = g.num_min(s);
  if (nb > 16)
    throw std::runtime_error("witness subset enumeration infeasible: state '" +
                             g.state_names[s] + "' has " + std::to_string(nb) + " Min actions");
  const Matrix m = local_matrix(g, s, v);
  std::vector<std::vector<Rat>> rmass(na, std::vector<Rat>(nb, Rat(0)));
  std::vector<std::vector<bool>> escapes(na, std::vector<bool>(nb, false));
  for (ActionId a = 0; a < na; ++a)
    for (ActionId b = 0; b < nb; ++b)
      for (const auto& [t, p] : g.p(s, a, b).entries) {
        if (ranked[t]) rmass[a][b] += p;
        if (!in_region[t]) escapes[a][b] = true;
      }

  WitnessCandidate best;
  const int tvar = na;  // variable layout: alpha_0..alpha_{na-1}, t
  for (unsigned long mask = 0; mask < (1ul << nb); ++mask) {
    LinearProgram lp;
    lp.num_vars = na + 1;
    lp.objective.assign(lp.num_vars, Rat(0));
    lp.objective[tvar] = 1;
    {
      std::vector<Rat> row(lp.num_vars, Rat(1));
      row[tvar] = 0;
      lp.add_row(std::move(row), LinearProgram::EQ, Rat(1));
    }
    for (ActionId b = 0; b < nb; ++b) {
      if (mask & (1ul << b)) {
        std::vector<Rat> pay(lp.num_vars, Rat(0));
        for (ActionId a = 0; a < na; ++a) pay[a] = m.at(a, b);
        lp.add_row(std::move(pay), LinearProgram::EQ, v[s]);
        std::vector<Rat> progress(lp.num_vars, Rat(0));
        for (ActionId a = 0; a < na; ++a) progress[a] = rmass[a][b];
        progress[tvar] = -1;
        lp.add_row(std::move(progress), LinearProgram::GE, Rat(0));
        for (ActionId a = 0; a < na; ++a) {
          if (!escapes[a][b]) continue;
          std::vector<Rat> pin(lp.num_vars, Rat(0));
          pin[a] = 1;
          lp.add_row(std::move(pin), LinearProgram::EQ, Rat(0));
        }
      } else {
        std::vector<Rat> pay(lp.num_vars, Rat(0));
        for (ActionId a = 0; a < na; ++a) pay[a] = m.at(a, b);
        pay[tvar] = -1;
        lp.add_row(std::move(pay), LinearProgram::GE, v[s]);
      }
    }
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpSolution::Optimal || !(sol.objective > 0)) continue;
    if (best.accepted && !(sol.objective > best.t)) continue;

    WitnessCandidate cand;
    cand.accepted = true;
    cand.t = sol.objective;
    std::vector<std::pair<int, Rat>> entries;
    for (ActionId a = 0; a < na; ++a)
      if (sol.x[a] != 0) entries.emplace_back(a, sol.x[a]);
    cand.alpha = Distribution(std::move(entries));
    bool any_equality = false;
    Rat least_mass;
    for (ActionId b = 0; b < nb; ++b) {
      if (!(mask & (1ul << b))) continue;
      Rat got(0);
      for (const auto& [a, pa] : cand.alpha.entries) got += pa * rmass[a][b];
      if (!any_equality || got < least_mass) least_mass = got;
      any_equality = true;
    }
    cand.delta = any_equality ? least_mass : cand.t;
    best = std::move(cand);
  }
  return best;
}

}  // namespace detail

// Ranks the region's states by witness level: rank 0 is the top sink, and a
// state gets rank r+1 when a witness exists against the states of rank
// <= r. States of the region left unranked at the fixpoint (and the bottom
// sink) keep rank -1.
inline RankResult r_stratification(const Game& g, const std::vector<bool>& in_region,
                                   const std::vector<Rat>& v) {
  if (in_region.size() != static_cast<std::size_t>(g.num_states()) ||
      v.size() != static_cast<std::size_t>(g.num_states()))
    throw std::invalid_argument("region/value vector size mismatch");
  if (!in_region[g.top]) throw std::invalid_argument("region must contain the top sink");

  RankResult out;
  out.rank.assign(g.num_states(), -1);
  out.alpha.assign(g.num_states(), Distribution{});
  out.delta.assign(g.num_states(), Rat(0));
  out.rank[g.top] = 0;
  out.alpha[g.top] = Distribution::point(0);
  out.delta[g.top] = 1;
  out.levels.push_back({g.top});

  std::vector<bool> ranked(g.num_states(), false);
  ranked[g.top] = true;
  for (;;) {
    std::vector<std::pair<StateId, detail::WitnessCandidate>> pending;
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (!in_region[s] || ranked[s] || s == g.bottom) continue;
      detail::WitnessCandidate w = detail::witness_at(g, s, v, in_region, ranked);
      if (w.accepted) pending.emplace_back(s, std::move(w));
    }
    if (pending.empty()) break;
    const int level = static_cast<int>(out.levels.size());
    out.levels.emplace_back();
    for (auto& [s, w] : pending) {
      out.rank[s] = level;
      out.alpha[s] = std::move(w.alpha);
      out.delta[s] = std::move(w.delta);
      out.levels.back().push_back(s);
    }
    for (StateId s : out.levels.back()) ranked[s] = true;
  }
  return out;
}

// ---- Greatest closed region ----

struct Partition {
  std::vector<bool> in_s0;
  std::vector<StateId> s0, s1;  // sorted state id lists
  RankResult ranking;           // from the final stratification round
};

// Greatest region S0 (always containing both sinks) whose every non-bottom
// state is ranked by a stratification relative to S0 itself: start from all
// states and repeatedly drop the unranked ones. Requires the bottom sink to
// be the only value-zero state (prune first).
inline Partition compute_S0(const Game& g, const std::vector<Rat>& v) {
  if (v.size() != static_cast<std::size_t>(g.num_states()))
    throw std::invalid_argument("value vector size mismatch");
  if (v[g.top] != 1 || v[g.bottom] != 0)
    throw std::invalid_argument("value vector must fix the sinks");
  for (StateId s = 0; s < g.num_states(); ++s)
    if (s != g.bottom && !(v[s] > 0))
      throw std::invalid_argument("prune value-zero states before computing the region");

  std::vector<bool> in_region(g.num_states(), true);
  RankResult ranking;
  for (;;) {
    ranking = r_stratification(g, in_region, v);
    std::vector<bool> next(g.num_states(), false);
    next[g.bottom] = true;
    for (StateId s = 0; s < g.num_states(); ++s)
      if (ranking.rank[s] >= 0) next[s] = true;
    if (next == in_region) break;
    in_region = std::move(next);
  }

  Partition out;
  out.in_s0 = std::move(in_region);
  out.ranking = std::move(ranking);
  for (StateId s = 0; s < g.num_states(); ++s)
    (out.in_s0[s] ? out.s0 : out.s1).push_back(s);
  return out;
}

// ---- Leak budget from the classification gap ----

struct GapEps {
  bool has_increasing = false;
  Rat gap;  // smallest strict increase over v among Min replies to the witnesses
  Rat eps;  // chosen budget: min(gap / 2, fallback), or fallback when no increase
};

// The admissible leak must stay below half the smallest margin by which a
// value-increasing Min reply beats the value; otherwise leaking could turn
// a profitable reply into a losing one. theta > 0 marks the classification
// as approximate, which this exact pipeline refuses.
inline GapEps choose_gap_epsilon(const Game& g, const Partition& part, const std::vector<Rat>& v,
                                 const Rat& eps_fallback, const Rat& theta = Rat(0)) {
  if (!(eps_fallback > 0) || eps_fallback > Rat(1, 2))
    throw std::invalid_argument("fallback budget must be in (0, 1/2]");
  GapEps out;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (part.ranking.rank[s] <= 0) continue;  // sinks and unranked states
    const Distribution& alpha = part.ranking.alpha[s];
    for (ActionId b = 0; b < g.num_min(s); ++b) {
      Rat payoff(0);
      for (const auto& [a, pa] : alpha.entries)
        for (const auto& [t, p] : g.p(s, a, b).entries) payoff += pa * p * v[t];
      if (payoff < v[s])
        throw std::logic_error("witness mix loses against a Min reply at state '" +
                               g.state_names[s] + "'");
      if (payoff > v[s] + theta) {
        const Rat margin = payoff - v[s];
        if (margin <= theta)
          throw std::runtime_error("classification gap below tolerance at state '" +
                                   g.state_names[s] + "'");
        if (!out.has_increasing || margin < out.gap) {
          out.has_increasing = true;
          out.gap = margin;
        }
      }
    }
  }
  out.eps = out.has_increasing ? std::min(Rat(out.gap / 2), eps_fallback) : eps_fallback;
  return out;
}

// ---- End-to-end synthesis ----

struct OptimalSynthesis {
  MemorylessStrategy sigma;  // on the original game
  Partition partition;       // original-game state ids
  GapEps gap;
  ValueResult values;        // exact reachability values of the original game
  Pruning pruning;           // value-zero surgery (pruning.game is the working game)
  Game certificate_game;         // leaky certificate game, pruned-game state ids
  std::vector<Rat> v_ext;    // certificate potential on the pruned game
  CertReport report;         // exact certificate on the original game
  std::vector<std::string> failures;
  bool ok = false;
};

struct OptimalSynthOptions {
  Rat eps_fallback = Rat(1, 100);
  ValueOptions value_options;
};

// Splits the states into an exactly-winnable region and the rest, then
// composes the witness mixes on the region with an eps-optimal strategy
// outside it. Every guarantee is re-derived from exact certificates:
// (1) the outside sub-strategy's avoid value in its leaky game covers
// v - eps, (2) the combined strategy is a one-step submartingale for the
// certificate potential in the leaky certificate game, and (3) the final
// best-response values on the original game meet v on the region and
// v - eps outside. Failures are recorded, not papered over.
inline OptimalSynthesis synthesize_optimal(const Game& g, const OptimalSynthOptions& opt = {}) {
  OptimalSynthesis out;
  out.values = game_values(g, Objective::Reach, opt.value_options);
  if (!out.values.exact)
    throw std::runtime_error(
        "optimal synthesis requires exact values; rerun in exact mode or loosen snapping");
  const std::vector<Rat>& v = out.values.values;

  out.pruning = prune_value_zero(g, v);
  const Game& pg = out.pruning.game;
  std::vector<Rat> vp(pg.num_states());
  for (StateId ns = 0; ns < pg.num_states(); ++ns) vp[ns] = v[out.pruning.old_of_new[ns]];

  const Partition part = compute_S0(pg, vp);
  out.gap = choose_gap_epsilon(pg, part, vp, opt.eps_fallback);
  const Rat eps = out.gap.eps;

  MemorylessStrategy sigma_p;  // on the pruned game
  sigma_p.player = Player::Max;
  sigma_p.choice.resize(pg.num_states(), Distribution::point(0));
  for (StateId s = 0; s < pg.num_states(); ++s)
    if (part.ranking.rank[s] > 0) sigma_p.choice[s] = part.ranking.alpha[s];

  out.v_ext = vp;
  Rat eps_outside = eps;  // per-step leak in the outside block
  if (!part.s1.empty()) {
    const Redirection red = redirect_outside(pg, part.in_s0, vp);
    EpsSynthesis es = synthesize_eps(red.game, eps);
    eps_outside = es.leak;
    if (!es.ok)
      for (const std::string& f : es.report.failures)
        out.failures.push_back("outside block: " + f);
    const CertReport avoid_cert = certify(es.leaky, es.sigma, Objective::Avoid);
    for (StateId s : part.s1) {
      const StateId ns = red.new_of_old[s];
      sigma_p.choice[s] = es.sigma.choice[ns];
      out.v_ext[s] = avoid_cert.achieved[ns];
      if (out.v_ext[s] < vp[s] - eps)
        out.failures.push_back("leaky avoid value " + rat_to_string(out.v_ext[s]) +
                               " at state '" + pg.state_names[s] + "' falls short of " +
                               rat_to_string(vp[s] - eps));
    }
  }

  // build_certificate_game consults sigma_p only on region rows, where it still
  // holds the witness mixes.
  out.certificate_game = build_certificate_game(pg, part.in_s0, sigma_p, vp, eps, eps_outside);
  for (const std::string& f : submartingale_violations(out.certificate_game, sigma_p, out.v_ext))
    out.failures.push_back("certificate game: " + f);

  // Lift the partition and the strategy back to the original state space;
  // merged value-zero states are trivially optimal under any row.
  out.partition.in_s0.assign(g.num_states(), false);
  out.partition.ranking.rank.assign(g.num_states(), -1);
  out.partition.ranking.alpha.assign(g.num_states(), Distribution{});
  out.partition.ranking.delta.assign(g.num_states(), Rat(0));
  out.sigma.player = Player::Max;
  out.sigma.choice.assign(g.num_states(), Distribution::point(0));
  for (StateId s = 0; s < g.num_states(); ++s) {
    const bool merged = out.pruning.old_of_new[out.pruning.new_of_old[s]] != s;
    if (merged) {
      out.partition.in_s0[s] = true;
      continue;
    }
    const StateId ns = out.pruning.new_of_old[s];
    out.partition.in_s0[s] = part.in_s0[ns];
    out.partition.ranking.rank[s] = part.ranking.rank[ns];
    out.partition.ranking.alpha[s] = part.ranking.alpha[ns];
    out.partition.ranking.delta[s] = part.ranking.delta[ns];
    out.sigma.choice[s] = sigma_p.choice[ns];
  }
  out.partition.ranking.levels.assign(part.ranking.levels.size(), {});
  for (std::size_t r = 0; r < part.ranking.levels.size(); ++r)
    for (StateId ns : part.ranking.levels[r])
      out.partition.ranking.levels[r].push_back(out.pruning.old_of_new[ns]);
  for (StateId s = 0; s < g.num_states(); ++s)
    (out.partition.in_s0[s] ? out.partition.s0 : out.partition.s1).push_back(s);

  std::vector<std::pair<StateId, Rat>> targets;
  for (StateId s = 0; s < g.num_states(); ++s)
    targets.emplace_back(s, out.partition.in_s0[s] ? v[s] : v[s] - eps);
  out.report = certify(g, out.sigma, Objective::Reach, targets);
  for (const std::string& f : out.report.failures) out.failures.push_back("final: " + f);
  out.ok = out.report.meets_targets && out.failures.empty();
  return out;
}

}  // namespace csg
