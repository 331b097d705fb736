// Game transformations: leak injection, Max-action support restriction, and
// state-space surgery (redirecting mass out of a solved region, assembling
// the combined certificate game for optimal-where-possible synthesis).
#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "csg/bellman.hpp"
#include "csg/game.hpp"
#include "csg/strategy.hpp"

namespace csg {

// One leak: at state `state`, against Min action `min_action`, every Max
// action's outcome distribution is damped by (1 - eps) and the freed mass
// eps is sent to the bottom sink.
struct LeakEntry {
  StateId state = 0;
  ActionId min_action = 0;
  Rat eps;
};

namespace detail {

inline Distribution leak_distribution(const Distribution& d, StateId bottom, const Rat& eps) {
  std::vector<std::pair<int, Rat>> entries;
  entries.reserve(d.entries.size() + 1);
  const Rat keep = Rat(1) - eps;
  for (const auto& [t, p] : d.entries) entries.emplace_back(t, keep * p);
  entries.emplace_back(bottom, eps);
  return Distribution(std::move(entries));
}

}  // namespace detail

// Applies every leak entry to a copy of the game. Each entry damps all Max
// rows of one (state, min_action) column. Entries must name valid pairs,
// must not target the top sink, must have eps in (0, 1), and must not repeat
// a (state, min_action) pair.
inline Game make_leak(const Game& g, const std::vector<LeakEntry>& entries) {
  Game out = g;
  std::vector<std::vector<bool>> seen(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) seen[s].assign(g.num_min(s), false);
  for (const auto& e : entries) {
    if (e.state < 0 || e.state >= g.num_states())
      throw std::invalid_argument("leak entry names unknown state index " +
                                  std::to_string(e.state));
    if (e.state == g.top) throw std::invalid_argument("leak entry targets the top sink");
    if (e.min_action < 0 || e.min_action >= g.num_min(e.state))
      throw std::invalid_argument("leak entry at state '" + g.state_names[e.state] +
                                  "' names unknown Min action " + std::to_string(e.min_action));
    if (!(e.eps > 0) || !(e.eps < 1))
      throw std::invalid_argument("leak amount must be in (0, 1), got " + rat_to_string(e.eps));
    if (seen[e.state][e.min_action])
      throw std::invalid_argument("duplicate leak entry at state '" + g.state_names[e.state] +
                                  "' Min action " + std::to_string(e.min_action));
    seen[e.state][e.min_action] = true;
    for (ActionId a = 0; a < g.num_max(e.state); ++a)
      out.trans[e.state][a][e.min_action] =
          detail::leak_distribution(g.p(e.state, a, e.min_action), g.bottom, e.eps);
  }
  return out;
}

// Uniform leak of eps on every (state, min_action) pair except at the top
// sink. The bottom sink's self-loop is unaffected by its own leak.
inline Game leak_all(const Game& g, const Rat& eps) {
  std::vector<LeakEntry> entries;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (s == g.top) continue;
    for (ActionId b = 0; b < g.num_min(s); ++b) entries.push_back({s, b, eps});
  }
  return make_leak(g, entries);
}

// Result of shrinking the Max action sets: the new game plus, per state, the
// sorted original action indices that were kept (new index = position).
struct SupportRestriction {
  Game game;
  std::vector<std::vector<ActionId>> kept;
};

// Shrinks A(s) to the union of the supports sigma uses at s across all
// stages and the tail. Min action sets and all retained transitions are
// unchanged. sigma must be a valid Max strategy for g.
inline SupportRestriction restrict_support(const Game& g, const StageStrategy& sigma) {
  if (sigma.player != Player::Max)
    throw std::invalid_argument("support restriction takes a Max strategy");
  const std::vector<std::string> diags = validate_strategy(g, sigma);
  if (!diags.empty())
    throw std::invalid_argument("support restriction needs a valid strategy: " + diags.front());
  SupportRestriction out;
  out.kept.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    std::vector<bool> used(g.num_max(s), false);
    for (const auto& stage : sigma.stages)
      for (const auto& [a, p] : stage[s].entries) used[a] = true;
    for (const auto& [a, p] : sigma.tail[s].entries) used[a] = true;
    for (ActionId a = 0; a < g.num_max(s); ++a)
      if (used[a]) out.kept[s].push_back(a);
  }
  Game h = g;
  for (StateId s = 0; s < g.num_states(); ++s) {
    std::vector<std::string> labels;
    std::vector<std::vector<Distribution>> rows;
    labels.reserve(out.kept[s].size());
    rows.reserve(out.kept[s].size());
    for (ActionId a : out.kept[s]) {
      labels.push_back(g.max_actions[s][a]);
      rows.push_back(g.trans[s][a]);
    }
    h.max_actions[s] = std::move(labels);
    h.trans[s] = std::move(rows);
  }
  out.game = std::move(h);
  return out;
}

namespace detail {

inline std::vector<Distribution> restrict_choice(const std::vector<Distribution>& choice,
                                                 const std::vector<std::vector<ActionId>>& kept,
                                                 bool to_restricted) {
  std::vector<Distribution> out(choice.size());
  for (std::size_t s = 0; s < choice.size(); ++s) {
    std::vector<std::pair<int, Rat>> entries;
    entries.reserve(choice[s].entries.size());
    for (const auto& [a, p] : choice[s].entries) {
      if (to_restricted) {
        const auto& ks = kept[s];
        auto it = std::find(ks.begin(), ks.end(), a);
        if (it == ks.end())
          throw std::invalid_argument("strategy uses an action outside the kept support");
        entries.emplace_back(static_cast<int>(it - ks.begin()), p);
      } else {
        entries.emplace_back(kept[s][a], p);
      }
    }
    out[s] = Distribution(std::move(entries));
  }
  return out;
}

}  // namespace detail

// Reindexes a strategy on the original game into the restricted game.
inline MemorylessStrategy to_restricted(const MemorylessStrategy& sigma,
                                        const std::vector<std::vector<ActionId>>& kept) {
  return {sigma.player, detail::restrict_choice(sigma.choice, kept, true)};
}

// Reindexes a strategy on the restricted game back to original action ids.
inline MemorylessStrategy from_restricted(const MemorylessStrategy& sigma,
                                          const std::vector<std::vector<ActionId>>& kept) {
  return {sigma.player, detail::restrict_choice(sigma.choice, kept, false)};
}

inline StageStrategy to_restricted(const StageStrategy& sigma,
                                   const std::vector<std::vector<ActionId>>& kept) {
  StageStrategy out;
  out.player = sigma.player;
  for (const auto& stage : sigma.stages)
    out.stages.push_back(detail::restrict_choice(stage, kept, true));
  out.tail = detail::restrict_choice(sigma.tail, kept, true);
  return out;
}

// Result of cutting a solved region out of the state space.
struct Redirection {
  Game game;
  std::vector<StateId> new_of_old;  // -1 for removed states
  std::vector<StateId> old_of_new;
};

// Removes the states in `in_s0` (which must contain both sinks) and rewires
// every retained transition: mass m into a removed non-sink state s' is
// replaced by m * v(s') into the top sink and m * (1 - v(s')) into the
// bottom sink. Retained states keep their relative order and names.
inline Redirection redirect_outside(const Game& g, const std::vector<bool>& in_s0,
                                    const std::vector<Rat>& v) {
  if (in_s0.size() != static_cast<std::size_t>(g.num_states()) ||
      v.size() != static_cast<std::size_t>(g.num_states()))
    throw std::invalid_argument("region/value vector size mismatch");
  if (!in_s0[g.top] || !in_s0[g.bottom])
    throw std::invalid_argument("redirected region must contain both sinks");
  Redirection out;
  out.new_of_old.assign(g.num_states(), -1);
  for (StateId s = 0; s < g.num_states(); ++s) {
    const bool keep = !in_s0[s] || s == g.top || s == g.bottom;
    if (!keep) continue;
    out.new_of_old[s] = static_cast<StateId>(out.old_of_new.size());
    out.old_of_new.push_back(s);
  }

  Game h;
  h.mode = g.mode;
  h.top = out.new_of_old[g.top];
  h.bottom = out.new_of_old[g.bottom];
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
        for (const auto& [t, p] : g.p(s, a, b).entries) {
          if (out.new_of_old[t] >= 0) {
            entries.emplace_back(out.new_of_old[t], p);
          } else {
            entries.emplace_back(h.top, p * v[t]);
            entries.emplace_back(h.bottom, p * (Rat(1) - v[t]));
          }
        }
        h.trans[ns][a][b] = Distribution(std::move(entries));
      }
    }
  }
  require_valid(h, "redirect_outside");
  out.game = std::move(h);
  return out;
}

// Certificate game for optimal-where-possible synthesis, on the full state
// space of g. Rows of states outside the region leak eps_outside on every
// Min action (matching the leaky game the outside sub-strategy was built
// in, except that mass into the region is kept, not redirected). Rows of
// non-sink region states leak eps_region on exactly the Min actions whose
// payoff against sigma0 strictly exceeds v(s).
inline Game build_certificate_game(const Game& g, const std::vector<bool>& in_s0,
                               const MemorylessStrategy& sigma0, const std::vector<Rat>& v,
                               const Rat& eps_region, const Rat& eps_outside) {
  if (in_s0.size() != static_cast<std::size_t>(g.num_states()) ||
      v.size() != static_cast<std::size_t>(g.num_states()))
    throw std::invalid_argument("region/value vector size mismatch");
  std::vector<LeakEntry> entries;
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (s == g.top || s == g.bottom) continue;
    if (!in_s0[s]) {
      for (ActionId b = 0; b < g.num_min(s); ++b) entries.push_back({s, b, eps_outside});
      continue;
    }
    const MinActionClasses classes = classify_min_actions(g, s, sigma0.at(s), v);
    if (!classes.decreasing.empty())
      throw std::invalid_argument("region strategy is not optimality-preserving at state '" +
                                  g.state_names[s] + "'");
    for (ActionId b : classes.increasing) entries.push_back({s, b, eps_region});
  }
  return make_leak(g, entries);
}

}  // namespace csg
