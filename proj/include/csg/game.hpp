// Finite two-player zero-sum concurrent stochastic game with designated
// target (top) and losing (bottom) sinks. Max picks a row action, Min a
// column action, simultaneously; the pair selects a distribution over states.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csg/distribution.hpp"
#include "csg/rational.hpp"

namespace csg {

using StateId = int;
using ActionId = int;

enum class Mode { Exact, Float };

struct Game {
  Mode mode = Mode::Exact;
  std::vector<std::string> state_names;
  // Per-state action name lists; indices are the ActionIds.
  std::vector<std::vector<std::string>> max_actions;
  std::vector<std::vector<std::string>> min_actions;
  // trans[s][a][b]: distribution over successor StateIds.
  std::vector<std::vector<std::vector<Distribution>>> trans;
  StateId top = -1;
  StateId bottom = -1;

  int num_states() const { return static_cast<int>(state_names.size()); }
  int num_max(StateId s) const { return static_cast<int>(max_actions[s].size()); }
  int num_min(StateId s) const { return static_cast<int>(min_actions[s].size()); }
  const Distribution& p(StateId s, ActionId a, ActionId b) const { return trans[s][a][b]; }
  bool is_sink_state(StateId s) const { return s == top || s == bottom; }

  std::optional<StateId> state_index(const std::string& name) const {
    for (int i = 0; i < num_states(); ++i)
      if (state_names[i] == name) return i;
    return std::nullopt;
  }

  // True when every state gives at least one player a singleton action set.
  bool is_turn_based() const {
    for (StateId s = 0; s < num_states(); ++s)
      if (num_max(s) > 1 && num_min(s) > 1) return false;
    return true;
  }
};

// Tolerance for float-mode distribution mass checks (1e-12).
inline const Rat kFloatMassTol = Rat(1, 1000000) * Rat(1, 1000000);

// Structural and probabilistic validation. Empty result == valid game.
inline std::vector<std::string> validate(const Game& g) {
  std::vector<std::string> diags;
  auto complain = [&](const std::string& m) { diags.push_back(m); };
  const int n = g.num_states();
  if (n == 0) {
    complain("game has no states");
    return diags;
  }
  std::set<std::string> seen;
  for (const auto& name : g.state_names)
    if (!seen.insert(name).second) complain("duplicate state name '" + name + "'");
  if (g.top < 0 || g.top >= n) complain("top sink index out of range");
  if (g.bottom < 0 || g.bottom >= n) complain("bottom sink index out of range");
  if (g.top == g.bottom) complain("top and bottom must be distinct states");
  if (static_cast<int>(g.max_actions.size()) != n || static_cast<int>(g.min_actions.size()) != n ||
      static_cast<int>(g.trans.size()) != n) {
    complain("per-state tables do not match the state count");
    return diags;
  }
  for (StateId s = 0; s < n; ++s) {
    const std::string& sn = g.state_names[s];
    if (g.max_actions[s].empty()) complain("state '" + sn + "' has an empty Max action set");
    if (g.min_actions[s].empty()) complain("state '" + sn + "' has an empty Min action set");
    if (static_cast<int>(g.trans[s].size()) != g.num_max(s)) {
      complain("state '" + sn + "' is missing transition rows");
      continue;
    }
    for (ActionId a = 0; a < g.num_max(s); ++a) {
      if (static_cast<int>(g.trans[s][a].size()) != g.num_min(s)) {
        complain("state '" + sn + "' action '" + g.max_actions[s][a] +
                 "' is missing transition triples");
        continue;
      }
      for (ActionId b = 0; b < g.num_min(s); ++b) {
        const Distribution& d = g.trans[s][a][b];
        if (d.entries.empty()) {
          complain("state '" + sn + "' has an empty distribution");
          continue;
        }
        for (const auto& [t, p] : d.entries) {
          if (t < 0 || t >= n) complain("state '" + sn + "' has an unknown successor index");
          if (p <= 0) complain("state '" + sn + "' has a nonpositive probability entry");
          if (p > 1) complain("state '" + sn + "' has a probability entry above 1");
        }
        Rat m = d.mass();
        bool ok = g.mode == Mode::Exact ? (m == 1) : (abs(m - Rat(1)) <= kFloatMassTol);
        if (!ok)
          complain("state '" + sn + "' action pair ('" + g.max_actions[s][a] + "','" +
                   g.min_actions[s][b] + "') has mass " + rat_to_string(m) + " != 1");
      }
    }
    if (s == g.top || s == g.bottom) {
      for (ActionId a = 0; a < g.num_max(s) && a < static_cast<int>(g.trans[s].size()); ++a)
        for (ActionId b = 0; b < g.num_min(s) && b < static_cast<int>(g.trans[s][a].size()); ++b) {
          const Distribution& d = g.trans[s][a][b];
          if (d.entries.size() != 1 || d.entries[0].first != s)
            complain(std::string("sink '") + sn + "' is not absorbing");
        }
    }
  }
  return diags;
}

inline void require_valid(const Game& g, const std::string& who) {
  auto diags = validate(g);
  if (!diags.empty()) throw std::invalid_argument(who + ": invalid game: " + diags.front());
}

// Merges every state in `targets` into a single fresh top sink; adds a fresh
// bottom sink if the merge consumed it. Values of untouched states for
// "reach the target set" are preserved.
inline Game collapse_targets(const Game& g, const std::set<StateId>& targets) {
  if (targets.empty()) throw std::invalid_argument("collapse_targets: empty target set");
  Game out;
  out.mode = g.mode;
  const int n = g.num_states();
  std::vector<StateId> remap(n, -1);
  for (StateId s = 0; s < n; ++s) {
    if (targets.count(s)) continue;
    remap[s] = static_cast<int>(out.state_names.size());
    out.state_names.push_back(g.state_names[s]);
  }
  // Fresh top sink; pick a name not already taken.
  std::string top_name = "top";
  while ([&] {
    for (const auto& nm : out.state_names)
      if (nm == top_name) return true;
    return false;
  }())
    top_name += "_";
  out.top = static_cast<int>(out.state_names.size());
  out.state_names.push_back(top_name);
  for (StateId s = 0; s < n; ++s)
    if (targets.count(s)) remap[s] = out.top;
  bool need_bottom = targets.count(g.bottom) > 0;
  if (!need_bottom) {
    out.bottom = remap[g.bottom];
  } else {
    std::string bot_name = "bot";
    while ([&] {
      for (const auto& nm : out.state_names)
        if (nm == bot_name) return true;
      return false;
    }())
      bot_name += "_";
    out.bottom = static_cast<int>(out.state_names.size());
    out.state_names.push_back(bot_name);
  }
  const int m = static_cast<int>(out.state_names.size());
  out.max_actions.assign(m, {"a"});
  out.min_actions.assign(m, {"b"});
  out.trans.assign(m, {});
  for (StateId s = 0; s < n; ++s) {
    if (targets.count(s)) continue;
    StateId ns = remap[s];
    out.max_actions[ns] = g.max_actions[s];
    out.min_actions[ns] = g.min_actions[s];
    out.trans[ns].resize(g.num_max(s));
    for (ActionId a = 0; a < g.num_max(s); ++a) {
      out.trans[ns][a].resize(g.num_min(s));
      for (ActionId b = 0; b < g.num_min(s); ++b) {
        Distribution d;
        for (const auto& [t, p] : g.p(s, a, b).entries) d.entries.emplace_back(remap[t], p);
        d.normalize_shape();
        out.trans[ns][a][b] = std::move(d);
      }
    }
  }
  // Sink rows (covers the fresh sinks and the remapped old sinks).
  for (StateId s : {out.top, out.bottom}) {
    out.max_actions[s] = {"a"};
    out.min_actions[s] = {"b"};
    out.trans[s] = {{Distribution::point(s)}};
  }
  return out;
}

}  // namespace csg
