// Memoryless and stage (finite-horizon) strategies.
#pragma once

#include <string>
#include <vector>

#include "csg/distribution.hpp"
#include "csg/game.hpp"

namespace csg {

enum class Player { Max, Min };

// One mixed action per state; keys of the distribution are ActionIds.
struct MemorylessStrategy {
  Player player = Player::Max;
  std::vector<Distribution> choice;  // indexed by StateId

  const Distribution& at(StateId s) const { return choice[s]; }
};

// Plays stages[0], stages[1], ... on successive steps (counting steps already
// taken); once past the last stage the tail memoryless map applies forever.
struct StageStrategy {
  Player player = Player::Max;
  std::vector<std::vector<Distribution>> stages;  // stages[j][s]
  std::vector<Distribution> tail;                 // indexed by StateId

  const Distribution& at(std::size_t step, StateId s) const {
    return step < stages.size() ? stages[step][s] : tail[s];
  }
};

// A memoryless strategy viewed as a stage strategy with no staged prefix.
inline StageStrategy as_stage_strategy(const MemorylessStrategy& sigma) {
  StageStrategy st;
  st.player = sigma.player;
  st.tail = sigma.choice;
  return st;
}

// Checks shape: right number of states, action ids in range for the declared
// player, strictly positive entries summing to 1 (exactly; strategies emitted
// by the toolkit are always exact rationals).
inline std::vector<std::string> validate_strategy(const Game& g, const MemorylessStrategy& sigma) {
  std::vector<std::string> diags;
  if (static_cast<int>(sigma.choice.size()) != g.num_states()) {
    diags.push_back("strategy state count does not match the game");
    return diags;
  }
  for (StateId s = 0; s < g.num_states(); ++s) {
    const int limit = sigma.player == Player::Max ? g.num_max(s) : g.num_min(s);
    const Distribution& d = sigma.choice[s];
    if (d.entries.empty()) {
      diags.push_back("state '" + g.state_names[s] + "' has no action mass");
      continue;
    }
    for (const auto& [a, p] : d.entries) {
      if (a < 0 || a >= limit)
        diags.push_back("state '" + g.state_names[s] + "' mixes an unknown action");
      if (p <= 0) diags.push_back("state '" + g.state_names[s] + "' has nonpositive action mass");
    }
    if (d.mass() != 1)
      diags.push_back("state '" + g.state_names[s] + "' action mass " + rat_to_string(d.mass()) +
                      " != 1");
  }
  return diags;
}

// Stage-strategy shape check: every stage and the tail must be a valid
// per-state choice map.
inline std::vector<std::string> validate_strategy(const Game& g, const StageStrategy& sigma) {
  std::vector<std::string> diags;
  for (std::size_t j = 0; j < sigma.stages.size(); ++j) {
    MemorylessStrategy view{sigma.player, sigma.stages[j]};
    for (std::string& d : validate_strategy(g, view))
      diags.push_back("stage " + std::to_string(j) + ": " + std::move(d));
  }
  MemorylessStrategy tail_view{sigma.player, sigma.tail};
  for (std::string& d : validate_strategy(g, tail_view))
    diags.push_back("tail: " + std::move(d));
  return diags;
}

// Lowest-index pure memoryless strategy (the deterministic default).
inline MemorylessStrategy default_strategy(const Game& g, Player who) {
  MemorylessStrategy sigma;
  sigma.player = who;
  sigma.choice.reserve(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) sigma.choice.push_back(Distribution::point(0));
  return sigma;
}

}  // namespace csg
