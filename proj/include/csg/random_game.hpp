// Seeded random game generation. Fully deterministic for a given spec:
// the same seed always yields the same game, independent of platform.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "csg/game.hpp"
#include "csg/prng.hpp"
#include "csg/rational.hpp"

namespace csg {

struct RandomGameSpec {
  std::uint64_t seed = 1;
  int num_states = 6;      // includes the two sinks; must be >= 3
  int max_a = 3;           // upper bound on Max action-set sizes
  int max_b = 3;           // upper bound on Min action-set sizes
  double density = 0.5;    // chance each state joins a distribution's support
  bool turn_based = false; // force one side to a single action in every state
  Mode mode = Mode::Exact;
};

inline Game random_game(const RandomGameSpec& spec) {
  if (spec.num_states < 3) throw std::invalid_argument("random_game: need at least 3 states");
  if (spec.max_a < 1 || spec.max_b < 1)
    throw std::invalid_argument("random_game: need at least 1 action per side");
  Prng rng(spec.seed, 0);
  Game g;
  g.mode = spec.mode;
  const int n = spec.num_states;
  g.top = n - 2;
  g.bottom = n - 1;
  for (int s = 0; s < n - 2; ++s) g.state_names.push_back("s" + std::to_string(s));
  g.state_names.push_back("top");
  g.state_names.push_back("bot");
  auto action_names = [](const char* stem, int count) {
    std::vector<std::string> names;
    for (int i = 0; i < count; ++i) names.push_back(stem + std::to_string(i));
    return names;
  };
  g.max_actions.assign(n, action_names("a", 1));
  g.min_actions.assign(n, action_names("b", 1));
  for (int s = 0; s < n - 2; ++s) {
    int na = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.max_a)));
    int nb = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(spec.max_b)));
    if (spec.turn_based) {
      if (rng.next_below(2) == 0)
        nb = 1;
      else
        na = 1;
    }
    g.max_actions[s] = action_names("a", na);
    g.min_actions[s] = action_names("b", nb);
  }
  g.trans.resize(n);
  for (int s = 0; s < n; ++s)
    g.trans[s].assign(g.num_max(s), std::vector<Distribution>(g.num_min(s)));
  g.trans[g.top][0][0] = Distribution::point(g.top);
  g.trans[g.bottom][0][0] = Distribution::point(g.bottom);
  for (int s = 0; s < n - 2; ++s) {
    for (ActionId a = 0; a < g.num_max(s); ++a) {
      for (ActionId b = 0; b < g.num_min(s); ++b) {
        Distribution d;
        Rat total(0);
        for (int t = 0; t < n; ++t) {
          if (rng.next_uniform() >= spec.density) continue;
          Rat w(1 + static_cast<long>(rng.next_below(8)));
          d.entries.emplace_back(t, w);
          total += w;
        }
        if (d.entries.empty()) {
          int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
          d.entries.emplace_back(t, Rat(1));
          total = 1;
        }
        for (auto& [t, w] : d.entries) w /= total;
        d.normalize_shape();
        g.trans[s][a][b] = std::move(d);
      }
    }
  }
  require_valid(g, "random_game");
  return g;
}

}  // namespace csg
