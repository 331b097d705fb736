// Small named example games.
//
//  - snowball: the classic one-state concurrent game (hide/run vs
//    wait/throw) whose value is 1 but is only approached, never attained;
//    the n-step values are n/(n+1).
//  - leaky_mdp(k): one Min action everywhere; Max actions a_0..a_k each
//    leak 2^-i to the losing sink. Every memoryless strategy leaks forever,
//    so the long-run avoid value of the truncation is 0 even though finite
//    horizons look safe.
//  - value_gift(Q): a single Max action faces Min lotteries q*s1 + (1-q)*bot
//    for q in Q, feeding an embedded snowball state s1; the value min(Q) is
//    approached but never attained, and Min's higher-q actions strictly
//    gift value.
//  - matching_pennies: 2x2 coordination with value 1/2.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "csg/game.hpp"
#include "csg/rational.hpp"

namespace csg {

namespace detail {

inline void add_state(Game& g, const std::string& name, std::vector<std::string> acts_max,
                      std::vector<std::string> acts_min) {
  g.state_names.push_back(name);
  g.trans.emplace_back(acts_max.size(), std::vector<Distribution>(acts_min.size()));
  g.max_actions.push_back(std::move(acts_max));
  g.min_actions.push_back(std::move(acts_min));
}

inline void finish_sinks(Game& g) {
  for (StateId s : {g.top, g.bottom}) g.trans[s][0][0] = Distribution::point(s);
}

// The snowball state's four rows: h(ide)/r(un) vs w(ait)/t(hrow).
inline void wire_snowball_state(Game& g, StateId s) {
  g.trans[s][0][0] = Distribution::point(s);         // hide vs wait: stay
  g.trans[s][0][1] = Distribution::point(g.top);     // hide vs throw: dodge and win
  g.trans[s][1][0] = Distribution::point(g.top);     // run vs wait: escape
  g.trans[s][1][1] = Distribution::point(g.bottom);  // run vs throw: hit
}

}  // namespace detail

inline Game snowball_game() {
  Game g;
  g.mode = Mode::Exact;
  detail::add_state(g, "s", {"h", "r"}, {"w", "t"});
  detail::add_state(g, "top", {"a"}, {"b"});
  detail::add_state(g, "bot", {"a"}, {"b"});
  g.top = 1;
  g.bottom = 2;
  detail::finish_sinks(g);
  detail::wire_snowball_state(g, 0);
  require_valid(g, "snowball");
  return g;
}

inline Game leaky_mdp_game(int k) {
  if (k < 1) throw std::invalid_argument("leaky_mdp: k must be >= 1");
  Game g;
  g.mode = Mode::Exact;
  std::vector<std::string> acts;  // Max actions a0..ak
  for (int i = 0; i <= k; ++i) acts.push_back("a" + std::to_string(i));
  detail::add_state(g, "s", std::move(acts), {"b"});
  detail::add_state(g, "top", {"a"}, {"b"});
  detail::add_state(g, "bot", {"a"}, {"b"});
  g.top = 1;
  g.bottom = 2;
  detail::finish_sinks(g);
  Rat leak(1);
  for (int i = 0; i <= k; ++i) {
    Distribution d;
    if (leak < 1) d.entries.emplace_back(0, Rat(1) - leak);
    d.entries.emplace_back(g.bottom, leak);
    d.normalize_shape();
    g.trans[0][i][0] = d;
    leak /= 2;
  }
  require_valid(g, "leaky_mdp");
  return g;
}

inline Game value_gift_game(const std::vector<Rat>& qs) {
  if (qs.empty()) throw std::invalid_argument("value_gift: need at least one lottery");
  for (const Rat& q : qs)
    if (!(q > Rat(1, 2) && q < 1))
      throw std::invalid_argument("value_gift: lottery weights must lie strictly in (1/2, 1)");
  Game g;
  g.mode = Mode::Exact;
  std::vector<std::string> lotteries;  // Min actions b_q, one per lottery weight
  for (const Rat& q : qs) lotteries.push_back("b_" + rat_to_string(q));
  detail::add_state(g, "s0", {"a"}, std::move(lotteries));
  detail::add_state(g, "s1", {"h", "r"}, {"w", "t"});
  detail::add_state(g, "top", {"a"}, {"b"});
  detail::add_state(g, "bot", {"a"}, {"b"});
  g.top = 2;
  g.bottom = 3;
  detail::finish_sinks(g);
  for (int i = 0; i < static_cast<int>(qs.size()); ++i) {
    Distribution d;
    d.entries.emplace_back(1, qs[i]);                    // into the snowball state
    d.entries.emplace_back(g.bottom, Rat(1) - qs[i]);
    d.normalize_shape();
    g.trans[0][0][i] = d;
  }
  detail::wire_snowball_state(g, 1);
  require_valid(g, "value_gift");
  return g;
}

inline Game matching_pennies_game() {
  Game g;
  g.mode = Mode::Exact;
  detail::add_state(g, "s", {"h", "t"}, {"h", "t"});
  detail::add_state(g, "top", {"a"}, {"b"});
  detail::add_state(g, "bot", {"a"}, {"b"});
  g.top = 1;
  g.bottom = 2;
  detail::finish_sinks(g);
  g.trans[0][0][0] = Distribution::point(g.top);
  g.trans[0][0][1] = Distribution::point(g.bottom);
  g.trans[0][1][0] = Distribution::point(g.bottom);
  g.trans[0][1][1] = Distribution::point(g.top);
  require_valid(g, "matching_pennies");
  return g;
}

// Registry for the CLI. `k` feeds leaky_mdp's depth; `qs` feeds
// value_gift's lotteries (default {3/4} when empty).
inline Game builtin_game(const std::string& name, int k = 3, std::vector<Rat> qs = {}) {
  if (name == "snowball") return snowball_game();
  if (name == "leaky_mdp") return leaky_mdp_game(k);
  if (name == "value_gift") {
    if (qs.empty()) qs = {Rat(3, 4)};
    return value_gift_game(qs);
  }
  if (name == "matching_pennies") return matching_pennies_game();
  throw std::invalid_argument("unknown example game: " + name +
                              " (known: snowball, leaky_mdp, value_gift, matching_pennies)");
}

}  // namespace csg
