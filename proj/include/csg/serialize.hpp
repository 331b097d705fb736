// Strict JSON (de)serialization for games, strategies, target maps, value
// reports, and pipeline bundles.
//
// Game files: {"mode": "exact"|"float", "states": [names...], "top": name,
// "bottom": name, "transitions": [{state, max_action, min_action,
// successors: {name: prob}}...]}. Probabilities are "num/den" strings in
// exact mode and plain JSON numbers in float mode; unknown fields are
// rejected everywhere, including inside transition records. Exact-mode
// round-trips are bit-identical.
//
// Strategy files: {"player": "max"|"min", "mode": ..., "choice":
// {state: {action-label: prob}}} with every game state present.
//
// Bundles wrap a transformed game together with the synthesized strategy and
// verification targets so synthesis output can be piped into verification:
// {"kind": "bundle", "objective": ..., "game": ..., "strategy": ...,
// "targets": {state: "num/den"}, "info": {...}}.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "csg/bellman.hpp"
#include "csg/game.hpp"
#include "csg/rational.hpp"
#include "csg/strategy.hpp"

namespace csg {

using Json = nlohmann::json;

namespace detail {

inline void require_keys(const Json& j, const std::vector<std::string>& required,
                         const std::vector<std::string>& optional, const std::string& what) {
  if (!j.is_object()) throw std::runtime_error(what + ": expected a JSON object");
  for (const std::string& k : required)
    if (!j.contains(k)) throw std::runtime_error(what + ": missing field '" + k + "'");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    bool known = false;
    for (const std::string& r : required) known = known || (k == r);
    for (const std::string& o : optional) known = known || (k == o);
    if (!known) throw std::runtime_error(what + ": unknown field '" + k + "'");
  }
}

inline Rat parse_prob(const Json& j, Mode mode, const std::string& where) {
  Rat p;
  if (mode == Mode::Exact) {
    if (!j.is_string())
      throw std::runtime_error(where + ": exact mode needs \"num/den\" strings");
    try {
      p = parse_rat(j.get<std::string>());
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  } else {
    if (!j.is_number())
      throw std::runtime_error(where + ": float mode needs plain numbers");
    p = rat_from_double(j.get<double>());
  }
  if (p <= 0) throw std::runtime_error(where + ": probabilities must be strictly positive");
  return p;
}

inline Json prob_to_json(const Rat& p, Mode mode) {
  if (mode == Mode::Exact) return rat_to_string(p);
  return rat_to_double(p);
}

inline Mode parse_mode(const Json& j, const std::string& what) {
  if (j.is_string() && j.get<std::string>() == "exact") return Mode::Exact;
  if (j.is_string() && j.get<std::string>() == "float") return Mode::Float;
  throw std::runtime_error(what + ": mode must be \"exact\" or \"float\"");
}

inline std::string parse_action_label(const Json& j, const std::string& where) {
  if (!j.is_string() || j.get<std::string>().empty())
    throw std::runtime_error(where + ": action labels must be nonempty strings");
  return j.get<std::string>();
}

}  // namespace detail

inline Json game_to_json(const Game& g) {
  Json j;
  j["mode"] = g.mode == Mode::Exact ? "exact" : "float";
  j["states"] = g.state_names;
  j["top"] = g.state_names[g.top];
  j["bottom"] = g.state_names[g.bottom];
  Json trans = Json::array();
  for (StateId s = 0; s < g.num_states(); ++s)
    for (ActionId a = 0; a < g.num_max(s); ++a)
      for (ActionId b = 0; b < g.num_min(s); ++b) {
        Json rec;
        rec["state"] = g.state_names[s];
        rec["max_action"] = g.max_actions[s][a];
        rec["min_action"] = g.min_actions[s][b];
        Json succ = Json::object();
        for (const auto& [t, p] : g.p(s, a, b).entries)
          succ[g.state_names[t]] = detail::prob_to_json(p, g.mode);
        rec["successors"] = std::move(succ);
        trans.push_back(std::move(rec));
      }
  j["transitions"] = std::move(trans);
  return j;
}

inline Game game_from_json(const Json& j) {
  detail::require_keys(j, {"mode", "states", "top", "bottom", "transitions"}, {}, "game");
  Game g;
  g.mode = detail::parse_mode(j.at("mode"), "game");
  if (!j.at("states").is_array()) throw std::runtime_error("game: states must be an array");
  std::map<std::string, StateId> index;
  for (const Json& name : j.at("states")) {
    if (!name.is_string()) throw std::runtime_error("game: state names must be strings");
    std::string n = name.get<std::string>();
    if (index.count(n)) throw std::runtime_error("game: duplicate state name '" + n + "'");
    index[n] = static_cast<StateId>(g.state_names.size());
    g.state_names.push_back(n);
  }
  auto lookup = [&](const Json& name, const std::string& where) -> StateId {
    if (!name.is_string()) throw std::runtime_error(where + ": expected a state name");
    auto it = index.find(name.get<std::string>());
    if (it == index.end())
      throw std::runtime_error(where + ": unknown state '" + name.get<std::string>() + "'");
    return it->second;
  };
  g.top = lookup(j.at("top"), "game top");
  g.bottom = lookup(j.at("bottom"), "game bottom");

  const Json& trans = j.at("transitions");
  if (!trans.is_array()) throw std::runtime_error("game: transitions must be an array");
  struct Rec {
    StateId s;
    ActionId a, b;
    Distribution d;
  };
  std::vector<Rec> recs;
  const int n = g.num_states();
  // Action labels per state, indexed in order of first appearance.
  g.max_actions.assign(n, {});
  g.min_actions.assign(n, {});
  auto action_id = [](std::vector<std::string>& labels, const std::string& lab) -> ActionId {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == lab) return static_cast<ActionId>(i);
    labels.push_back(lab);
    return static_cast<ActionId>(labels.size() - 1);
  };
  for (const Json& rec : trans) {
    detail::require_keys(rec, {"state", "max_action", "min_action", "successors"}, {},
                         "transition");
    Rec r;
    r.s = lookup(rec.at("state"), "transition state");
    r.a = action_id(g.max_actions[r.s],
                    detail::parse_action_label(rec.at("max_action"), "transition max_action"));
    r.b = action_id(g.min_actions[r.s],
                    detail::parse_action_label(rec.at("min_action"), "transition min_action"));
    const Json& succ = rec.at("successors");
    if (!succ.is_object() || succ.empty())
      throw std::runtime_error("transition: successors must be a nonempty object");
    for (auto it = succ.begin(); it != succ.end(); ++it) {
      StateId t = lookup(Json(it.key()), "transition successor");
      r.d.entries.emplace_back(t, detail::parse_prob(it.value(), g.mode, "transition successor"));
    }
    r.d.normalize_shape();
    recs.push_back(std::move(r));
  }
  g.trans.resize(n);
  std::vector<std::vector<std::vector<bool>>> seen(n);
  for (StateId s = 0; s < n; ++s) {
    g.trans[s].assign(g.num_max(s), std::vector<Distribution>(g.num_min(s)));
    seen[s].assign(g.num_max(s), std::vector<bool>(g.num_min(s), false));
  }
  for (Rec& r : recs) {
    if (seen[r.s][r.a][r.b])
      throw std::runtime_error("game: duplicate transition record for state '" +
                               g.state_names[r.s] + "'");
    seen[r.s][r.a][r.b] = true;
    g.trans[r.s][r.a][r.b] = std::move(r.d);
  }
  return g;
}

inline Json strategy_to_json(const Game& g, const MemorylessStrategy& sigma,
                             Mode mode = Mode::Exact) {
  Json j;
  j["player"] = sigma.player == Player::Max ? "max" : "min";
  j["mode"] = mode == Mode::Exact ? "exact" : "float";
  const auto& tables = sigma.player == Player::Max ? g.max_actions : g.min_actions;
  Json choice = Json::object();
  for (StateId s = 0; s < g.num_states(); ++s) {
    Json row = Json::object();
    for (const auto& [a, p] : sigma.at(s).entries)
      row[tables[s][a]] = detail::prob_to_json(p, mode);
    choice[g.state_names[s]] = std::move(row);
  }
  j["choice"] = std::move(choice);
  return j;
}

inline MemorylessStrategy strategy_from_json(const Game& g, const Json& j) {
  detail::require_keys(j, {"player", "mode", "choice"}, {}, "strategy");
  MemorylessStrategy sigma;
  const Json& player = j.at("player");
  if (player.is_string() && player.get<std::string>() == "max")
    sigma.player = Player::Max;
  else if (player.is_string() && player.get<std::string>() == "min")
    sigma.player = Player::Min;
  else
    throw std::runtime_error("strategy: player must be \"max\" or \"min\"");
  Mode mode = detail::parse_mode(j.at("mode"), "strategy");
  const auto& tables = sigma.player == Player::Max ? g.max_actions : g.min_actions;
  const Json& choice = j.at("choice");
  if (!choice.is_object()) throw std::runtime_error("strategy: choice must be an object");
  sigma.choice.assign(g.num_states(), Distribution{});
  std::vector<bool> given(g.num_states(), false);
  for (auto it = choice.begin(); it != choice.end(); ++it) {
    const std::optional<StateId> s = g.state_index(it.key());
    if (!s) throw std::runtime_error("strategy: unknown state '" + it.key() + "'");
    given[*s] = true;
    const Json& row = it.value();
    if (!row.is_object() || row.empty())
      throw std::runtime_error("strategy: choice rows must be nonempty objects");
    Distribution d;
    for (auto at = row.begin(); at != row.end(); ++at) {
      ActionId a = -1;
      for (std::size_t i = 0; i < tables[*s].size(); ++i)
        if (tables[*s][i] == at.key()) a = static_cast<ActionId>(i);
      if (a < 0)
        throw std::runtime_error("strategy: state '" + it.key() + "' has no action labeled '" +
                                 at.key() + "'");
      d.entries.emplace_back(a, detail::parse_prob(at.value(), mode, "strategy action"));
    }
    d.normalize_shape();
    sigma.choice[*s] = std::move(d);
  }
  for (StateId s = 0; s < g.num_states(); ++s)
    if (!given[s])
      throw std::runtime_error("strategy: no action mix for state '" + g.state_names[s] + "'");
  return sigma;
}

// Target files: {state: "num/den"} — always exact.
inline std::vector<std::pair<StateId, Rat>> targets_from_json(const Game& g, const Json& j) {
  if (!j.is_object()) throw std::runtime_error("targets: expected an object of state -> value");
  std::vector<std::pair<StateId, Rat>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::optional<StateId> s = g.state_index(it.key());
    if (!s) throw std::runtime_error("targets: unknown state '" + it.key() + "'");
    if (!it.value().is_string())
      throw std::runtime_error("targets: values must be \"num/den\" strings");
    Rat t;
    try {
      t = parse_rat(it.value().get<std::string>());
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("target value: ") + e.what());
    }
    if (t < 0 || t > 1) throw std::runtime_error("targets: values must lie in [0, 1]");
    out.emplace_back(*s, t);
  }
  return out;
}

inline Json targets_to_json(const Game& g, const std::vector<std::pair<StateId, Rat>>& targets) {
  Json j = Json::object();
  for (const auto& [s, v] : targets) j[g.state_names[s]] = rat_to_string(v);
  return j;
}

// Pipeline bundle: a game plus a strategy (and optional verification
// targets / free-form info), produced by synthesis and consumed by verify.
struct Bundle {
  Objective objective = Objective::Reach;
  Game game;
  MemorylessStrategy strategy;
  std::vector<std::pair<StateId, Rat>> targets;
  Json info = Json::object();
};

inline Json bundle_to_json(const Bundle& b) {
  Json j;
  j["kind"] = "bundle";
  j["objective"] = b.objective == Objective::Reach ? "reach" : "avoid";
  j["game"] = game_to_json(b.game);
  j["strategy"] = strategy_to_json(b.game, b.strategy);
  j["targets"] = targets_to_json(b.game, b.targets);
  j["info"] = b.info;
  return j;
}

inline Bundle bundle_from_json(const Json& j) {
  detail::require_keys(j, {"kind", "objective", "game", "strategy"}, {"targets", "info"},
                       "bundle");
  if (!(j.at("kind").is_string() && j.at("kind").get<std::string>() == "bundle"))
    throw std::runtime_error("bundle: kind must be \"bundle\"");
  Bundle b;
  const Json& obj = j.at("objective");
  if (obj.is_string() && obj.get<std::string>() == "reach")
    b.objective = Objective::Reach;
  else if (obj.is_string() && obj.get<std::string>() == "avoid")
    b.objective = Objective::Avoid;
  else
    throw std::runtime_error("bundle: objective must be \"reach\" or \"avoid\"");
  b.game = game_from_json(j.at("game"));
  b.strategy = strategy_from_json(b.game, j.at("strategy"));
  if (j.contains("targets")) b.targets = targets_from_json(b.game, j.at("targets"));
  if (j.contains("info")) b.info = j.at("info");
  return b;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace csg
