// JSON serialization tests: bit-identical exact round-trips, strict
// rejection of malformed input, label-based action resolution, target maps,
// and pipeline bundles.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "csg/builtins.hpp"
#include "csg/random_game.hpp"
#include "csg/serialize.hpp"
#include "csg/strategy.hpp"

using namespace csg;

namespace {

// True iff the callable throws a std::runtime_error whose message contains
// the given fragment.
template <class Fn>
bool throws_with(Fn&& fn, const std::string& fragment) {
  try {
    fn();
  } catch (const std::runtime_error& e) {
    return std::string(e.what()).find(fragment) != std::string::npos;
  } catch (...) {
    return false;
  }
  return false;
}

Json minimal_game_json() {
  return parse_json_text(R"({
    "mode": "exact",
    "states": ["s", "top", "bot"],
    "top": "top",
    "bottom": "bot",
    "transitions": [
      {"state": "s", "max_action": "h", "min_action": "w",
       "successors": {"s": "1"}},
      {"state": "s", "max_action": "h", "min_action": "t",
       "successors": {"top": "1"}},
      {"state": "s", "max_action": "r", "min_action": "w",
       "successors": {"top": "1"}},
      {"state": "s", "max_action": "r", "min_action": "t",
       "successors": {"bot": "1"}},
      {"state": "top", "max_action": "a", "min_action": "b",
       "successors": {"top": "1"}},
      {"state": "bot", "max_action": "a", "min_action": "b",
       "successors": {"bot": "1"}}
    ]
  })");
}

bool games_equal(const Game& a, const Game& b) {
  if (a.mode != b.mode || a.state_names != b.state_names || a.top != b.top ||
      a.bottom != b.bottom || a.max_actions != b.max_actions || a.min_actions != b.min_actions)
    return false;
  for (StateId s = 0; s < a.num_states(); ++s)
    for (ActionId i = 0; i < a.num_max(s); ++i)
      for (ActionId j = 0; j < a.num_min(s); ++j)
        if (a.p(s, i, j).entries != b.p(s, i, j).entries) return false;
  return true;
}

}  // namespace

TEST_CASE("exact games round-trip bit-identically through JSON") {
  std::vector<Game> games = {snowball_game(), leaky_mdp_game(3), value_gift_game({Rat(3, 4)}),
                             matching_pennies_game()};
  for (int trial = 0; trial < 30; ++trial) {
    RandomGameSpec spec;
    spec.seed = 500 + trial;
    spec.num_states = 3 + trial % 6;
    games.push_back(random_game(spec));
  }
  for (const Game& g : games) {
    const std::string text = dump_json(game_to_json(g));
    const Game h = game_from_json(parse_json_text(text));
    CHECK(validate(h).empty());
    CHECK(games_equal(g, h));
    CHECK(dump_json(game_to_json(h)) == text);
  }
}

TEST_CASE("float games stabilize after one round-trip") {
  // Float mode serializes probabilities through doubles, so an in-memory
  // game with non-binary rationals changes on the first pass; from then on
  // every probability is a binary rational and the text is a fixpoint.
  RandomGameSpec spec;
  spec.seed = 41;
  spec.mode = Mode::Float;
  const Game g = random_game(spec);
  const Game h = game_from_json(parse_json_text(dump_json(game_to_json(g))));
  CHECK(validate(h).empty());  // double rounding stays inside the mass tolerance
  const std::string text = dump_json(game_to_json(h));
  const Game k = game_from_json(parse_json_text(text));
  CHECK(games_equal(h, k));
  CHECK(dump_json(game_to_json(k)) == text);
}

TEST_CASE("the minimal hand-written game parses to the snowball game") {
  const Game g = game_from_json(minimal_game_json());
  CHECK(validate(g).empty());
  CHECK(games_equal(g, snowball_game()));
}

TEST_CASE("action labels are indexed by first appearance") {
  Json j = minimal_game_json();
  // Swap the two rows of s's Max action table: r-records come first now.
  std::swap(j["transitions"][0], j["transitions"][2]);
  std::swap(j["transitions"][1], j["transitions"][3]);
  const Game g = game_from_json(j);
  CHECK(g.max_actions[0] == std::vector<std::string>{"r", "h"});
  CHECK(validate(g).empty());
  // Same game up to the action reindexing.
  CHECK(g.p(0, 1, 0).at(0) == 1);          // (h,w) stays
  CHECK(g.p(0, 0, 1).at(g.bottom) == 1);   // (r,t) loses
}

TEST_CASE("games: malformed documents are rejected with precise messages") {
  auto mutate = [](auto&& fn) {
    Json j = minimal_game_json();
    fn(j);
    return j;
  };
  CHECK(throws_with([&] { game_from_json(mutate([](Json& j) { j["extra"] = 1; })); },
                    "game: unknown field 'extra'"));
  CHECK(throws_with([&] { game_from_json(mutate([](Json& j) { j.erase("transitions"); })); },
                    "game: missing field 'transitions'"));
  CHECK(throws_with([&] { game_from_json(mutate([](Json& j) { j["mode"] = "fast"; })); },
                    "mode must be \"exact\" or \"float\""));
  CHECK(throws_with([&] { game_from_json(mutate([](Json& j) { j["states"][1] = "s"; })); },
                    "duplicate state name 's'"));
  CHECK(throws_with([&] { game_from_json(mutate([](Json& j) { j["top"] = "zenith"; })); },
                    "game top: unknown state 'zenith'"));
  CHECK(throws_with([&] { game_from_json(mutate([](Json& j) { j["transitions"] = 7; })); },
                    "transitions must be an array"));
  CHECK(throws_with(
      [&] { game_from_json(mutate([](Json& j) { j["transitions"][0]["note"] = "hi"; })); },
      "transition: unknown field 'note'"));
  CHECK(throws_with(
      [&] {
        game_from_json(mutate([](Json& j) { j["transitions"][0]["successors"] = Json::object(); }));
      },
      "successors must be a nonempty object"));
  CHECK(throws_with(
      [&] {
        game_from_json(
            mutate([](Json& j) { j["transitions"][0]["successors"] = {{"mars", "1"}}; }));
      },
      "transition successor: unknown state 'mars'"));
  CHECK(throws_with(
      [&] {
        game_from_json(mutate([](Json& j) { j["transitions"][0]["successors"]["s"] = 0.5; }));
      },
      "exact mode needs \"num/den\" strings"));
  CHECK(throws_with(
      [&] {
        game_from_json(mutate([](Json& j) {
          j["mode"] = "float";
          j["transitions"][0]["successors"]["s"] = "1/2";
        }));
      },
      "float mode needs plain numbers"));
  CHECK(throws_with(
      [&] {
        game_from_json(mutate([](Json& j) { j["transitions"][0]["successors"]["s"] = "0"; }));
      },
      "strictly positive"));
  CHECK(throws_with(
      [&] {
        game_from_json(mutate([](Json& j) { j["transitions"][0]["successors"]["s"] = "1/0"; }));
      },
      "zero denominator"));
  CHECK(throws_with(
      [&] {
        game_from_json(mutate([](Json& j) { j["transitions"][0]["successors"]["s"] = "0x1"; }));
      },
      "bad rational literal"));
  CHECK(throws_with(
      [&] {
        game_from_json(mutate(
            [](Json& j) { j["transitions"].push_back(j["transitions"][0]); }));
      },
      "duplicate transition record for state 's'"));
  CHECK(throws_with(
      [&] { game_from_json(mutate([](Json& j) { j["transitions"][0]["max_action"] = ""; })); },
      "action labels must be nonempty strings"));
  CHECK(throws_with([&] { parse_json_text("{nope"); }, "invalid JSON"));
}

TEST_CASE("a document with a missing action pair fails validation, not parsing") {
  Json j = minimal_game_json();
  j["transitions"].erase(1);  // drop the (h,t) record
  const Game g = game_from_json(j);
  const std::vector<std::string> diags = validate(g);
  REQUIRE(!diags.empty());
  CHECK(diags.front().find("empty distribution") != std::string::npos);
}

TEST_CASE("strategies round-trip for both players") {
  const Game g = snowball_game();

  MemorylessStrategy sigma;
  sigma.player = Player::Max;
  sigma.choice = {Distribution({{0, Rat(9, 10)}, {1, Rat(1, 10)}}), Distribution::point(0),
                  Distribution::point(0)};
  REQUIRE(validate_strategy(g, sigma).empty());
  const std::string text = dump_json(strategy_to_json(g, sigma));
  const MemorylessStrategy back = strategy_from_json(g, parse_json_text(text));
  CHECK(back.player == Player::Max);
  CHECK(back.choice[0].entries == sigma.choice[0].entries);
  CHECK(dump_json(strategy_to_json(g, back)) == text);

  MemorylessStrategy pi;
  pi.player = Player::Min;
  pi.choice = {Distribution({{0, Rat(1, 3)}, {1, Rat(2, 3)}}), Distribution::point(0),
               Distribution::point(0)};
  const Json pj = strategy_to_json(g, pi);
  CHECK(pj.at("choice").at("s").contains("w"));  // Min labels, not Max labels
  const MemorylessStrategy pback = strategy_from_json(g, pj);
  CHECK(pback.player == Player::Min);
  CHECK(pback.choice[0].entries == pi.choice[0].entries);
}

TEST_CASE("strategies: malformed documents are rejected") {
  const Game g = snowball_game();
  MemorylessStrategy sigma;
  sigma.player = Player::Max;
  sigma.choice = {Distribution::point(0), Distribution::point(0), Distribution::point(0)};
  Json base = strategy_to_json(g, sigma);

  auto mutate = [&](auto&& fn) {
    Json j = base;
    fn(j);
    return j;
  };
  CHECK(throws_with([&] { strategy_from_json(g, mutate([](Json& j) { j["player"] = "both"; })); },
                    "player must be \"max\" or \"min\""));
  CHECK(throws_with([&] { strategy_from_json(g, mutate([](Json& j) { j["why"] = 1; })); },
                    "strategy: unknown field 'why'"));
  CHECK(throws_with(
      [&] { strategy_from_json(g, mutate([](Json& j) { j["choice"].erase("top"); })); },
      "no action mix for state 'top'"));
  CHECK(throws_with(
      [&] { strategy_from_json(g, mutate([](Json& j) { j["choice"]["moon"] = {{"h", "1"}}; })); },
      "unknown state 'moon'"));
  CHECK(throws_with(
      [&] { strategy_from_json(g, mutate([](Json& j) { j["choice"]["s"] = {{"z", "1"}}; })); },
      "no action labeled 'z'"));
  CHECK(throws_with(
      [&] { strategy_from_json(g, mutate([](Json& j) { j["choice"]["s"] = Json::object(); })); },
      "nonempty objects"));
  // Min labels are rejected in a Max strategy.
  CHECK(throws_with(
      [&] { strategy_from_json(g, mutate([](Json& j) { j["choice"]["s"] = {{"w", "1"}}; })); },
      "no action labeled 'w'"));
}

TEST_CASE("target maps accept 0 and 1 and reject everything outside [0, 1]") {
  const Game g = snowball_game();
  const auto ts = targets_from_json(
      g, parse_json_text(R"({"s": "3/4", "top": "1", "bot": "0"})"));
  REQUIRE(ts.size() == 3);
  Rat at_s, at_top, at_bot;
  for (const auto& [s, v] : ts) {
    if (s == 0) at_s = v;
    if (s == g.top) at_top = v;
    if (s == g.bottom) at_bot = v;
  }
  CHECK(at_s == Rat(3, 4));
  CHECK(at_top == 1);
  CHECK(at_bot == 0);

  CHECK(throws_with([&] { targets_from_json(g, parse_json_text(R"({"s": "3/2"})")); },
                    "must lie in [0, 1]"));
  CHECK(throws_with([&] { targets_from_json(g, parse_json_text(R"({"s": "-1/2"})")); },
                    "must lie in [0, 1]"));
  CHECK(throws_with([&] { targets_from_json(g, parse_json_text(R"({"s": 0.5})")); },
                    "values must be \"num/den\" strings"));
  CHECK(throws_with([&] { targets_from_json(g, parse_json_text(R"({"pluto": "1/2"})")); },
                    "unknown state 'pluto'"));

  // Round trip.
  const Json back = targets_to_json(g, ts);
  const auto again = targets_from_json(g, back);
  CHECK(again == ts);
}

TEST_CASE("bundles round-trip bit-identically") {
  Bundle b;
  b.objective = Objective::Reach;
  b.game = snowball_game();
  b.strategy.player = Player::Max;
  b.strategy.choice = {Distribution({{0, Rat(9, 10)}, {1, Rat(1, 10)}}), Distribution::point(0),
                       Distribution::point(0)};
  b.targets = {{0, Rat(9, 10)}};
  b.info["eps"] = "1/10";

  const std::string text = dump_json(bundle_to_json(b));
  const Bundle c = bundle_from_json(parse_json_text(text));
  CHECK(c.objective == Objective::Reach);
  CHECK(games_equal(b.game, c.game));
  CHECK(c.strategy.choice[0].entries == b.strategy.choice[0].entries);
  CHECK(c.targets == b.targets);
  CHECK(c.info.at("eps") == "1/10");
  CHECK(dump_json(bundle_to_json(c)) == text);
}

TEST_CASE("bundles: malformed documents are rejected") {
  Bundle b;
  b.objective = Objective::Avoid;
  b.game = snowball_game();
  b.strategy.player = Player::Max;
  b.strategy.choice = {Distribution::point(0), Distribution::point(0), Distribution::point(0)};
  Json base = bundle_to_json(b);

  auto mutate = [&](auto&& fn) {
    Json j = base;
    fn(j);
    return j;
  };
  CHECK(bundle_from_json(base).objective == Objective::Avoid);
  CHECK(throws_with([&] { bundle_from_json(mutate([](Json& j) { j["kind"] = "parcel"; })); },
                    "kind must be \"bundle\""));
  CHECK(throws_with([&] { bundle_from_json(mutate([](Json& j) { j["objective"] = "win"; })); },
                    "objective must be \"reach\" or \"avoid\""));
  CHECK(throws_with([&] { bundle_from_json(mutate([](Json& j) { j["zzz"] = 0; })); },
                    "bundle: unknown field 'zzz'"));
  CHECK(throws_with([&] { bundle_from_json(mutate([](Json& j) { j.erase("strategy"); })); },
                    "bundle: missing field 'strategy'"));
}
