// Optimal-where-possible synthesis tests: value-zero pruning, the ranked
// witness stratification that carves out the exactly-winnable region, the
// leak budget derived from the classification gap, and the end-to-end
// pipeline with its certificate chain.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <utility>
#include <vector>

#include "csg/builtins.hpp"
#include "csg/exact_values.hpp"
#include "csg/optimal_synth.hpp"
#include "csg/random_game.hpp"
#include "csg/verify.hpp"

using namespace csg;

namespace {

// Snowball plus an extra doomed state z: running into the throw now lands in
// z, which drains to the losing sink. Values are (1, 0, 1, 0).
Game snowball_with_dead_state() {
  Game g;
  g.mode = Mode::Exact;
  g.state_names = {"s", "z", "top", "bot"};
  g.max_actions = {{"h", "r"}, {"a"}, {"a"}, {"b"}};
  g.min_actions = {{"w", "t"}, {"b"}, {"b"}, {"b"}};
  g.top = 2;
  g.bottom = 3;
  g.trans.resize(4);
  g.trans[0] = {{Distribution::point(0), Distribution::point(2)},
                {Distribution::point(2), Distribution::point(1)}};
  g.trans[1] = {{Distribution::point(3)}};
  g.trans[2] = {{Distribution::point(2)}};
  g.trans[3] = {{Distribution::point(3)}};
  require_valid(g, "snowball_with_dead_state");
  return g;
}

// One Max action, two Min lotteries over the sinks: the honest reply pays
// exactly the value 3/4, the generous one gifts 9/10.
Game gap_game() {
  Game g;
  g.mode = Mode::Exact;
  g.state_names = {"u", "top", "bot"};
  g.max_actions = {{"a"}, {"a"}, {"b"}};
  g.min_actions = {{"b1", "b2"}, {"b"}, {"b"}};
  g.top = 1;
  g.bottom = 2;
  g.trans.resize(3);
  g.trans[0] = {{Distribution({{1, Rat(3, 4)}, {2, Rat(1, 4)}}),
                 Distribution({{1, Rat(9, 10)}, {2, Rat(1, 10)}})}};
  g.trans[1] = {{Distribution::point(1)}};
  g.trans[2] = {{Distribution::point(2)}};
  require_valid(g, "gap_game");
  return g;
}

}  // namespace

TEST_CASE("pruning merges value-zero states into the losing sink") {
  const Game g = snowball_with_dead_state();
  const std::vector<Rat> v = {Rat(1), Rat(0), Rat(1), Rat(0)};
  const Pruning pr = prune_value_zero(g, v);

  CHECK(pr.old_of_new == std::vector<StateId>{0, 2, 3});
  CHECK(pr.new_of_old == std::vector<StateId>{0, 2, 1, 2});
  CHECK(pr.game.state_names == std::vector<std::string>{"s", "top", "bot"});
  CHECK(pr.game.top == 1);
  CHECK(pr.game.bottom == 2);
  // The edge into z now lands in the merged bottom.
  CHECK(pr.game.p(0, 1, 1).entries == Distribution::point(2).entries);
  CHECK(pr.game.p(0, 0, 0).entries == Distribution::point(0).entries);

  // theta admits near-zero values into the merge.
  const Pruning soft = prune_value_zero(g, {Rat(1), Rat(1, 100), Rat(1), Rat(0)}, Rat(1, 50));
  CHECK(soft.old_of_new == std::vector<StateId>{0, 2, 3});

  CHECK_THROWS_AS(prune_value_zero(g, {Rat(1), Rat(0), Rat(1)}), std::invalid_argument);
  CHECK_THROWS_AS(prune_value_zero(g, {Rat(1), Rat(0), Rat(0), Rat(0)}), std::invalid_argument);
  CHECK_THROWS_AS(prune_value_zero(g, {Rat(1), Rat(0), Rat(1), Rat(1, 2)}),
                  std::invalid_argument);
}

TEST_CASE("stratification ranks matching pennies but not the snowball") {
  {
    const Game g = matching_pennies_game();
    const std::vector<Rat> v = {Rat(1, 2), Rat(1), Rat(0)};
    std::vector<bool> region(3, true);
    const RankResult rr = r_stratification(g, region, v);
    CHECK(rr.rank == std::vector<int>{1, 0, -1});
    REQUIRE(rr.levels.size() == 2);
    CHECK(rr.levels[0] == std::vector<StateId>{1});
    CHECK(rr.levels[1] == std::vector<StateId>{0});
    // The even coin holds both replies at 1/2 and pushes 1/2 into the target.
    CHECK(rr.alpha[0].at(0) == Rat(1, 2));
    CHECK(rr.alpha[0].at(1) == Rat(1, 2));
    CHECK(rr.delta[0] == Rat(1, 2));
  }
  {
    const Game g = snowball_game();
    const std::vector<Rat> v = {Rat(1), Rat(1), Rat(0)};
    std::vector<bool> region(3, true);
    const RankResult rr = r_stratification(g, region, v);
    // Holding the value 1 forces pure hiding, which never makes progress.
    CHECK(rr.rank == std::vector<int>{-1, 0, -1});

    std::vector<bool> no_top = {true, false, true};
    CHECK_THROWS_AS(r_stratification(g, no_top, v), std::invalid_argument);
    CHECK_THROWS_AS(r_stratification(g, {true, true}, v), std::invalid_argument);
  }
}

TEST_CASE("the greatest closed region separates exact from eps-only states") {
  {
    const Game g = snowball_game();
    const Partition part = compute_S0(g, {Rat(1), Rat(1), Rat(0)});
    CHECK(part.s0 == std::vector<StateId>{1, 2});
    CHECK(part.s1 == std::vector<StateId>{0});
  }
  {
    const Game g = matching_pennies_game();
    const Partition part = compute_S0(g, {Rat(1, 2), Rat(1), Rat(0)});
    CHECK(part.s0 == std::vector<StateId>{0, 1, 2});
    CHECK(part.s1.empty());
  }
  {
    // Both value_gift states only approach their values.
    const Game g = value_gift_game({Rat(3, 4)});
    const Partition part = compute_S0(g, {Rat(3, 4), Rat(1), Rat(1), Rat(0)});
    CHECK(part.s0 == std::vector<StateId>{2, 3});
    CHECK(part.s1 == std::vector<StateId>{0, 1});
  }

  const Game g = snowball_game();
  CHECK_THROWS_AS(compute_S0(g, {Rat(1), Rat(1, 2), Rat(0)}), std::invalid_argument);
  CHECK_THROWS_AS(compute_S0(g, {Rat(0), Rat(1), Rat(0)}), std::invalid_argument);
}

TEST_CASE("stratification is deterministic") {
  for (int trial = 0; trial < 6; ++trial) {
    RandomGameSpec spec;
    spec.seed = 7000 + trial;
    spec.num_states = 4 + trial % 3;
    spec.turn_based = true;
    const Game g = random_game(spec);
    const ValueResult vr = game_values(g, Objective::Reach);
    REQUIRE(vr.exact);
    const Pruning pr = prune_value_zero(g, vr.values);
    std::vector<Rat> vp(pr.game.num_states());
    for (StateId ns = 0; ns < pr.game.num_states(); ++ns)
      vp[ns] = vr.values[pr.old_of_new[ns]];

    const Partition p1 = compute_S0(pr.game, vp);
    const Partition p2 = compute_S0(pr.game, vp);
    CHECK(p1.in_s0 == p2.in_s0);
    CHECK(p1.ranking.rank == p2.ranking.rank);
    for (StateId s = 0; s < pr.game.num_states(); ++s) {
      CHECK(p1.ranking.alpha[s].entries == p2.ranking.alpha[s].entries);
      CHECK(p1.ranking.delta[s] == p2.ranking.delta[s]);
    }
  }
}

TEST_CASE("the leak budget respects the classification gap") {
  const Game g = gap_game();
  const std::vector<Rat> v = {Rat(3, 4), Rat(1), Rat(0)};
  const Partition part = compute_S0(g, v);
  REQUIRE(part.s1.empty());
  REQUIRE(part.ranking.rank[0] == 1);
  CHECK(part.ranking.alpha[0].entries == Distribution::point(0).entries);
  CHECK(part.ranking.delta[0] == Rat(3, 4));

  // The generous reply beats the value by 3/20; half of that caps the leak.
  GapEps ge = choose_gap_epsilon(g, part, v, Rat(1, 2));
  CHECK(ge.has_increasing);
  CHECK(ge.gap == Rat(3, 20));
  CHECK(ge.eps == Rat(3, 40));
  // A small fallback wins the min.
  ge = choose_gap_epsilon(g, part, v, Rat(1, 100));
  CHECK(ge.eps == Rat(1, 100));

  // Matching pennies has no value-increasing reply, so the fallback rules.
  const Game mp = matching_pennies_game();
  const std::vector<Rat> vmp = {Rat(1, 2), Rat(1), Rat(0)};
  ge = choose_gap_epsilon(mp, compute_S0(mp, vmp), vmp, Rat(1, 100));
  CHECK_FALSE(ge.has_increasing);
  CHECK(ge.eps == Rat(1, 100));

  CHECK_THROWS_AS(choose_gap_epsilon(g, part, v, Rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(choose_gap_epsilon(g, part, v, Rat(3, 4)), std::invalid_argument);
}

TEST_CASE("end-to-end: exact on the region, eps-optimal outside") {
  {
    // Snowball: everything interesting sits outside the region.
    const OptimalSynthesis os = synthesize_optimal(snowball_game());
    CHECK(os.ok);
    CHECK(os.failures.empty());
    CHECK(os.partition.s0 == std::vector<StateId>{1, 2});
    CHECK(os.partition.s1 == std::vector<StateId>{0});
    CHECK_FALSE(os.gap.has_increasing);
    CHECK(os.gap.eps == Rat(1, 100));
    CHECK(os.report.achieved[0] >= Rat(99, 100));
    CHECK(os.report.achieved[0] < 1);
    CHECK(os.v_ext[0] >= Rat(99, 100));
  }
  {
    // Matching pennies: fully exact, the coin achieves 1/2 on the nose.
    const OptimalSynthesis os = synthesize_optimal(matching_pennies_game());
    CHECK(os.ok);
    CHECK(os.partition.s1.empty());
    CHECK(os.sigma.choice[0].at(0) == Rat(1, 2));
    CHECK(os.report.achieved[0] == Rat(1, 2));
  }
  {
    // Gap game: exact everywhere with the witness playing the lone action.
    const OptimalSynthesis os = synthesize_optimal(gap_game());
    CHECK(os.ok);
    CHECK(os.partition.s1.empty());
    CHECK(os.gap.gap == Rat(3, 20));
    CHECK(os.report.achieved[0] == Rat(3, 4));
  }
  {
    // value_gift: both non-sinks are eps-only, and the targets reflect it.
    const OptimalSynthesis os = synthesize_optimal(value_gift_game({Rat(3, 4)}));
    CHECK(os.ok);
    CHECK(os.partition.s1 == std::vector<StateId>{0, 1});
    CHECK(os.report.achieved[0] >= Rat(3, 4) - Rat(1, 100));
    CHECK(os.report.achieved[1] >= Rat(1) - Rat(1, 100));
  }
  {
    // Value-zero states ride along as trivially-exact region members.
    const OptimalSynthesis os = synthesize_optimal(snowball_with_dead_state());
    CHECK(os.ok);
    CHECK(os.values.values == std::vector<Rat>{Rat(1), Rat(0), Rat(1), Rat(0)});
    CHECK(os.partition.in_s0 == std::vector<bool>{false, true, true, true});
    CHECK(os.partition.ranking.rank[1] == -1);
    CHECK(os.report.achieved[0] >= Rat(99, 100));
  }
}

TEST_CASE("turn-based games are exactly winnable everywhere") {
  for (int trial = 0; trial < 15; ++trial) {
    RandomGameSpec spec;
    spec.seed = 7100 + trial;
    spec.num_states = 4 + trial % 4;
    spec.turn_based = true;
    const Game g = random_game(spec);

    const OptimalSynthesis os = synthesize_optimal(g);
    INFO("trial ", trial);
    CHECK(os.ok);
    CHECK(os.partition.s1.empty());
    for (StateId s = 0; s < g.num_states(); ++s)
      CHECK(os.report.achieved[s] == os.values.values[s]);
  }
}

TEST_CASE("concurrent games with exact values synthesize with zero failures") {
  int exact_count = 0;
  for (int trial = 0; trial < 20; ++trial) {
    RandomGameSpec spec;
    spec.seed = 7200 + trial;
    spec.num_states = 3 + trial % 4;
    const Game g = random_game(spec);
    if (!game_values(g, Objective::Reach).exact) continue;
    ++exact_count;

    const OptimalSynthesis os = synthesize_optimal(g);
    INFO("trial ", trial);
    CHECK(os.ok);
    CHECK(os.failures.empty());
    CHECK(validate_strategy(g, os.sigma).empty());
    for (StateId s = 0; s < g.num_states(); ++s) {
      const Rat slack = os.partition.in_s0[s] ? Rat(0) : os.gap.eps;
      CHECK(os.report.achieved[s] >= os.values.values[s] - slack);
    }
  }
  CHECK(exact_count >= 5);
}

TEST_CASE("synthesis refuses to run on unsnapped values") {
  OptimalSynthOptions opt;
  opt.value_options.snap = false;
  CHECK_THROWS_AS(synthesize_optimal(snowball_game(), opt), std::runtime_error);
}
