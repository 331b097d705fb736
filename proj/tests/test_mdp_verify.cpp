// Certification tests. The key soundness check: `certify` (induced-MDP best
// response) must agree with brute force — enumerate every pure Min policy,
// evaluate each induced Markov chain with an independent Gaussian
// elimination, and take the worst case. Plus hand-frozen certificates,
// submartingale checks, absorption profiles, seeded simulation, and the
// finite-horizon worst-case evaluator.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "csg/builtins.hpp"
#include "csg/random_game.hpp"
#include "csg/verify.hpp"

using namespace csg;

namespace {

// Exact reach probabilities of a Markov chain: qualitative can-reach closure,
// then one exact linear solve by Gauss-Jordan elimination. Independent of the
// library's SCC/absorption machinery.
std::vector<Rat> chain_reach_oracle(const std::vector<Distribution>& rows, StateId top) {
  const int n = static_cast<int>(rows.size());
  std::vector<bool> can(n, false);
  can[top] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (can[s]) continue;
      for (const auto& [t, p] : rows[s].entries)
        if (can[t]) {
          can[s] = true;
          changed = true;
          break;
        }
    }
  }
  std::vector<int> idx(n, -1);
  std::vector<int> unk;
  for (int s = 0; s < n; ++s)
    if (can[s] && s != top) {
      idx[s] = static_cast<int>(unk.size());
      unk.push_back(s);
    }
  const int k = static_cast<int>(unk.size());
  std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k + 1, Rat(0)));
  for (int i = 0; i < k; ++i) {
    a[i][i] += 1;
    for (const auto& [t, p] : rows[unk[i]].entries) {
      if (t == static_cast<int>(top))
        a[i][k] += p;
      else if (idx[t] >= 0)
        a[i][idx[t]] -= p;
    }
  }
  for (int col = 0, row = 0; col < k; ++col) {
    int piv = -1;
    for (int i = row; i < k; ++i)
      if (a[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[row], a[piv]);
    const Rat d = a[row][col];
    for (int j = col; j <= k; ++j) a[row][j] /= d;
    for (int i = 0; i < k; ++i) {
      if (i == row || a[i][col] == 0) continue;
      const Rat f = a[i][col];
      for (int j = col; j <= k; ++j) a[i][j] -= f * a[row][j];
    }
    ++row;
  }
  std::vector<Rat> q(n, Rat(0));
  q[top] = 1;
  for (int i = 0; i < k; ++i) q[unk[i]] = a[i][k];
  return q;
}

// Chain rows under sigma and a pure Min policy, built directly.
std::vector<Distribution> rows_under(const Game& g, const MemorylessStrategy& sigma,
                                     const std::vector<ActionId>& policy) {
  std::vector<Distribution> rows(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    Distribution row;
    for (const auto& [a, pa] : sigma.at(s).entries)
      for (const auto& [t, p] : g.p(s, a, policy[s]).entries)
        row.entries.emplace_back(t, pa * p);
    row.normalize_shape();
    rows[s] = std::move(row);
  }
  return rows;
}

// Worst (elementwise minimal is not well-defined; we take per-state minima,
// which is what a best-responding Min achieves in an MDP) reach values over
// all pure Min policies, by exhaustive enumeration.
std::vector<Rat> brute_force_min_reach(const Game& g, const MemorylessStrategy& sigma,
                                       StateId target) {
  const int n = g.num_states();
  std::vector<ActionId> policy(n, 0);
  std::vector<Rat> best;
  for (;;) {
    const std::vector<Rat> q = chain_reach_oracle(rows_under(g, sigma, policy), target);
    if (best.empty()) {
      best = q;
    } else {
      for (int s = 0; s < n; ++s)
        if (q[s] < best[s]) best[s] = q[s];
    }
    int s = 0;
    for (; s < n; ++s) {
      if (++policy[s] < g.num_min(s)) break;
      policy[s] = 0;
    }
    if (s == n) break;
  }
  return best;
}

std::vector<Rat> brute_force_max_reach(const Game& g, const MemorylessStrategy& sigma,
                                       StateId target) {
  const int n = g.num_states();
  std::vector<ActionId> policy(n, 0);
  std::vector<Rat> best;
  for (;;) {
    const std::vector<Rat> q = chain_reach_oracle(rows_under(g, sigma, policy), target);
    if (best.empty()) {
      best = q;
    } else {
      for (int s = 0; s < n; ++s)
        if (q[s] > best[s]) best[s] = q[s];
    }
    int s = 0;
    for (; s < n; ++s) {
      if (++policy[s] < g.num_min(s)) break;
      policy[s] = 0;
    }
    if (s == n) break;
  }
  return best;
}

MemorylessStrategy uniform_max(const Game& g) {
  MemorylessStrategy sigma;
  sigma.player = Player::Max;
  sigma.choice.resize(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    Distribution d;
    const int m = g.num_max(s);
    for (ActionId a = 0; a < m; ++a) d.entries.emplace_back(a, Rat(1, m));
    d.normalize_shape();
    sigma.choice[s] = std::move(d);
  }
  return sigma;
}

MemorylessStrategy snowball_mix(const Rat& eps) {
  MemorylessStrategy sigma;
  sigma.player = Player::Max;
  sigma.choice = {Distribution({{0, Rat(1) - eps}, {1, eps}}), Distribution::point(0),
                  Distribution::point(0)};
  return sigma;
}

MemorylessStrategy point_strategy(const Game& g, Player pl, ActionId a0) {
  MemorylessStrategy s;
  s.player = pl;
  s.choice.assign(g.num_states(), Distribution::point(0));
  s.choice[0] = Distribution::point(a0);
  return s;
}

}  // namespace

TEST_CASE("snowball hand strategies certify to exact closed-form guarantees") {
  const Game g = snowball_game();
  for (const Rat eps : {Rat(1, 10), Rat(1, 100)}) {
    const CertReport rep = certify(g, snowball_mix(eps), Objective::Reach);
    INFO("eps = ", rat_to_string(eps));
    // The mix loses exactly eps when Min throws immediately; waiting lets
    // the run action escape eventually, so throwing is the best response.
    CHECK(rep.achieved[0] == Rat(1) - eps);
    CHECK(rep.achieved[g.top] == 1);
    CHECK(rep.achieved[g.bottom] == 0);
    CHECK(rep.min_witness.choice[0].entries == Distribution::point(1).entries);  // throw
  }
  // Pure hiding never escapes: Min waits forever and the reach value is 0.
  const CertReport hide = certify(g, point_strategy(g, Player::Max, 0), Objective::Reach);
  CHECK(hide.achieved[0] == 0);
  CHECK(hide.min_witness.choice[0].entries == Distribution::point(0).entries);  // wait
  // Pure running is punished by an immediate throw.
  const CertReport run = certify(g, point_strategy(g, Player::Max, 1), Objective::Reach);
  CHECK(run.achieved[0] == 0);
  CHECK(run.min_witness.choice[0].entries == Distribution::point(1).entries);
  // But pure hiding is a perfect safety strategy.
  const CertReport safe = certify(g, point_strategy(g, Player::Max, 0), Objective::Avoid);
  CHECK(safe.achieved[0] == 1);
}

TEST_CASE("certify matches exhaustive enumeration of pure Min policies") {
  for (int trial = 0; trial < 12; ++trial) {
    RandomGameSpec spec;
    spec.seed = 3000 + trial;
    spec.num_states = 4 + trial % 2;  // 4..5 states, <= 3^5 policies
    const Game g = random_game(spec);

    std::vector<MemorylessStrategy> sigmas = {uniform_max(g)};
    {
      MemorylessStrategy pure;
      pure.player = Player::Max;
      pure.choice.resize(g.num_states());
      for (StateId s = 0; s < g.num_states(); ++s)
        pure.choice[s] = Distribution::point(static_cast<ActionId>((s + trial) % g.num_max(s)));
      sigmas.push_back(std::move(pure));
    }
    for (const MemorylessStrategy& sigma : sigmas) {
      const CertReport reach = certify(g, sigma, Objective::Reach);
      const std::vector<Rat> expect = brute_force_min_reach(g, sigma, g.top);
      for (StateId s = 0; s < g.num_states(); ++s) {
        INFO("trial ", trial, " reach, state ", g.state_names[s]);
        CHECK(reach.achieved[s] == expect[s]);
      }
      const CertReport avoid = certify(g, sigma, Objective::Avoid);
      const std::vector<Rat> worst_bot = brute_force_max_reach(g, sigma, g.bottom);
      for (StateId s = 0; s < g.num_states(); ++s) {
        INFO("trial ", trial, " avoid, state ", g.state_names[s]);
        CHECK(avoid.achieved[s] == Rat(1) - worst_bot[s]);
      }
    }
  }
}

TEST_CASE("certify rejects a Min strategy and unknown target states") {
  const Game g = snowball_game();
  MemorylessStrategy pi;
  pi.player = Player::Min;
  pi.choice.assign(3, Distribution::point(0));
  CHECK_THROWS_AS(certify(g, pi, Objective::Reach), std::invalid_argument);
  CHECK_THROWS_AS(certify(g, snowball_mix(Rat(1, 10)), Objective::Reach, {{17, Rat(1, 2)}}),
                  std::invalid_argument);
}

TEST_CASE("certify targets, slack, and failure messages") {
  const Game g = snowball_game();
  const MemorylessStrategy sigma = snowball_mix(Rat(1, 10));

  const CertReport ok = certify(g, sigma, Objective::Reach, {{0, Rat(9, 10)}});
  CHECK(ok.meets_targets);
  CHECK(ok.failures.empty());

  const CertReport miss = certify(g, sigma, Objective::Reach, {{0, Rat(1)}});
  CHECK_FALSE(miss.meets_targets);
  REQUIRE(miss.failures.size() == 1);
  CHECK(miss.failures[0].find("state s achieved 9/10 < target 1") != std::string::npos);

  const CertReport slack = certify(g, sigma, Objective::Reach, {{0, Rat(1)}}, Rat(1, 10));
  CHECK(slack.meets_targets);
}

TEST_CASE("submartingale certificates on hand fixtures") {
  const Game g = snowball_game();
  const std::vector<Rat> v = {Rat(1), Rat(1), Rat(0)};

  // Hiding preserves v against both Min actions.
  CHECK(is_submartingale(g, point_strategy(g, Player::Max, 0), v));
  // Running is a violation: a throw drops the expectation to 0 < 1.
  const auto viol = submartingale_violations(g, point_strategy(g, Player::Max, 1), v);
  REQUIRE(viol.size() == 1);
  CHECK(viol[0].find("state s") != std::string::npos);
  CHECK(viol[0].find("payoff 0 < 1") != std::string::npos);

  // Chain version: (hide, wait) loops at s and preserves; (run, throw) drops.
  MemorylessStrategy pi_wait;
  pi_wait.player = Player::Min;
  pi_wait.choice.assign(3, Distribution::point(0));
  CHECK(is_chain_submartingale(build_chain(g, point_strategy(g, Player::Max, 0), pi_wait), v));
  MemorylessStrategy pi_throw = pi_wait;
  pi_throw.choice[0] = Distribution::point(1);
  CHECK_FALSE(
      is_chain_submartingale(build_chain(g, point_strategy(g, Player::Max, 1), pi_throw), v));
}

TEST_CASE("absorption profile of the snowball chain") {
  const Game g = snowball_game();
  MemorylessStrategy pi_wait;
  pi_wait.player = Player::Min;
  pi_wait.choice.assign(3, Distribution::point(0));

  SUBCASE("hide vs wait loops forever: {s} is its own recurrent class") {
    const AbsorptionProfile ap = absorption_profile(g, point_strategy(g, Player::Max, 0), pi_wait);
    CHECK(ap.to_other[0] == 1);
    CHECK(ap.to_top[0] == 0);
    REQUIRE(ap.other_classes.size() == 1);
    CHECK(ap.other_classes[0] == std::vector<StateId>{0});
  }
  SUBCASE("run vs wait escapes immediately") {
    const AbsorptionProfile ap = absorption_profile(g, point_strategy(g, Player::Max, 1), pi_wait);
    CHECK(ap.to_top[0] == 1);
    CHECK(ap.other_classes.empty());
  }
  SUBCASE("uniform mixes absorb 2/3 top, 1/3 bottom") {
    MemorylessStrategy sigma = snowball_mix(Rat(1, 2));
    MemorylessStrategy pi = pi_wait;
    pi.choice[0] = Distribution({{0, Rat(1, 2)}, {1, Rat(1, 2)}});
    const AbsorptionProfile ap = absorption_profile(g, sigma, pi);
    CHECK(ap.to_top[0] == Rat(2, 3));
    CHECK(ap.to_bottom[0] == Rat(1, 3));
    CHECK(ap.to_other[0] == 0);
    // chain_absorption with only top marked good agrees.
    std::vector<bool> good(3, false);
    good[g.top] = true;
    CHECK(chain_absorption(build_chain(g, sigma, pi), good)[0] == Rat(2, 3));
  }
}

TEST_CASE("absorption agrees with the Gauss oracle on random mixed chains") {
  for (int trial = 0; trial < 20; ++trial) {
    RandomGameSpec spec;
    spec.seed = 3100 + trial;
    spec.num_states = 5 + trial % 4;
    const Game g = random_game(spec);
    const MemorylessStrategy sigma = uniform_max(g);
    MemorylessStrategy pi;
    pi.player = Player::Min;
    pi.choice.resize(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
      Distribution d;
      const int m = g.num_min(s);
      for (ActionId b = 0; b < m; ++b) d.entries.emplace_back(b, Rat(1, m));
      d.normalize_shape();
      pi.choice[s] = std::move(d);
    }
    const std::vector<Distribution> rows = build_chain(g, sigma, pi);
    const std::vector<Rat> q = chain_reach_oracle(rows, g.top);
    const AbsorptionProfile ap = absorption_profile(g, sigma, pi);
    for (StateId s = 0; s < g.num_states(); ++s) {
      INFO("trial ", trial, " state ", g.state_names[s]);
      // Reaching top ever == absorbing in top's class (top is a sink).
      CHECK(ap.to_top[s] == q[s]);
    }
  }
}

TEST_CASE("simulation is seed-deterministic and statistically sane") {
  const Game g = snowball_game();
  const MemorylessStrategy sigma = snowball_mix(Rat(1, 2));
  MemorylessStrategy pi_throw;
  pi_throw.player = Player::Min;
  pi_throw.choice.assign(3, Distribution::point(0));
  pi_throw.choice[0] = Distribution::point(1);

  const SimulationResult r1 = simulate(g, sigma, pi_throw, Objective::Reach, 0, 2000, 50, 42);
  const SimulationResult r2 = simulate(g, sigma, pi_throw, Objective::Reach, 0, 2000, 50, 42);
  CHECK(r1.successes == r2.successes);
  CHECK(r1.runs == 2000);
  // True success probability is exactly 1/2 (hide resolves to top, run to
  // bottom, both immediately under a throw).
  CHECK(r1.wilson_low <= 0.5);
  CHECK(r1.wilson_high >= 0.5);
  CHECK(r1.wilson_low < r1.estimate);
  CHECK(r1.estimate < r1.wilson_high);

  const SimulationResult r3 = simulate(g, sigma, pi_throw, Objective::Reach, 0, 2000, 50, 43);
  CHECK(r3.successes != r1.successes);  // different seed, different draw

  // Against wait, the mix escapes almost surely well within the horizon.
  MemorylessStrategy pi_wait = pi_throw;
  pi_wait.choice[0] = Distribution::point(0);
  const SimulationResult r4 = simulate(g, sigma, pi_wait, Objective::Reach, 0, 500, 200, 7);
  CHECK(r4.successes == 500);

  CHECK_THROWS_AS(simulate(g, sigma, pi_wait, Objective::Reach, 0, 10, 0, 1),
                  std::invalid_argument);
}

TEST_CASE("stage worst-case reach of the constant snowball mix") {
  const Game g = snowball_game();
  const StageStrategy stage = as_stage_strategy(snowball_mix(Rat(1, 10)));
  // Waiting accumulates 1 - (9/10)^k while an immediate throw caps at 9/10;
  // for small horizons waiting is the best response.
  CHECK(stage_worst_reach(g, stage, 1)[0] == Rat(1, 10));
  CHECK(stage_worst_reach(g, stage, 2)[0] == Rat(19, 100));
  CHECK(stage_worst_reach(g, stage, 3)[0] == Rat(271, 1000));
  // The finite-horizon worst case never exceeds the certified value.
  const CertReport rep = certify(g, snowball_mix(Rat(1, 10)), Objective::Reach);
  for (int h : {1, 5, 30})
    CHECK(stage_worst_reach(g, stage, h)[0] <= rep.achieved[0]);
}

TEST_CASE("stage worst-case reach lower-bounds the certified value on random games") {
  for (int trial = 0; trial < 10; ++trial) {
    RandomGameSpec spec;
    spec.seed = 3200 + trial;
    const Game g = random_game(spec);
    const MemorylessStrategy sigma = uniform_max(g);
    const CertReport rep = certify(g, sigma, Objective::Reach);
    const std::vector<Rat> u = stage_worst_reach(g, as_stage_strategy(sigma), 6);
    for (StateId s = 0; s < g.num_states(); ++s) {
      INFO("trial ", trial, " state ", g.state_names[s]);
      CHECK(u[s] <= rep.achieved[s]);
    }
  }
}
