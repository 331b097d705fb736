// Memoryless eps-optimal reachability synthesis: play a finite-horizon
// optimal strategy, then fold the horizon away by injecting leaks and
// solving the resulting safety game, whose memoryless maximin inherits the
// horizon guarantee minus the leaked mass.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "csg/bellman.hpp"
#include "csg/exact_values.hpp"
#include "csg/game.hpp"
#include "csg/leaky.hpp"
#include "csg/safety_synth.hpp"
#include "csg/strategy.hpp"
#include "csg/verify.hpp"

namespace csg {

// How an accuracy budget eps is divided between the three lossy pipeline
// stages: truncating to a finite horizon, per-stage action extraction, and
// the injected leaks.
struct EpsSplit {
  Rat horizon_eps;
  Rat stage_eps;
  Rat leak_eps;
};

inline EpsSplit thirds(const Rat& eps) { return {eps / 3, eps / 3, eps / 3}; }

struct HorizonChoice {
  int n = 0;
  bool capped = false;
  double residual = 0;  // worst remaining shortfall when capped
};

namespace detail {

inline std::size_t rat_bits(const Rat& x) {
  return mpz_sizeinbase(x.get_num().get_mpz_t(), 2) + mpz_sizeinbase(x.get_den().get_mpz_t(), 2);
}

// Exact finite-horizon sweeps degrade into denominator blowup on generic
// games; beyond this per-entry size the scan continues in doubles, which is
// sound here because every horizon consumer has slack far above 1e-12.
constexpr std::size_t kExactScanBitLimit = 192;

}  // namespace detail

// Smallest n (up to cap) such that the n-step reachability value is at least
// v_hat(s) - eps1 at every state of the region. Scans exactly while the
// iterates stay small, then switches to double sweeps.
inline HorizonChoice choose_horizon(const Game& g, const std::vector<bool>& in_region,
                                    const std::vector<Rat>& v_hat, const Rat& eps1,
                                    int cap = 100000) {
  if (in_region.size() != static_cast<std::size_t>(g.num_states()) ||
      v_hat.size() != static_cast<std::size_t>(g.num_states()))
    throw std::invalid_argument("region/value vector size mismatch");
  if (!(eps1 > 0)) throw std::invalid_argument("horizon budget must be positive");

  std::vector<Rat> v = initial_vector_exact(g, Objective::Reach);
  bool exact_phase = true;
  std::vector<double> vd;
  const double eps1_d = rat_to_double(eps1);
  std::vector<double> target_d(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) target_d[s] = rat_to_double(v_hat[s]);

  HorizonChoice out;
  for (int n = 0;; ++n) {
    double shortfall = 0;
    bool good = true;
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (!in_region[s]) continue;
      if (exact_phase) {
        const Rat gap = v_hat[s] - eps1 - v[s];
        if (gap > 0) {
          good = false;
          shortfall = std::max(shortfall, rat_to_double(gap));
        }
      } else {
        const double gap = target_d[s] - eps1_d - vd[s];
        if (gap > 1e-12) {
          good = false;
          shortfall = std::max(shortfall, gap);
        }
      }
    }
    if (good) {
      out.n = n;
      return out;
    }
    if (n >= cap) {
      out.n = cap;
      out.capped = true;
      out.residual = shortfall;
      return out;
    }
    if (exact_phase) {
      v = sweep_exact_serial(g, v);
      std::size_t worst = 0;
      for (const Rat& x : v) worst = std::max(worst, detail::rat_bits(x));
      if (worst > detail::kExactScanBitLimit) {
        exact_phase = false;
        vd.resize(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) vd[i] = rat_to_double(v[i]);
      }
    } else {
      vd = sweep_double_serial(g, vd);
    }
  }
}

// Stage-indexed strategy realizing the n-step value: the stage with i steps
// remaining plays an exact maximin mix of the one-step game induced by the
// (i-1)-step value vector. The eps2 budget covers only the perturbation from
// carrying long iterates in floating point; the maximin extraction itself is
// exact and spends none of it.
inline StageStrategy horizon_strategy(const Game& g, int n, const Rat& eps2) {
  if (n < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!(eps2 >= 0)) throw std::invalid_argument("stage budget must be nonnegative");

  // val^0 .. val^(n-1), each lifted to rationals if the scan went double.
  std::vector<std::vector<Rat>> vals;
  vals.reserve(n);
  vals.push_back(initial_vector_exact(g, Objective::Reach));
  bool exact_phase = true;
  std::vector<double> vd;
  for (int i = 1; i < n; ++i) {
    if (exact_phase) {
      std::vector<Rat> next = sweep_exact_serial(g, vals.back());
      std::size_t worst = 0;
      for (const Rat& x : next) worst = std::max(worst, detail::rat_bits(x));
      vals.push_back(std::move(next));
      if (worst > detail::kExactScanBitLimit) {
        exact_phase = false;
        vd.resize(vals.back().size());
        for (std::size_t k = 0; k < vd.size(); ++k) vd[k] = rat_to_double(vals.back()[k]);
      }
    } else {
      vd = sweep_double_serial(g, vd);
      std::vector<Rat> lifted(vd.size());
      for (std::size_t k = 0; k < vd.size(); ++k) lifted[k] = rat_from_double(vd[k]);
      vals.push_back(std::move(lifted));
    }
  }

  StageStrategy sigma;
  sigma.player = Player::Max;
  sigma.stages.resize(n);
  for (int j = 0; j < n; ++j) {
    const std::vector<Rat>& base = vals[n - j - 1];  // i = n - j steps remain
    auto& stage = sigma.stages[j];
    stage.reserve(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
      if (g.is_sink_state(s)) {
        stage.push_back(Distribution::point(0));
        continue;
      }
      stage.push_back(solve_matrix_game(local_matrix(g, s, base)).row_strategy);
    }
  }
  sigma.tail = default_strategy(g, Player::Max).choice;
  return sigma;
}

struct EpsSynthesis {
  MemorylessStrategy sigma;   // valid in the original game (and in leaky)
  Game leaky;                 // the uniformly leaked game the strategy solves
  CertReport report;          // exact certificate against v_hat - eps targets
  ValueResult values;         // reachability values the targets came from
  std::vector<std::pair<StateId, Rat>> targets;  // (region state, v_hat - eps)
  int horizon = 0;
  EpsSplit split;
  Rat leak;                   // per-step leak actually injected
  bool ok = false;
};

struct EpsSynthOptions {
  std::optional<std::vector<StateId>> region;  // default: states of positive value
  std::optional<EpsSplit> split;               // default: thirds
  ValueOptions value_options;
  int horizon_cap = 100000;
};

// End-to-end eps-optimal reachability synthesis. Returns a memoryless Max
// strategy whose exact best-response reachability value is certified at
// v_hat(s) - eps on every region state (report.meets_targets says whether
// the certificate went through; it carries per-state failures otherwise).
inline EpsSynthesis synthesize_eps(const Game& g, const Rat& eps,
                                   const EpsSynthOptions& opt = {}) {
  if (!(eps > 0) || !(eps < 1))
    throw std::invalid_argument("accuracy budget must be in (0, 1), got " + rat_to_string(eps));
  EpsSynthesis out;
  out.split = opt.split.value_or(thirds(eps));
  const EpsSplit& split = out.split;
  if (!(split.horizon_eps > 0) || !(split.stage_eps > 0) || !(split.leak_eps > 0))
    throw std::invalid_argument("every budget share must be positive");
  if (split.horizon_eps + split.stage_eps + split.leak_eps > eps)
    throw std::invalid_argument("budget shares exceed the total budget");

  out.values = game_values(g, Objective::Reach, opt.value_options);
  const std::vector<Rat>& v_hat = out.values.values;

  std::vector<bool> region(g.num_states(), false);
  if (opt.region) {
    for (StateId s : *opt.region) {
      if (s < 0 || s >= g.num_states())
        throw std::invalid_argument("region names unknown state index " + std::to_string(s));
      region[s] = true;
    }
  } else {
    for (StateId s = 0; s < g.num_states(); ++s) region[s] = v_hat[s] > 0;
  }

  const HorizonChoice hz = choose_horizon(g, region, v_hat, split.horizon_eps, opt.horizon_cap);
  if (hz.capped)
    throw std::runtime_error("horizon cap " + std::to_string(opt.horizon_cap) +
                             " exceeded; worst remaining shortfall " +
                             std::to_string(hz.residual));
  out.horizon = std::max(hz.n, 1);  // a trivial region still needs one leaky stage

  const StageStrategy stage = horizon_strategy(g, out.horizon, split.stage_eps);
  out.leak = split.leak_eps / out.horizon;
  out.leaky = leak_all(g, out.leak);
  const SupportRestriction restr = restrict_support(out.leaky, stage);

  // The leaked game's operator is a (1 - leak)-contraction, so pick the
  // sweep count from the contraction rate and a tolerance whose accumulated
  // slack (residual / leak along an absorption time of 1 / leak) stays well
  // inside the stage budget.
  const double leak_d = rat_to_double(out.leak);
  IterationOptions it;
  it.tol = std::max(1e-14, leak_d * rat_to_double(split.stage_eps) / 4);
  const double per_sweep = -std::log1p(-leak_d);
  const double sweeps = std::log(1.0 / it.tol) / per_sweep;
  it.max_iter = static_cast<long>(sweeps * 1.5) + 1000;
  if (it.max_iter > 100000000)
    throw std::runtime_error("leak too small for safety iteration to converge");
  const IterationOutcome safety = iterate_double(restr.game, Objective::Avoid, it);
  if (!safety.converged)
    throw std::runtime_error("safety iteration stalled at residual " +
                             std::to_string(safety.residual));

  std::vector<Rat> v_safe(safety.v.size());
  for (std::size_t i = 0; i < safety.v.size(); ++i) {
    v_safe[i] = rat_from_double(std::min(1.0, std::max(0.0, safety.v[i])));
  }
  v_safe[restr.game.top] = 1;
  v_safe[restr.game.bottom] = 0;
  const Rat refuse_tol = rat_from_double(std::max(safety.residual, it.tol)) * 16;
  const MemorylessStrategy restricted = synthesize_safety(restr.game, v_safe, refuse_tol);
  out.sigma = from_restricted(restricted, restr.kept);

  for (StateId s = 0; s < g.num_states(); ++s)
    if (region[s]) out.targets.emplace_back(s, v_hat[s] - eps);
  out.report = certify(g, out.sigma, Objective::Reach, out.targets);
  out.ok = out.report.meets_targets;
  return out;
}

}  // namespace csg
