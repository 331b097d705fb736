// csg — command-line toolkit for finite two-player zero-sum concurrent
// stochastic games with reachability/safety objectives.
//
// Subcommands read a game (or a synthesis bundle) from files or stdin and
// write composable artifacts to stdout: games, bundles, or reports. Exit
// codes: 0 success / certificate pass, 1 certificate failure, 2 input error.
#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csg/bellman.hpp"
#include "csg/builtins.hpp"
#include "csg/exact_values.hpp"
#include "csg/game.hpp"
#include "csg/leaky.hpp"
#include "csg/optimal_synth.hpp"
#include "csg/random_game.hpp"
#include "csg/reach_eps.hpp"
#include "csg/safety_synth.hpp"
#include "csg/serialize.hpp"
#include "csg/strategy.hpp"
#include "csg/verify.hpp"

namespace {

using namespace csg;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Game load_game(const std::string& path) {
  Game g = game_from_json(parse_json_text(read_input(path)));
  require_valid(g, "load_game");
  return g;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Exact pipelines print rationals; float artifacts print decimals.
std::string value_repr(const Rat& v, bool exact) {
  return exact ? rat_to_string(v) : fmt_double(rat_to_double(v));
}

Json values_json(const Game& g, const std::vector<Rat>& v, bool exact) {
  Json j = Json::object();
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (exact)
      j[g.state_names[s]] = rat_to_string(v[s]);
    else
      j[g.state_names[s]] = rat_to_double(v[s]);
  }
  return j;
}

Objective parse_objective(const std::string& name) {
  if (name == "reach") return Objective::Reach;
  if (name == "avoid") return Objective::Avoid;
  throw InputError("objective must be reach or avoid");
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// ---- shared flag bundle ----

struct Shared {
  std::string format = "records";
  int jobs = 1;
};

bool as_json(const Shared& sh) { return sh.format == "json"; }

// ---- subcommand handlers ----

int run_validate(const std::string& game_path, const Shared& sh) {
  Game g = game_from_json(parse_json_text(read_input(game_path)));
  const std::vector<std::string> diags = validate(g);
  if (!diags.empty()) {
    for (const std::string& d : diags) std::cerr << "error: " << d << "\n";
    return 2;
  }
  if (as_json(sh)) {
    Json j;
    j["valid"] = true;
    j["mode"] = g.mode == Mode::Exact ? "exact" : "float";
    j["states"] = g.num_states();
    std::cout << dump_json(j);
  } else {
    std::cout << "valid true\n";
    std::cout << "mode " << (g.mode == Mode::Exact ? "exact" : "float") << "\n";
    std::cout << "states " << g.num_states() << "\n";
  }
  return 0;
}

int run_values(const std::string& game_path, const std::string& objective, double tol,
               const Shared& sh) {
  Game g = load_game(game_path);
  ValueOptions opts;
  opts.tol = tol;
  opts.parallel = sh.jobs > 1;
  const ValueResult vr = game_values(g, parse_objective(objective), opts);
  if (as_json(sh)) {
    Json j;
    j["objective"] = objective;
    j["exact"] = vr.exact;
    j["converged"] = vr.converged;
    j["iterations"] = vr.iterations;
    j["residual"] = vr.residual;
    j["values"] = values_json(g, vr.values, vr.exact);
    if (vr.has_bracket) {
      j["lower"] = values_json(g, vr.lower, true);
      j["upper"] = values_json(g, vr.upper, true);
    }
    std::cout << dump_json(j);
  } else {
    std::cout << "objective " << objective << "\n";
    std::cout << "exact " << (vr.exact ? "true" : "false") << "\n";
    std::cout << "converged " << (vr.converged ? "true" : "false") << "\n";
    std::cout << "iterations " << vr.iterations << "\n";
    std::cout << "residual " << fmt_double(vr.residual) << "\n";
    for (StateId s = 0; s < g.num_states(); ++s)
      std::cout << "value " << g.state_names[s] << " " << value_repr(vr.values[s], vr.exact)
                << "\n";
    if (vr.has_bracket)
      for (StateId s = 0; s < g.num_states(); ++s)
        std::cout << "bracket " << g.state_names[s] << " " << rat_to_string(vr.lower[s]) << " "
                  << rat_to_string(vr.upper[s]) << "\n";
  }
  return 0;
}

int run_horizon(const std::string& game_path, int n, const Shared& sh) {
  if (n < 0) throw InputError("horizon must be nonnegative");
  Game g = load_game(game_path);
  const std::vector<Rat> v = horizon_values(g, n, sh.jobs > 1).back();
  if (as_json(sh)) {
    Json j;
    j["horizon"] = n;
    j["values"] = values_json(g, v, true);
    std::cout << dump_json(j);
  } else {
    std::cout << "horizon " << n << "\n";
    for (StateId s = 0; s < g.num_states(); ++s)
      std::cout << "value " << g.state_names[s] << " " << rat_to_string(v[s]) << "\n";
  }
  return 0;
}

void report_certificate(const Game& g, const CertReport& rep,
                        const std::vector<std::pair<StateId, Rat>>& targets, bool exact,
                        const Shared& sh, std::ostream& os) {
  std::vector<std::optional<Rat>> target_of(g.num_states());
  for (const auto& [s, t] : targets) target_of[s] = t;
  if (as_json(sh)) {
    Json j;
    j["objective"] = rep.objective == Objective::Reach ? "reach" : "avoid";
    j["achieved"] = values_json(g, rep.achieved, exact);
    j["targets"] = targets_to_json(g, targets);
    j["meets_targets"] = rep.meets_targets;
    j["failures"] = rep.failures;
    Json w = Json::object();
    for (StateId s = 0; s < g.num_states(); ++s)
      w[g.state_names[s]] = g.min_actions[s][rep.min_witness.choice[s].entries.front().first];
    j["witness"] = w;
    os << dump_json(j);
    return;
  }
  os << "objective " << (rep.objective == Objective::Reach ? "reach" : "avoid") << "\n";
  for (StateId s = 0; s < g.num_states(); ++s) {
    os << "state " << g.state_names[s] << " achieved " << value_repr(rep.achieved[s], exact)
       << " target " << (target_of[s] ? rat_to_string(*target_of[s]) : std::string("-"))
       << " witness " << g.min_actions[s][rep.min_witness.choice[s].entries.front().first]
       << "\n";
  }
  os << "meets " << (rep.meets_targets ? "true" : "false") << "\n";
  for (const std::string& f : rep.failures) os << "failure " << f << "\n";
}

int run_verify(const std::string& game_path, const std::string& strategy_path,
               const std::string& targets_path, const std::string& objective, const Shared& sh) {
  Game g;
  MemorylessStrategy sigma;
  std::vector<std::pair<StateId, Rat>> targets;
  Objective obj;
  if (game_path.empty() && strategy_path.empty()) {
    const Bundle b = bundle_from_json(parse_json_text(read_input("-")));
    g = b.game;
    require_valid(g, "bundle");
    sigma = b.strategy;
    targets = b.targets;
    obj = b.objective;
    if (!objective.empty()) obj = parse_objective(objective);
    if (!targets_path.empty()) targets = targets_from_json(g, parse_json_text(read_input(targets_path)));
  } else {
    if (game_path.empty() || strategy_path.empty())
      throw InputError("verify needs --game and --strategy together, or a bundle on stdin");
    g = load_game(game_path);
    sigma = strategy_from_json(g, parse_json_text(read_input(strategy_path)));
    obj = objective.empty() ? Objective::Reach : parse_objective(objective);
    if (!targets_path.empty())
      targets = targets_from_json(g, parse_json_text(read_input(targets_path)));
  }
  const std::vector<std::string> diags = validate_strategy(g, sigma);
  if (!diags.empty()) {
    for (const std::string& d : diags) std::cerr << "error: " << d << "\n";
    return 2;
  }
  const CertReport rep = certify(g, sigma, obj, targets);
  report_certificate(g, rep, targets, true, sh, std::cout);
  return rep.meets_targets ? 0 : 1;
}

int run_simulate(const std::string& game_path, const std::string& strategy_path,
                 const std::string& objective, long runs, long horizon, std::uint64_t seed,
                 const Shared& sh) {
  if (runs < 1) throw InputError("runs must be positive");
  if (horizon < 1) throw InputError("horizon must be at least 1");
  Game g;
  MemorylessStrategy sigma;
  Objective obj;
  if (game_path.empty() && strategy_path.empty()) {
    const Bundle b = bundle_from_json(parse_json_text(read_input("-")));
    g = b.game;
    require_valid(g, "bundle");
    sigma = b.strategy;
    obj = !objective.empty() ? parse_objective(objective) : b.objective;
  } else {
    if (game_path.empty() || strategy_path.empty())
      throw InputError("simulate needs --game and --strategy together, or a bundle on stdin");
    g = load_game(game_path);
    sigma = strategy_from_json(g, parse_json_text(read_input(strategy_path)));
    obj = objective.empty() ? Objective::Reach : parse_objective(objective);
  }
  const std::vector<std::string> diags = validate_strategy(g, sigma);
  if (!diags.empty()) {
    for (const std::string& d : diags) std::cerr << "error: " << d << "\n";
    return 2;
  }
  // Min plays the exact best response to sigma: the empirical frequencies
  // estimate the certified guarantee, not a strawman opponent.
  const CertReport rep = certify(g, sigma, obj);
  Json per_state = Json::object();
  if (!as_json(sh)) {
    std::cout << "objective " << (obj == Objective::Reach ? "reach" : "avoid") << "\n";
    std::cout << "runs " << runs << "\n";
    std::cout << "horizon " << horizon << "\n";
    std::cout << "seed " << seed << "\n";
  }
  for (StateId s = 0; s < g.num_states(); ++s) {
    const SimulationResult r = simulate(g, sigma, rep.min_witness, obj, s, static_cast<int>(runs),
                                        static_cast<int>(horizon), seed);
    if (as_json(sh)) {
      Json e;
      e["successes"] = r.successes;
      e["estimate"] = r.estimate;
      e["wilson_low"] = r.wilson_low;
      e["wilson_high"] = r.wilson_high;
      per_state[g.state_names[s]] = std::move(e);
    } else {
      std::cout << "state " << g.state_names[s] << " successes " << r.successes << " estimate "
                << fmt_double(r.estimate) << " low " << fmt_double(r.wilson_low) << " high "
                << fmt_double(r.wilson_high) << "\n";
    }
  }
  if (as_json(sh)) {
    Json j;
    j["objective"] = obj == Objective::Reach ? "reach" : "avoid";
    j["runs"] = runs;
    j["horizon"] = horizon;
    j["seed"] = seed;
    j["states"] = std::move(per_state);
    std::cout << dump_json(j);
  }
  return 0;
}

int run_leak(const std::string& game_path, const std::string& eps_text) {
  Game g = load_game(game_path);
  std::cout << dump_json(game_to_json(leak_all(g, parse_rat(eps_text))));
  return 0;
}

int run_synth_safety(const std::string& game_path, double tol, double theta, const Shared& sh) {
  Game g = load_game(game_path);
  ValueOptions opts;
  opts.tol = tol;
  opts.parallel = sh.jobs > 1;
  const ValueResult vr = safety_values(g, opts);
  const Rat refuse =
      vr.exact ? Rat(0) : rat_from_double(std::max(theta, 16 * std::max(vr.residual, tol)));
  const MemorylessStrategy sigma = synthesize_safety(g, vr.values, refuse);

  std::vector<std::pair<StateId, Rat>> targets;
  if (vr.exact) {
    for (StateId s = 0; s < g.num_states(); ++s) targets.emplace_back(s, vr.values[s]);
  } else if (vr.has_bracket) {
    for (StateId s = 0; s < g.num_states(); ++s) targets.emplace_back(s, vr.lower[s]);
  } else {
    const CertReport pre = certify(g, sigma, Objective::Avoid);
    for (StateId s = 0; s < g.num_states(); ++s) targets.emplace_back(s, pre.achieved[s]);
  }
  const CertReport rep = certify(g, sigma, Objective::Avoid, targets);

  Bundle b;
  b.objective = Objective::Avoid;
  b.game = g;
  b.strategy = sigma;
  b.targets = targets;
  b.info["exact_values"] = vr.exact;
  std::cout << dump_json(bundle_to_json(b));
  report_certificate(g, rep, targets, true, sh, std::cerr);
  return rep.meets_targets ? 0 : 1;
}

int run_synth_reach_eps(const std::string& game_path, const std::string& eps_text,
                        const std::string& split_text, const std::string& s0_text, double tol,
                        const Shared& sh) {
  Game g = load_game(game_path);
  const Rat eps = parse_rat(eps_text);
  EpsSynthOptions opt;
  opt.value_options.tol = tol;
  opt.value_options.parallel = sh.jobs > 1;
  if (!split_text.empty()) {
    const std::vector<std::string> parts = split_commas(split_text);
    if (parts.size() != 3)
      throw InputError("--split needs three comma-separated rationals (horizon,stage,leak)");
    opt.split = EpsSplit{parse_rat(parts[0]), parse_rat(parts[1]), parse_rat(parts[2])};
  }
  if (!s0_text.empty()) {
    std::vector<StateId> region;
    for (const std::string& name : split_commas(s0_text)) {
      const std::optional<StateId> s = g.state_index(name);
      if (!s) throw InputError("--s0 names unknown state '" + name + "'");
      region.push_back(*s);
    }
    opt.region = std::move(region);
  }
  const EpsSynthesis es = synthesize_eps(g, eps, opt);

  Bundle b;
  b.objective = Objective::Reach;
  b.game = g;
  b.strategy = es.sigma;
  b.targets = es.targets;
  b.info["eps"] = rat_to_string(eps);
  b.info["horizon"] = es.horizon;
  b.info["leak"] = rat_to_string(es.leak);
  b.info["split"] = Json::array({rat_to_string(es.split.horizon_eps),
                                 rat_to_string(es.split.stage_eps),
                                 rat_to_string(es.split.leak_eps)});
  std::cout << dump_json(bundle_to_json(b));

  if (as_json(sh)) {
    Json j;
    j["eps"] = rat_to_string(eps);
    j["horizon"] = es.horizon;
    j["leak"] = rat_to_string(es.leak);
    j["meets_targets"] = es.ok;
    j["failures"] = es.report.failures;
    std::cerr << dump_json(j);
  } else {
    std::cerr << "eps " << rat_to_string(eps) << "\n";
    std::cerr << "horizon " << es.horizon << "\n";
    std::cerr << "leak " << rat_to_string(es.leak) << "\n";
    std::cerr << "meets " << (es.ok ? "true" : "false") << "\n";
    for (const std::string& f : es.report.failures) std::cerr << "failure " << f << "\n";
  }
  return es.ok ? 0 : 1;
}

int run_synth_optimal(const std::string& game_path, const std::string& fallback_text, double tol,
                      const Shared& sh) {
  Game g = load_game(game_path);
  OptimalSynthOptions opt;
  opt.eps_fallback = parse_rat(fallback_text);
  opt.value_options.tol = tol;
  opt.value_options.parallel = sh.jobs > 1;
  const OptimalSynthesis os = synthesize_optimal(g, opt);

  std::vector<std::pair<StateId, Rat>> targets;
  for (StateId s = 0; s < g.num_states(); ++s)
    targets.emplace_back(s, os.partition.in_s0[s] ? os.values.values[s]
                                                  : os.values.values[s] - os.gap.eps);

  Bundle b;
  b.objective = Objective::Reach;
  b.game = g;
  b.strategy = os.sigma;
  b.targets = targets;
  b.info["eps"] = rat_to_string(os.gap.eps);
  Json s0 = Json::array(), s1 = Json::array();
  for (StateId s : os.partition.s0) s0.push_back(g.state_names[s]);
  for (StateId s : os.partition.s1) s1.push_back(g.state_names[s]);
  b.info["s0"] = std::move(s0);
  b.info["s1"] = std::move(s1);
  Json witnesses = Json::object();
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (os.partition.ranking.rank[s] <= 0) continue;
    Json w;
    w["rank"] = os.partition.ranking.rank[s];
    Json mix = Json::object();
    for (const auto& [a, p] : os.partition.ranking.alpha[s].entries)
      mix[g.max_actions[s][a]] = rat_to_string(p);
    w["alpha"] = std::move(mix);
    w["delta"] = rat_to_string(os.partition.ranking.delta[s]);
    witnesses[g.state_names[s]] = std::move(w);
  }
  b.info["witnesses"] = std::move(witnesses);
  std::cout << dump_json(bundle_to_json(b));

  if (as_json(sh)) {
    Json j;
    j["eps"] = rat_to_string(os.gap.eps);
    j["s0_size"] = os.partition.s0.size();
    j["s1_size"] = os.partition.s1.size();
    j["meets_targets"] = os.ok;
    j["failures"] = os.failures;
    std::cerr << dump_json(j);
  } else {
    std::cerr << "eps " << rat_to_string(os.gap.eps) << "\n";
    std::cerr << "s0-size " << os.partition.s0.size() << "\n";
    std::cerr << "s1-size " << os.partition.s1.size() << "\n";
    std::cerr << "meets " << (os.ok ? "true" : "false") << "\n";
    for (const std::string& f : os.failures) std::cerr << "failure " << f << "\n";
  }
  return os.ok ? 0 : 1;
}

int run_example(const std::string& name, int k, const std::string& qs_text) {
  std::vector<Rat> qs;
  if (!qs_text.empty())
    for (const std::string& part : split_commas(qs_text)) qs.push_back(parse_rat(part));
  std::cout << dump_json(game_to_json(builtin_game(name, k, qs)));
  return 0;
}

int run_random(std::uint64_t seed, int states, int max_a, int max_b, double density,
               bool turn_based, bool float_mode) {
  RandomGameSpec spec;
  spec.seed = seed;
  spec.num_states = states;
  spec.max_a = max_a;
  spec.max_b = max_b;
  spec.density = density;
  spec.turn_based = turn_based;
  spec.mode = float_mode ? Mode::Float : Mode::Exact;
  std::cout << dump_json(game_to_json(random_game(spec)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "csg: solver and strategy-synthesis toolkit for finite two-player zero-sum\n"
      "concurrent stochastic games with reachability/safety objectives"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Shared sh;
  app.add_option("--format", sh.format, "Report format")
      ->check(CLI::IsMember({"records", "json"}));
  app.add_option("--jobs", sh.jobs, "Worker thread cap for parallel kernels")
      ->check(CLI::PositiveNumber);

  std::string game_path = "-";
  std::string objective = "reach";
  std::string eps_text, split_text, s0_text, qs_text;
  std::string fallback_text = "1/100";
  double tol = 1e-9, theta = 1e-6, density = 0.5;
  int horizon_n = -1, k = 3, states = 6, max_a = 3, max_b = 3;
  long runs = 10000, sim_horizon = 100;
  std::uint64_t seed = 1;
  bool turn_based = false, float_mode = false;

  CLI::App* c_validate = app.add_subcommand("validate", "Check a game file; exit 2 on any defect");
  c_validate->add_option("--game", game_path, "Game file ('-' for stdin)");

  CLI::App* c_values = app.add_subcommand("values", "Converged objective values per state");
  c_values->add_option("--game", game_path, "Game file ('-' for stdin)");
  c_values->add_option("--objective", objective, "reach|avoid")->capture_default_str();
  c_values->add_option("--tol", tol, "Iteration tolerance");

  CLI::App* c_horizon = app.add_subcommand("horizon", "Exact n-step reachability values");
  c_horizon->add_option("--game", game_path, "Game file ('-' for stdin)");
  c_horizon->add_option("--horizon", horizon_n, "Number of steps")->required();

  CLI::App* c_safety = app.add_subcommand(
      "synth-safety", "Memoryless optimal safety strategy; bundle on stdout, report on stderr");
  c_safety->add_option("--game", game_path, "Game file ('-' for stdin)");
  c_safety->add_option("--tol", tol, "Iteration tolerance");
  c_safety->add_option("--theta", theta, "Float-mode fixpoint tolerance");

  CLI::App* c_eps = app.add_subcommand(
      "synth-reach-eps",
      "Memoryless eps-optimal reachability strategy; bundle on stdout, report on stderr");
  c_eps->add_option("--game", game_path, "Game file ('-' for stdin)");
  c_eps->add_option("--eps", eps_text, "Accuracy budget, a rational like 1/10")->required();
  c_eps->add_option("--split", split_text, "horizon,stage,leak budget shares (rationals)");
  c_eps->add_option("--s0", s0_text, "Comma-separated states to guarantee (default: value > 0)");
  c_eps->add_option("--tol", tol, "Iteration tolerance");

  CLI::App* c_opt = app.add_subcommand(
      "synth-optimal",
      "Optimal-where-possible reachability strategy; bundle on stdout, report on stderr");
  c_opt->add_option("--game", game_path, "Game file ('-' for stdin)");
  c_opt->add_option("--eps-fallback", fallback_text, "Budget when no classification gap binds");
  c_opt->add_option("--tol", tol, "Iteration tolerance");

  CLI::App* c_leak = app.add_subcommand("leak", "Uniformly leaked copy of the game");
  c_leak->add_option("--game", game_path, "Game file ('-' for stdin)");
  c_leak->add_option("--eps", eps_text, "Per-step leak, a rational like 1/10")->required();

  CLI::App* c_verify = app.add_subcommand(
      "verify", "Exact best-response certificate for a strategy (files or bundle on stdin)");
  std::string v_game, v_strategy, v_targets, v_objective;
  c_verify->add_option("--game", v_game, "Game file");
  c_verify->add_option("--strategy", v_strategy, "Strategy file");
  c_verify->add_option("--targets", v_targets, "Targets file: {state: \"p/q\"}");
  c_verify->add_option("--objective", v_objective, "reach|avoid");

  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Monte Carlo frequencies vs the exact best response (files or bundle on stdin)");
  std::string m_game, m_strategy, m_objective;
  c_sim->add_option("--game", m_game, "Game file");
  c_sim->add_option("--strategy", m_strategy, "Strategy file");
  c_sim->add_option("--objective", m_objective, "reach|avoid");
  c_sim->add_option("--runs", runs, "Number of runs per state");
  c_sim->add_option("--horizon", sim_horizon, "Steps per run");
  c_sim->add_option("--seed", seed, "PRNG seed");

  CLI::App* c_example = app.add_subcommand("example", "Emit a builtin example game");
  std::string example_name;
  c_example->add_option("name", example_name, "snowball|leaky_mdp|value_gift|matching_pennies")
      ->required();
  c_example->add_option("--k", k, "Chain length for leaky-mdp");
  c_example->add_option("--qs", qs_text, "Comma-separated rationals in (1/2,1) for value-gift");

  CLI::App* c_random = app.add_subcommand("random", "Emit a seeded random game");
  c_random->add_option("--seed", seed, "PRNG seed");
  c_random->add_option("--states", states, "State count including the two sinks (>= 3)");
  c_random->add_option("--max-a", max_a, "Max actions per state for Max");
  c_random->add_option("--max-b", max_b, "Max actions per state for Min");
  c_random->add_option("--density", density, "Support density in (0, 1]");
  c_random->add_flag("--turn-based", turn_based, "One trivial side per state");
  c_random->add_flag("--float", float_mode, "Emit a float-mode game");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  omp_set_num_threads(sh.jobs);
  try {
    if (c_validate->parsed()) return run_validate(game_path, sh);
    if (c_values->parsed()) return run_values(game_path, objective, tol, sh);
    if (c_horizon->parsed()) return run_horizon(game_path, horizon_n, sh);
    if (c_safety->parsed()) return run_synth_safety(game_path, tol, theta, sh);
    if (c_eps->parsed())
      return run_synth_reach_eps(game_path, eps_text, split_text, s0_text, tol, sh);
    if (c_opt->parsed()) return run_synth_optimal(game_path, fallback_text, tol, sh);
    if (c_leak->parsed()) return run_leak(game_path, eps_text);
    if (c_verify->parsed()) return run_verify(v_game, v_strategy, v_targets, v_objective, sh);
    if (c_sim->parsed())
      return run_simulate(m_game, m_strategy, m_objective, runs, sim_horizon, seed, sh);
    if (c_example->parsed()) return run_example(example_name, k, qs_text);
    if (c_random->parsed())
      return run_random(seed, states, max_a, max_b, density, turn_based, float_mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
