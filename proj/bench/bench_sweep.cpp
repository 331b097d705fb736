// Benchmark: serial reference Bellman sweep vs the OpenMP-parallel kernel,
// for both the exact-rational and floating-point per-state solvers.
//
// Usage: csg_bench [states] [actions] [sweeps] [seed]
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "csg/bellman.hpp"
#include "csg/random_game.hpp"

using namespace csg;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename Vec, typename Sweep>
double time_sweeps(const Game& g, Vec v, int sweeps, Sweep&& sweep) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < sweeps; ++i) v = sweep(g, v);
  const double dt = seconds_since(t0);
  // Keep the result observable so the loop cannot be optimized away.
  volatile double sink = rat_to_double(Rat(v[0]));
  (void)sink;
  return dt;
}

}  // namespace

int main(int argc, char** argv) {
  RandomGameSpec spec;
  spec.num_states = argc > 1 ? std::atoi(argv[1]) : 40;
  spec.max_a = argc > 2 ? std::atoi(argv[2]) : 4;
  spec.max_b = spec.max_a;
  int sweeps = argc > 3 ? std::atoi(argv[3]) : 50;
  spec.seed = argc > 4 ? std::strtoull(argv[4], nullptr, 10) : 1;
  spec.density = 0.4;

  const Game g = random_game(spec);
  std::printf("game: %d states, <=%d actions/side, %d sweeps, %d OpenMP threads max\n",
              g.num_states(), spec.max_a, sweeps, omp_get_max_threads());

  const auto obj = Objective::Reach;
  {
    auto v0 = initial_vector_double(g, obj);
    double ts = time_sweeps(g, v0, sweeps, [](const Game& gg, const std::vector<double>& v) {
      return sweep_double_serial(gg, v);
    });
    double tp = time_sweeps(g, v0, sweeps, [](const Game& gg, const std::vector<double>& v) {
      return sweep_double_parallel(gg, v);
    });
    std::printf("double kernel:  serial %8.3f ms/sweep   parallel %8.3f ms/sweep   speedup %.2fx\n",
                1e3 * ts / sweeps, 1e3 * tp / sweeps, ts / tp);
  }
  {
    // Rational iterates grow their bit-length roughly quadratically per sweep
    // on dense games, so the exact kernel is timed on a bounded instance.
    RandomGameSpec ex_spec = spec;
    ex_spec.num_states = std::min(spec.num_states, 16);
    const Game ge = random_game(ex_spec);
    int ex_sweeps = std::min(sweeps, 3);
    std::printf("exact game: %d states, %d sweeps\n", ge.num_states(), ex_sweeps);
    auto v0 = initial_vector_exact(ge, obj);
    double ts = time_sweeps(ge, v0, ex_sweeps, [](const Game& gg, const std::vector<Rat>& v) {
      return sweep_exact_serial(gg, v);
    });
    double tp = time_sweeps(ge, v0, ex_sweeps, [](const Game& gg, const std::vector<Rat>& v) {
      return sweep_exact_parallel(gg, v);
    });
    std::printf("exact kernel:   serial %8.3f ms/sweep   parallel %8.3f ms/sweep   speedup %.2fx\n",
                1e3 * ts / ex_sweeps, 1e3 * tp / ex_sweeps, ts / tp);
  }
  return 0;
}
