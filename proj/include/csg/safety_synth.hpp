// Memoryless Max strategy for the safety objective (avoid the bottom sink):
// play, at every state, an exact maximin mix of the one-step game induced by
// the safety value vector. At a fixpoint this is optimal; the caller gets
// the guarantee from an exact certificate, not from trust in the input.
#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "csg/bellman.hpp"
#include "csg/game.hpp"
#include "csg/matrix_game.hpp"
#include "csg/strategy.hpp"

namespace csg {

// Builds the per-state maximin strategy for v_safe. Refuses (throws) when
// v_safe is not a fixpoint of the safety operator within refuse_tol: the
// maximin rows of a vector far from the fixpoint carry no guarantee.
//
// v_safe may be an exact fixpoint (pass refuse_tol = 0) or a converged
// iterate lifted to rationals, in which case refuse_tol should cover the
// iteration residual.
inline MemorylessStrategy synthesize_safety(const Game& g, const std::vector<Rat>& v_safe,
                                            const Rat& refuse_tol = Rat(0)) {
  if (v_safe.size() != static_cast<std::size_t>(g.num_states()))
    throw std::invalid_argument("value vector size mismatch");
  for (const Rat& x : v_safe)
    if (x < 0 || x > 1) throw std::invalid_argument("value vector entry outside [0, 1]");
  if (abs(v_safe[g.top] - 1) > refuse_tol)
    throw std::runtime_error("refusing safety synthesis: top sink value " +
                             rat_to_string(v_safe[g.top]) + " is not 1");
  if (abs(v_safe[g.bottom]) > refuse_tol)
    throw std::runtime_error("refusing safety synthesis: bottom sink value " +
                             rat_to_string(v_safe[g.bottom]) + " is not 0");

  MemorylessStrategy sigma;
  sigma.player = Player::Max;
  sigma.choice.reserve(g.num_states());
  for (StateId s = 0; s < g.num_states(); ++s) {
    if (g.is_sink_state(s)) {
      sigma.choice.push_back(Distribution::point(0));
      continue;
    }
    const MatrixSolution sol = solve_matrix_game(local_matrix(g, s, v_safe));
    if (abs(sol.value - v_safe[s]) > refuse_tol)
      throw std::runtime_error("refusing safety synthesis: residual " +
                               rat_to_string(abs(sol.value - v_safe[s])) + " at state '" +
                               g.state_names[s] + "' exceeds tolerance " +
                               rat_to_string(refuse_tol));
    sigma.choice.push_back(sol.row_strategy);
  }
  return sigma;
}

}  // namespace csg
