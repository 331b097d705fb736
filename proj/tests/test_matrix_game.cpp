// Exact matrix-game solver tests: frozen closed-form oracles, the zero
// duality-gap invariant on random instances, a discretized-minimax
// cross-check, and agreement of the floating-point value kernel.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "csg/matrix_game.hpp"
#include "csg/prng.hpp"

using namespace csg;

namespace {

Matrix make(int r, int c, const std::vector<Rat>& entries) {
  Matrix m(r, c);
  m.data = entries;
  return m;
}

// Worst column payoff of a fixed row mix.
Rat guarantee_of_rows(const Matrix& m, const Distribution& x) {
  Rat worst;
  for (int j = 0; j < m.cols; ++j) {
    Rat pay(0);
    for (const auto& [i, p] : x.entries) pay += p * m.at(i, j);
    if (j == 0 || pay < worst) worst = pay;
  }
  return worst;
}

// Best row payoff against a fixed column mix.
Rat exposure_of_cols(const Matrix& m, const Distribution& y) {
  Rat best;
  for (int i = 0; i < m.rows; ++i) {
    Rat pay(0);
    for (const auto& [j, p] : y.entries) pay += p * m.at(i, j);
    if (i == 0 || pay > best) best = pay;
  }
  return best;
}

Matrix random_matrix(Prng& rng, int max_dim) {
  const int r = 1 + static_cast<int>(rng.next_below(max_dim));
  const int c = 1 + static_cast<int>(rng.next_below(max_dim));
  Matrix m(r, c);
  for (Rat& x : m.data) {
    const long num = static_cast<long>(rng.next_below(41)) - 20;  // in [-20, 20]
    const long den = 1 + static_cast<long>(rng.next_below(8));
    x = make_rat(num, den);
  }
  return m;
}

}  // namespace

TEST_CASE("snowball local matrix under value 2/3 has value 3/4") {
  // [[v, 1], [1, 0]] with v = 2/3: no saddle point, so the 2x2 closed form
  // (ad - bc) / (a + d - b - c) applies and gives 1 / (2 - v) = 3/4.
  const Matrix m = make(2, 2, {Rat(2, 3), Rat(1), Rat(1), Rat(0)});
  const MatrixSolution sol = solve_matrix_game(m);
  CHECK(sol.value == Rat(3, 4));
  CHECK(guarantee_of_rows(m, sol.row_strategy) == Rat(3, 4));
  CHECK(exposure_of_cols(m, sol.col_strategy) == Rat(3, 4));
}

TEST_CASE("matching pennies: value 1/2 with uniform mixes") {
  const Matrix m = make(2, 2, {Rat(1), Rat(0), Rat(0), Rat(1)});
  const MatrixSolution sol = solve_matrix_game(m);
  CHECK(sol.value == Rat(1, 2));
  REQUIRE(sol.row_strategy.entries.size() == 2);
  REQUIRE(sol.col_strategy.entries.size() == 2);
  CHECK(sol.row_strategy.at(0) == Rat(1, 2));
  CHECK(sol.row_strategy.at(1) == Rat(1, 2));
  CHECK(sol.col_strategy.at(0) == Rat(1, 2));
  CHECK(sol.col_strategy.at(1) == Rat(1, 2));
}

TEST_CASE("single-row and single-column fast paths") {
  // 1xN: Min picks the smallest column.
  const Matrix row = make(1, 3, {Rat(5), Rat(2), Rat(7)});
  CHECK(solve_matrix_game(row).value == Rat(2));
  // Mx1: Max picks the largest row.
  const Matrix col = make(3, 1, {Rat(-1), Rat(4), Rat(3)});
  CHECK(solve_matrix_game(col).value == Rat(4));
}

TEST_CASE("2x2 saddle point is found as a pure pair") {
  // Row 0 dominates; column 0 dominates: saddle at (0,0) with value 2.
  const Matrix m = make(2, 2, {Rat(2), Rat(3), Rat(1), Rat(0)});
  const MatrixSolution sol = solve_matrix_game(m);
  CHECK(sol.value == Rat(2));
  CHECK(sol.row_strategy.entries.size() == 1);
  CHECK(sol.col_strategy.entries.size() == 1);
}

TEST_CASE("negative entries are handled exactly") {
  const Matrix m = make(2, 2, {Rat(-1), Rat(1), Rat(1), Rat(-1)});
  CHECK(solve_matrix_game(m).value == Rat(0));
}

TEST_CASE("random matrices: mutual best responses, zero duality gap") {
  Prng rng(2024, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix m = random_matrix(rng, 6);
    const MatrixSolution sol = solve_matrix_game(m);
    INFO("trial ", trial, ": ", m.rows, "x", m.cols);
    // The row mix guarantees >= value against EVERY column, the column mix
    // concedes <= value against EVERY row, and the two bounds coincide.
    CHECK(guarantee_of_rows(m, sol.row_strategy) == sol.value);
    CHECK(exposure_of_cols(m, sol.col_strategy) == sol.value);
    // best_response_value agrees with the direct scan.
    CHECK(best_response_value(m, sol.row_strategy).first == sol.value);
    CHECK(best_response_row_value(m, sol.col_strategy).first == sol.value);
  }
}

TEST_CASE("discretized minimax cross-check on a 3x3 game") {
  // Independent approximation: scan row mixes on a grid of step 1/200 over
  // the simplex and take the best worst-column payoff. The grid maximin
  // lower-bounds the true value and comes within the grid resolution.
  const Matrix m = make(3, 3,
                        {Rat(1), Rat(-1), Rat(0),
                         Rat(-1), Rat(1), Rat(1, 2),
                         Rat(0), Rat(1, 2), Rat(-1, 2)});
  const MatrixSolution sol = solve_matrix_game(m);

  const int grid = 200;
  Rat best(-1000);
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; i + j <= grid; ++j) {
      Distribution x;
      if (i > 0) x.entries.emplace_back(0, Rat(i, grid));
      if (j > 0) x.entries.emplace_back(1, Rat(j, grid));
      if (grid - i - j > 0) x.entries.emplace_back(2, Rat(grid - i - j, grid));
      const Rat worst = guarantee_of_rows(m, x);
      if (worst > best) best = worst;
    }
  CHECK(best <= sol.value);
  CHECK(sol.value - best <= Rat(1, 100));
}

TEST_CASE("double value kernel agrees with the exact solver") {
  Prng rng(99, 1);
  for (int trial = 0; trial < 400; ++trial) {
    const Matrix m = random_matrix(rng, 6);
    const Rat exact = solve_matrix_game(m).value;
    std::vector<double> data(m.data.size());
    for (std::size_t k = 0; k < data.size(); ++k) data[k] = rat_to_double(m.data[k]);
    const double approx = solve_matrix_value_double(data, m.rows, m.cols);
    INFO("trial ", trial, ": ", m.rows, "x", m.cols, " exact ", rat_to_string(exact));
    CHECK(std::abs(approx - rat_to_double(exact)) <= 1e-9);
  }
}
