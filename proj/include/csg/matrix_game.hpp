// Exact value and optimal mixed strategies of zero-sum matrix games.
// Row player maximizes, column player minimizes.
#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "csg/distribution.hpp"
#include "csg/lp.hpp"
#include "csg/rational.hpp"

namespace csg {

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<Rat> data;  // row-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, Rat(0)) {}
  Rat& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const Rat& at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

struct MatrixSolution {
  Rat value;
  Distribution row_strategy;  // keys are row indices
  Distribution col_strategy;  // keys are column indices
};

namespace detail {

// Row player's LP on a matrix with nonnegative entries:
//   maximize t  s.t.  (x^T M)_j - t >= 0 for all j,  sum x = 1,  x,t >= 0.
inline LpSolution solve_row_lp(const Matrix& m) {
  LinearProgram lp;
  lp.num_vars = m.rows + 1;
  lp.objective.assign(lp.num_vars, Rat(0));
  lp.objective[m.rows] = 1;
  for (int j = 0; j < m.cols; ++j) {
    std::vector<Rat> row(lp.num_vars, Rat(0));
    for (int i = 0; i < m.rows; ++i) row[i] = m.at(i, j);
    row[m.rows] = -1;
    lp.add_row(std::move(row), LinearProgram::GE, Rat(0));
  }
  std::vector<Rat> simplex_row(lp.num_vars, Rat(1));
  simplex_row[m.rows] = 0;
  lp.add_row(std::move(simplex_row), LinearProgram::EQ, Rat(1));
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpSolution::Optimal)
    throw std::logic_error("matrix game LP did not solve");  // cannot happen on valid input
  return sol;
}

inline Matrix negated_transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) t.at(j, i) = -m.at(i, j);
  return t;
}

}  // namespace detail

// Exact optimal solution. Deterministic: fast paths break ties by lowest
// index, and the LP pivots by Bland's rule.
inline MatrixSolution solve_matrix_game(const Matrix& m) {
  if (m.rows == 0 || m.cols == 0) throw std::invalid_argument("empty matrix game");
  MatrixSolution out;

  if (m.rows == 1) {  // Min picks the smallest column
    int best = 0;
    for (int j = 1; j < m.cols; ++j)
      if (m.at(0, j) < m.at(0, best)) best = j;
    out.value = m.at(0, best);
    out.row_strategy = Distribution::point(0);
    out.col_strategy = Distribution::point(best);
    return out;
  }
  if (m.cols == 1) {  // Max picks the largest row
    int best = 0;
    for (int i = 1; i < m.rows; ++i)
      if (m.at(i, 0) > m.at(best, 0)) best = i;
    out.value = m.at(best, 0);
    out.row_strategy = Distribution::point(best);
    out.col_strategy = Distribution::point(0);
    return out;
  }
  if (m.rows == 2 && m.cols == 2) {
    const Rat a = m.at(0, 0), b = m.at(0, 1), c = m.at(1, 0), d = m.at(1, 1);
    const Rat row0 = std::min(a, b), row1 = std::min(c, d);
    const Rat col0 = std::max(a, c), col1 = std::max(b, d);
    const Rat lower = std::max(row0, row1), upper = std::min(col0, col1);
    if (lower == upper) {  // saddle point: pure optimal strategies
      out.value = lower;
      out.row_strategy = Distribution::point(row0 == lower ? 0 : 1);
      out.col_strategy = Distribution::point(col0 == upper ? 0 : 1);
      return out;
    }
    const Rat den = a + d - b - c;  // nonzero when there is no saddle
    out.value = (a * d - b * c) / den;
    Rat x0 = (d - c) / den;  // mass on row 0
    Rat y0 = (d - b) / den;  // mass on column 0
    Distribution rs, cs;
    if (x0 != 0) rs.entries.emplace_back(0, x0);
    if (x0 != 1) rs.entries.emplace_back(1, Rat(1) - x0);
    if (y0 != 0) cs.entries.emplace_back(0, y0);
    if (y0 != 1) cs.entries.emplace_back(1, Rat(1) - y0);
    out.row_strategy = std::move(rs);
    out.col_strategy = std::move(cs);
    return out;
  }

  // General case: shift entries to nonnegative, solve both players' LPs,
  // and insist on an exactly zero duality gap.
  Rat shift(0);
  for (const Rat& v : m.data)
    if (v < shift) shift = v;
  Matrix shifted = m;
  if (shift < 0)
    for (Rat& v : shifted.data) v -= shift;

  LpSolution row_sol = detail::solve_row_lp(shifted);
  // Column player's optimal mix solves the row LP of the negated transpose
  // (shifted to nonnegative as well).
  Matrix dual = detail::negated_transpose(shifted);
  Rat dual_shift(0);
  for (const Rat& v : dual.data)
    if (v < dual_shift) dual_shift = v;
  if (dual_shift < 0)
    for (Rat& v : dual.data) v -= dual_shift;
  LpSolution col_sol = detail::solve_row_lp(dual);

  Rat row_value = row_sol.objective;
  Rat col_value = -(col_sol.objective + dual_shift);
  if (row_value != col_value)
    throw std::logic_error("matrix game duality gap is not zero");  // would be a solver bug
  out.value = row_value + shift;
  Distribution rs, cs;
  for (int i = 0; i < m.rows; ++i)
    if (row_sol.x[i] != 0) rs.entries.emplace_back(i, row_sol.x[i]);
  for (int j = 0; j < m.cols; ++j)
    if (col_sol.x[j] != 0) cs.entries.emplace_back(j, col_sol.x[j]);
  out.row_strategy = std::move(rs);
  out.col_strategy = std::move(cs);
  return out;
}

// Value of a fixed row mix against a best-responding column player, plus the
// lowest-index minimizing column.
inline std::pair<Rat, int> best_response_value(const Matrix& m, const Distribution& row_mix) {
  if (m.cols == 0) throw std::invalid_argument("empty matrix game");
  Rat best;
  int arg = -1;
  for (int j = 0; j < m.cols; ++j) {
    Rat v(0);
    for (const auto& [i, p] : row_mix.entries) v += p * m.at(i, j);
    if (arg < 0 || v < best) {
      best = v;
      arg = j;
    }
  }
  return {best, arg};
}

// ---- Floating-point value kernel ----
//
// Game value in double arithmetic, for use inside iterative sweeps where
// per-state exactness is unnecessary and an exact LP per state per sweep
// would dominate the runtime. The exact solver above stays the authority
// for strategy extraction and certificates.
//
// After shifting all entries above 1, the game value v' > 0 equals
// 1 / max{ sum z : M' z <= 1, z >= 0 }, a canonical-form LP whose slack
// basis is feasible, so a single primal simplex phase suffices.
inline double solve_matrix_value_double(const double* data, int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("empty matrix game");
  auto at = [&](int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; };

  if (rows == 1) {
    double best = at(0, 0);
    for (int j = 1; j < cols; ++j) best = std::min(best, at(0, j));
    return best;
  }
  if (cols == 1) {
    double best = at(0, 0);
    for (int i = 1; i < rows; ++i) best = std::max(best, at(i, 0));
    return best;
  }
  if (rows == 2 && cols == 2) {
    const double a = at(0, 0), b = at(0, 1), c = at(1, 0), d = at(1, 1);
    const double lo = std::max(std::min(a, b), std::min(c, d));
    const double hi = std::min(std::max(a, c), std::max(b, d));
    if (lo >= hi) return lo;  // pure saddle point
    return (a * d - b * c) / ((a + d) - (b + c));
  }

  // Shift entries into [1, 2+span] so the transformed value is positive.
  double min_e = data[0], max_e = data[0];
  const std::size_t total = static_cast<std::size_t>(rows) * cols;
  for (std::size_t k = 1; k < total; ++k) {
    min_e = std::min(min_e, data[k]);
    max_e = std::max(max_e, data[k]);
  }
  const double shift = 1.0 - min_e;

  // Tableau for: maximize sum z  s.t.  M' z + s = 1, z, s >= 0, where z is
  // the column player's strategy scaled by 1/value. Constraint r < rows is
  // row r of M'; the last tableau row is the objective.
  const int nv = cols + rows;  // structural + slack variables
  std::vector<double> tab(static_cast<std::size_t>(rows + 1) * (nv + 1), 0.0);
  auto t = [&](int r, int c) -> double& { return tab[static_cast<std::size_t>(r) * (nv + 1) + c]; };
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < cols; ++j) t(r, j) = at(r, j) + shift;
    t(r, cols + r) = 1.0;
    t(r, nv) = 1.0;
  }
  for (int j = 0; j < cols; ++j) t(rows, j) = -1.0;  // reduced costs of z

  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) basis[r] = cols + r;

  constexpr double kPivTol = 1e-12;
  const int max_pivots = 2000 + 40 * nv * nv;
  for (int iter = 0;; ++iter) {
    int enter = -1;
    for (int c = 0; c < nv; ++c)
      if (t(rows, c) < -kPivTol) {
        enter = c;  // Bland: lowest eligible index
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows; ++r) {
      if (t(r, enter) <= kPivTol) continue;
      const double ratio = t(r, nv) / t(r, enter);
      if (leave < 0 || ratio < best_ratio - kPivTol ||
          (ratio < best_ratio + kPivTol && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0 || iter >= max_pivots) {
      // Numerically stuck (should not happen on probabilistic payoffs):
      // fall back to the exact solver on a rationalized copy.
      Matrix m(rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = rat_from_double(at(i, j));
      return rat_to_double(solve_matrix_game(m).value);
    }
    const double piv = t(leave, enter);
    for (int c = 0; c <= nv; ++c) t(leave, c) /= piv;
    for (int r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double f = t(r, enter);
      if (f == 0.0) continue;
      for (int c = 0; c <= nv; ++c) t(r, c) -= f * t(leave, c);
    }
    basis[leave] = enter;
  }

  const double inv_value = t(rows, nv);  // optimal sum z = 1 / shifted value
  if (!(inv_value > 0.0)) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m.at(i, j) = rat_from_double(at(i, j));
    return rat_to_double(solve_matrix_game(m).value);
  }
  return 1.0 / inv_value - shift;
}

inline double solve_matrix_value_double(const std::vector<double>& data, int rows, int cols) {
  if (data.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("matrix data size mismatch");
  return solve_matrix_value_double(data.data(), rows, cols);
}

// Column-side counterpart: fixed column mix against a best-responding
// (maximizing) row player; returns the lowest-index maximizing row.
inline std::pair<Rat, int> best_response_row_value(const Matrix& m, const Distribution& col_mix) {
  if (m.rows == 0) throw std::invalid_argument("empty matrix game");
  Rat best;
  int arg = -1;
  for (int i = 0; i < m.rows; ++i) {
    Rat v(0);
    for (const auto& [j, p] : col_mix.entries) v += p * m.at(i, j);
    if (arg < 0 || v > best) {
      best = v;
      arg = i;
    }
  }
  return {best, arg};
}

}  // namespace csg
