// Exact-rational linear programming: dense two-phase primal simplex with
// Bland's rule (no cycling, no tolerances — every pivot is exact).
#pragma once

#include <stdexcept>
#include <vector>

#include "csg/rational.hpp"

namespace csg {

struct LinearProgram {
  enum Rel { LE, EQ, GE };
  struct Row {
    std::vector<Rat> coeff;  // size num_vars
    Rel rel = LE;
    Rat rhs = Rat(0);
  };
  int num_vars = 0;
  std::vector<Rat> objective;  // maximize objective . x, x >= 0
  std::vector<Row> rows;

  void add_row(std::vector<Rat> coeff, Rel rel, Rat rhs) {
    rows.push_back(Row{std::move(coeff), rel, std::move(rhs)});
  }
};

struct LpSolution {
  enum Status { Optimal, Infeasible, Unbounded };
  Status status = Infeasible;
  Rat objective = Rat(0);
  std::vector<Rat> x;
};

namespace detail {

// Simplex working state: A x = b with basis tracking, maximizing d . x.
struct Tableau {
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  std::vector<int> basis;      // basis[i] = variable index basic in row i
  std::vector<bool> banned;    // columns that may never enter (artificials)
  std::vector<Rat> d;          // reduced costs
  Rat z = Rat(0);              // objective value of current basic solution

  int rows() const { return static_cast<int>(a.size()); }
  int cols() const { return static_cast<int>(banned.size()); }

  void pivot(int r, int j) {
    Rat div = a[r][j];
    for (Rat& v : a[r]) v /= div;
    b[r] /= div;
    for (int i = 0; i < rows(); ++i) {
      if (i == r || a[i][j] == 0) continue;
      Rat f = a[i][j];
      for (int k = 0; k < cols(); ++k)
        if (a[r][k] != 0) a[i][k] -= f * a[r][k];
      a[i][j] = 0;
      b[i] -= f * b[r];
    }
    if (d[j] != 0) {
      Rat f = d[j];
      for (int k = 0; k < cols(); ++k)
        if (a[r][k] != 0) d[k] -= f * a[r][k];
      d[j] = 0;
      z += f * b[r];
    }
    basis[r] = j;
  }

  // Subtracts basic-variable contributions so d is a proper reduced-cost row.
  void price_out_basis() {
    for (int i = 0; i < rows(); ++i) {
      int v = basis[i];
      if (d[v] == 0) continue;
      Rat f = d[v];
      for (int k = 0; k < cols(); ++k)
        if (a[i][k] != 0) d[k] -= f * a[i][k];
      d[v] = 0;
      z += f * b[i];
    }
  }

  // Bland's rule. Returns Optimal or Unbounded.
  LpSolution::Status run() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j)
        if (!banned[j] && d[j] > 0) {
          enter = j;
          break;
        }
      if (enter < 0) return LpSolution::Optimal;
      int leave = -1;
      Rat best;
      for (int i = 0; i < rows(); ++i) {
        if (a[i][enter] <= 0) continue;
        Rat ratio = b[i] / a[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return LpSolution::Unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  for (const auto& row : lp.rows)
    if (static_cast<int>(row.coeff.size()) != n)
      throw std::invalid_argument("solve_lp: row width mismatch");
  if (static_cast<int>(lp.objective.size()) != n)
    throw std::invalid_argument("solve_lp: objective width mismatch");

  // Normalize to rhs >= 0; count extra columns.
  std::vector<LinearProgram::Row> rows = lp.rows;
  for (auto& row : rows) {
    if (row.rhs < 0) {
      for (Rat& c : row.coeff) c = -c;
      row.rhs = -row.rhs;
      row.rel = row.rel == LinearProgram::LE   ? LinearProgram::GE
                : row.rel == LinearProgram::GE ? LinearProgram::LE
                                               : LinearProgram::EQ;
    }
  }
  int num_slack = 0, num_art = 0;
  for (const auto& row : rows) {
    if (row.rel != LinearProgram::EQ) ++num_slack;
    if (row.rel != LinearProgram::LE) ++num_art;
  }
  const int total = n + num_slack + num_art;
  detail::Tableau t;
  t.a.assign(m, std::vector<Rat>(total, Rat(0)));
  t.b.resize(m);
  t.basis.assign(m, -1);
  t.banned.assign(total, false);
  int next_slack = n, next_art = n + num_slack;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.a[i][j] = rows[i].coeff[j];
    t.b[i] = rows[i].rhs;
    switch (rows[i].rel) {
      case LinearProgram::LE:
        t.a[i][next_slack] = 1;
        t.basis[i] = next_slack++;
        break;
      case LinearProgram::GE:
        t.a[i][next_slack] = -1;
        ++next_slack;
        t.a[i][next_art] = 1;
        t.basis[i] = next_art++;
        break;
      case LinearProgram::EQ:
        t.a[i][next_art] = 1;
        t.basis[i] = next_art++;
        break;
    }
  }

  // Phase 1: maximize -(sum of artificials); feasible iff optimum is 0.
  if (num_art > 0) {
    t.d.assign(total, Rat(0));
    t.z = 0;
    for (int j = n + num_slack; j < total; ++j) t.d[j] = Rat(-1);
    t.price_out_basis();
    if (t.run() != LpSolution::Optimal)
      throw std::logic_error("solve_lp: phase 1 unbounded");  // impossible: objective <= 0
    if (t.z != 0) return LpSolution{LpSolution::Infeasible, Rat(0), {}};
    // Drive leftover artificials out of the basis (their value is 0).
    for (int i = 0; i < t.rows(); ++i) {
      if (t.basis[i] < n + num_slack) continue;
      int j = 0;
      for (; j < n + num_slack; ++j)
        if (t.a[i][j] != 0) break;
      if (j < n + num_slack) t.pivot(i, j);
    }
    // Any row still basic in an artificial is all-zero (redundant): drop it.
    for (int i = t.rows() - 1; i >= 0; --i) {
      if (t.basis[i] < n + num_slack) continue;
      t.a.erase(t.a.begin() + i);
      t.b.erase(t.b.begin() + i);
      t.basis.erase(t.basis.begin() + i);
    }
    for (int j = n + num_slack; j < total; ++j) t.banned[j] = true;
  }

  // Phase 2: the real objective.
  t.d.assign(total, Rat(0));
  t.z = 0;
  for (int j = 0; j < n; ++j) t.d[j] = lp.objective[j];
  t.price_out_basis();
  LpSolution::Status st = t.run();
  if (st == LpSolution::Unbounded) return LpSolution{LpSolution::Unbounded, Rat(0), {}};

  LpSolution sol;
  sol.status = LpSolution::Optimal;
  sol.objective = t.z;
  sol.x.assign(n, Rat(0));
  for (int i = 0; i < t.rows(); ++i)
    if (t.basis[i] < n) sol.x[t.basis[i]] = t.b[i];
  return sol;
}

}  // namespace csg
