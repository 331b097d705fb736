// Exact dense linear solves (Gaussian elimination over rationals).
#pragma once

#include <stdexcept>
#include <vector>

#include "csg/rational.hpp"

namespace csg {

// Solves A X = B for possibly multiple right-hand sides (B column-major:
// rhs[k] is the k-th right-hand side). Throws on a singular matrix.
inline std::vector<std::vector<Rat>> solve_linear_multi(std::vector<std::vector<Rat>> a,
                                                        std::vector<std::vector<Rat>> rhs) {
  const int n = static_cast<int>(a.size());
  const int k = static_cast<int>(rhs.size());
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::logic_error("solve_linear: singular system");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      for (int j = 0; j < k; ++j) std::swap(rhs[j][piv], rhs[j][col]);
    }
    Rat inv = a[col][col];
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col] / inv;
      for (int c = col; c < n; ++c)
        if (a[col][c] != 0) a[r][c] -= f * a[col][c];
      a[r][col] = 0;
      for (int j = 0; j < k; ++j) rhs[j][r] -= f * rhs[j][col];
    }
  }
  for (int col = 0; col < n; ++col)
    for (int j = 0; j < k; ++j) rhs[j][col] /= a[col][col];
  return rhs;
}

inline std::vector<Rat> solve_linear(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  auto res = solve_linear_multi(std::move(a), {std::move(b)});
  return res[0];
}

}  // namespace csg
