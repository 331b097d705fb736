// Sparse probability distribution over small integer keys (state or action
// indices). Invariants: keys sorted and unique, entries strictly positive.
#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "csg/prng.hpp"
#include "csg/rational.hpp"

namespace csg {

struct Distribution {
  // (key, probability), sorted by key, probabilities > 0.
  std::vector<std::pair<int, Rat>> entries;

  Distribution() = default;
  explicit Distribution(std::vector<std::pair<int, Rat>> e) : entries(std::move(e)) {
    normalize_shape();
  }
  static Distribution point(int key) { return Distribution({{key, Rat(1)}}); }

  // Sorts by key, merges duplicates, drops zero entries. Does not rescale.
  void normalize_shape() {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, Rat>> merged;
    for (auto& [k, p] : entries) {
      if (!merged.empty() && merged.back().first == k)
        merged.back().second += p;
      else
        merged.emplace_back(k, p);
    }
    std::erase_if(merged, [](const auto& e) { return e.second == 0; });
    entries = std::move(merged);
  }

  Rat mass() const {
    Rat m(0);
    for (const auto& [k, p] : entries) m += p;
    return m;
  }

  Rat at(int key) const {
    for (const auto& [k, p] : entries)
      if (k == key) return p;
    return Rat(0);
  }

  bool has(int key) const { return at(key) != 0; }

  // Total mass on keys accepted by the predicate.
  template <class Pred>
  Rat mass_where(Pred pred) const {
    Rat m(0);
    for (const auto& [k, p] : entries)
      if (pred(k)) m += p;
    return m;
  }

  // Exact CDF walk; u must be in [0, 1). Assumes total mass 1.
  int sample(const Rat& u) const {
    Rat acc(0);
    for (const auto& [k, p] : entries) {
      acc += p;
      if (u < acc) return k;
    }
    return entries.back().first;  // guards against u == mass on rounding-free input
  }
};

}  // namespace csg
