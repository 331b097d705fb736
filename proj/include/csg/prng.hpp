// Splittable counter-based PRNG (splitmix64 over a hashed (seed, stream)
// key). Every value is a pure function of (seed, stream, counter), so
// parallel simulation runs are deterministic regardless of scheduling.
#pragma once

#include <cstdint>

#include "csg/rational.hpp"

namespace csg {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

class Prng {
 public:
  Prng(std::uint64_t seed, std::uint64_t stream)
      : key_(detail::splitmix64(seed ^ detail::splitmix64(stream))), counter_(0) {}

  std::uint64_t next_u64() { return detail::splitmix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

  // Uniform in [0, 1) with 53 random bits; exactly representable as k/2^53.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Same draw as an exact rational k/2^53 (for exact CDF walks).
  Rat next_uniform_rat() {
    Rat r(static_cast<unsigned long>(next_u64() >> 11), 1);
    r /= Rat(mpz_class(1) << 53);
    r.canonicalize();
    return r;
  }

  // Uniform integer in [0, n) by rejection-free multiply-shift (n small).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace csg
