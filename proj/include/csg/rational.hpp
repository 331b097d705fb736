// Exact rational arithmetic helpers on top of GMP's mpq_class.
#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace csg {

using Rat = mpq_class;

// Parses "p/q" or a bare integer "p". Throws std::invalid_argument on garbage
// or a zero denominator. Result is canonicalized (gcd reduced, q > 0).
inline Rat parse_rat(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : text) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+'))
      throw std::invalid_argument("bad rational literal '" + text + "'");
  }
  mpq_class q;
  if (q.set_str(text, 10) != 0)
    throw std::invalid_argument("bad rational literal '" + text + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

// Canonicalized rational from an arbitrary numerator/denominator pair. The
// mpq_class two-argument constructor does NOT reduce to lowest terms, and
// GMP arithmetic and comparisons assume canonical operands — route any
// possibly non-coprime pair through here.
inline Rat make_rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Canonical form: "p/q", or plain "p" when the denominator is 1.
inline std::string rat_to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline double rat_to_double(const Rat& q) { return q.get_d(); }

// Exact conversion: every finite double is a binary rational.
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite probability");
  Rat q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

// Best rational approximation to x with denominator <= max_den, by walking the
// continued-fraction expansion (convergents and the boundary semiconvergent).
// x must be in [0, 1] for our uses but the routine is general.
inline Rat snap_rational(const Rat& x, const mpz_class& max_den) {
  if (x.get_den() <= max_den) return x;
  // Continued fraction state: p_{k-1}/q_{k-1}, p_k/q_k.
  mpz_class p0 = 1, q0 = 0, p1, q1;  // p1/q1 = floor(x) initially
  mpz_class num = x.get_num(), den = x.get_den();
  mpz_class a = num / den;  // floor for positive; our x >= 0 in practice
  if (num < 0) {            // floor division for negatives
    mpz_class r = num % den;
    if (r != 0) a -= 1;
  }
  p1 = a;
  q1 = 1;
  mpz_class rem = num - a * den;
  while (rem != 0) {
    num = den;
    den = rem;
    a = num / den;
    rem = num - a * den;
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) {
      // Best semiconvergent: largest t <= a with q0 + t*q1 <= max_den.
      mpz_class t = (max_den - q0) / q1;
      Rat semi(p0 + t * p1, q0 + t * q1);
      semi.canonicalize();
      Rat conv(p1, q1);
      conv.canonicalize();
      // Pick whichever is closer to x; ties go to the smaller denominator
      // (the convergent), which also keeps the choice deterministic.
      Rat ds = abs(x - semi), dc = abs(x - conv);
      // A semiconvergent with t*2 < a is never closer than the convergent,
      // but comparing distances directly is simplest and always exact.
      return dc <= ds ? conv : semi;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return Rat(p1, q1);  // terminated within the bound
}

inline bool is_probability(const Rat& q) { return q >= 0 && q <= 1; }

}  // namespace csg
