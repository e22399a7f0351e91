#pragma once

#include <gmpxx.h>

#include <string>

namespace agdcas {

using Rational = mpq_class;

// Generalized binomial coefficient binom(n, k) for integer n of any sign.
Rational binom(long n, long k);
// Generalized binomial coefficient with a rational top entry.
Rational binom(const Rational& top, long k);

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

// p/q in canonical form (mpq_class(p, q) alone does not reduce).
inline Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

}  // namespace agdcas
