#include "agdcas/rational.hpp"

#include <stdexcept>

namespace agdcas {

Rational binom(const Rational& top, long k) {
  if (k < 0) return Rational(0);
  Rational r(1);
  for (long t = 1; t <= k; ++t) {
    r *= (top - (t - 1));
    r /= t;
  }
  r.canonicalize();
  return r;
}

Rational binom(long n, long k) { return binom(Rational(n), k); }

Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  q.canonicalize();
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

}  // namespace agdcas
