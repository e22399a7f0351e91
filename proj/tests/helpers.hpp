#pragma once

#include <random>

#include "agdcas/registry.hpp"

namespace th {

using namespace agdcas;

inline DiffPoly U(int i, int n = 0, int a = 1, int b = 1) { return DiffPoly::var(VarKey::u(i, a, b, n)); }
inline DiffPoly V(int i, int n = 0) { return DiffPoly::var(VarKey::make(Family::V, i, 1, 1, n)); }
inline DiffPoly F(int k, int i, int n = 0) { return DiffPoly::var(VarKey::make(factor_family(k), i, 1, 1, n)); }
inline DiffPoly C() { return DiffPoly::var(pencil_param()); }
inline Rational q(long p, long r = 1) { return frac(p, r); }

inline LambdaPoly lam(std::initializer_list<std::pair<int, DiffPoly>> terms) {
  LambdaPoly r;
  for (const auto& [p, c] : terms) r.add_to(p, c);
  return r;
}

inline AdlerContext ctx(int n, int m = 1, bool reduced = false, Flavor f = Flavor::Finite) {
  AdlerContext c;
  c.N = n;
  c.m = m;
  c.reduced = reduced;
  c.flavor = f;
  return c;
}

inline bool same_functional(const DiffPoly& a, const DiffPoly& b) { return LocalFunctional{a}.equals(LocalFunctional{b}); }

}  // namespace th
