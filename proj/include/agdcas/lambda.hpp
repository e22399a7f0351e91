#pragma once

#include <map>
#include <utility>
#include <vector>

#include "agdcas/diffpoly.hpp"

namespace agdcas {

// Polynomial in λ with differential-polynomial coefficients; coefficient p
// multiplies λ^p.  Always trimmed: the top coefficient is nonzero.
class LambdaPoly {
 public:
  LambdaPoly() = default;
  LambdaPoly(const DiffPoly& c0);  // NOLINT: constant in λ
  static LambdaPoly monomial(const DiffPoly& c, int p);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const DiffPoly& coeff(int p) const;
  const std::vector<DiffPoly>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  void add_to(int p, const DiffPoly& c);

  LambdaPoly& operator+=(const LambdaPoly& o);
  LambdaPoly& operator-=(const LambdaPoly& o);
  friend LambdaPoly operator+(LambdaPoly a, const LambdaPoly& b) { return a += b; }
  friend LambdaPoly operator-(LambdaPoly a, const LambdaPoly& b) { return a -= b; }
  LambdaPoly operator-() const;
  // Multiplication by a differential polynomial (no derivation involved).
  friend LambdaPoly operator*(const DiffPoly& f, const LambdaPoly& x);
  friend LambdaPoly operator*(const LambdaPoly& x, const Rational& c);
  bool operator==(const LambdaPoly& o) const { return c_ == o.c_; }

 private:
  void trim();
  std::vector<DiffPoly> c_;
};

// (λ+∂)^n X with ∂ acting on the coefficients of X.
LambdaPoly shift_apply(int n, const LambdaPoly& x);
// (−λ−∂)^n X.
LambdaPoly neg_shift_apply(int n, const LambdaPoly& x);
// H(λ+∂) X = Σ_q h_q (λ+∂)^q X.
LambdaPoly apply_symbol(const LambdaPoly& h, const LambdaPoly& x);
// Σ_p (−λ−∂)^p h_p: the value {b_{−λ−∂} a} from {b_λ a} = Σ λ^p h_p.
LambdaPoly flip(const LambdaPoly& h);

// Finite sum Σ c · P (λ+∂)^{-1} Q with monomial P, Q, stored canonically.
using NonlocalPart = std::map<std::pair<Monomial, Monomial>, Rational>;

struct LambdaValue {
  LambdaPoly local;
  NonlocalPart nonlocal;

  LambdaValue() = default;
  LambdaValue(LambdaPoly l) : local(std::move(l)) {}  // NOLINT

  bool is_local() const { return nonlocal.empty(); }
  bool is_zero() const { return local.is_zero() && nonlocal.empty(); }
  // Adds c · P (λ+∂)^{-1} Q, expanding P and Q bilinearly into monomials.
  void add_nonlocal(const DiffPoly& p, const DiffPoly& q, const Rational& c);

  LambdaValue& operator+=(const LambdaValue& o);
  LambdaValue& operator-=(const LambdaValue& o);
  friend LambdaValue operator+(LambdaValue a, const LambdaValue& b) { return a += b; }
  friend LambdaValue operator-(LambdaValue a, const LambdaValue& b) { return a -= b; }
  LambdaValue scaled(const Rational& c) const;
  bool operator==(const LambdaValue& o) const { return local == o.local && nonlocal == o.nonlocal; }
};

// {b_{−λ−∂} a} computed from {b_λ a}; on nonlocal terms (P,Q,c) -> (Q,P,−c).
LambdaValue flip(const LambdaValue& v);

// Polynomial in λ, μ with differential-polynomial coefficients.
class LambdaMuPoly {
 public:
  const std::map<std::pair<int, int>, DiffPoly>& terms() const { return t_; }
  void add_to(int p, int q, const DiffPoly& c);
  bool is_zero() const { return t_.empty(); }
  LambdaMuPoly& operator+=(const LambdaMuPoly& o);
  LambdaMuPoly& operator-=(const LambdaMuPoly& o);
  bool operator==(const LambdaMuPoly& o) const { return t_ == o.t_; }

 private:
  std::map<std::pair<int, int>, DiffPoly> t_;  // (λ power, μ power) -> coefficient
};

}  // namespace agdcas
