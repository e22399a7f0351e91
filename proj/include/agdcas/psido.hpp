#pragma once

#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "agdcas/diffpoly.hpp"

namespace agdcas {

// Square matrix of differential polynomials, indices 0-based.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int m) : m_(m), e_(static_cast<std::size_t>(m * m)) {}
  static Matrix identity(int m, const Rational& s = Rational(1));
  static Matrix scalar(int m, const DiffPoly& s);
  static Matrix unit(int m, int a, int b, const DiffPoly& s = DiffPoly(1));  // s·E_ab

  int size() const { return m_; }
  DiffPoly& operator()(int a, int b) { return e_[static_cast<std::size_t>(a * m_ + b)]; }
  const DiffPoly& operator()(int a, int b) const { return e_[static_cast<std::size_t>(a * m_ + b)]; }
  bool is_zero() const;
  // Returns r if the matrix is r·identity with r rational, otherwise nullopt.
  std::optional<Rational> as_rational_scalar() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  friend Matrix operator+(Matrix x, const Matrix& y) { return x += y; }
  friend Matrix operator-(Matrix x, const Matrix& y) { return x -= y; }
  friend Matrix operator*(const Matrix& x, const Matrix& y);
  friend Matrix operator*(Matrix x, const Rational& c);
  friend Matrix operator*(const DiffPoly& s, const Matrix& x);
  Matrix operator-() const;
  bool operator==(const Matrix& o) const { return m_ == o.m_ && e_ == o.e_; }

  Matrix transpose() const;
  Matrix derivative() const;
  DiffPoly trace() const;

 private:
  int m_ = 0;
  std::vector<DiffPoly> e_;
};

struct TruncationPolicy {
  int floor = -12;
  int convergence_margin = 4;

  TruncationPolicy deeper() const { return {floor - convergence_margin, convergence_margin}; }
  TruncationPolicy with_floor(int f) const { return {f, convergence_margin}; }
};

// m×m matrix pseudodifferential operator Σ_e A_e ∂^e.  Coefficients with
// exponent >= floor() are exact; anything below is unknown (truncated).  An
// operator with exact() == true is a finite sum known completely.
class PsiDO {
 public:
  static constexpr int kExactFloor = std::numeric_limits<int>::min() / 4;

  explicit PsiDO(int m = 1) : m_(m) {}
  static PsiDO identity(int m) { return monomial(Matrix::identity(m), 0); }
  static PsiDO d_power(int m, int e) { return monomial(Matrix::identity(m), e); }
  static PsiDO monomial(const Matrix& c, int e);
  static PsiDO scalar(const std::map<int, DiffPoly>& coeffs);  // m = 1, exact

  int m() const { return m_; }
  bool exact() const { return floor_ == kExactFloor; }
  int floor() const { return floor_; }
  // Highest exponent carrying a nonzero coefficient; floor()-1 for a zero operator.
  int order() const;
  int min_exponent() const;
  bool is_zero() const { return c_.empty(); }
  bool is_differential() const { return exact() && (c_.empty() || c_.begin()->first >= 0); }

  const Matrix& coeff(int e) const;
  void add_to(int e, const Matrix& c);
  void set_floor(int f);  // marks the operator as truncated at f and drops lower terms
  void make_exact() { floor_ = kExactFloor; }
  const std::map<int, Matrix>& coeffs() const { return c_; }

  PsiDO truncated(int f) const;

  PsiDO& operator+=(const PsiDO& o);
  PsiDO& operator-=(const PsiDO& o);
  friend PsiDO operator+(PsiDO x, const PsiDO& y) { return x += y; }
  friend PsiDO operator-(PsiDO x, const PsiDO& y) { return x -= y; }
  friend PsiDO operator*(PsiDO x, const Rational& c);
  PsiDO operator-() const { return *this * Rational(-1); }

 private:
  int m_;
  int floor_ = kExactFloor;
  std::map<int, Matrix> c_;  // exponent -> nonzero coefficient
};

// True when A and B have identical coefficients at every exponent >= f.
bool agree_above(const PsiDO& a, const PsiDO& b, int f);

PsiDO compose(const PsiDO& a, const PsiDO& b, const TruncationPolicy& policy);
PsiDO adjoint(const PsiDO& a, const TruncationPolicy& policy);
Matrix residue(const PsiDO& a);
DiffPoly trace_residue(const PsiDO& a);
PsiDO plus_part(const PsiDO& a);
PsiDO minus_part(const PsiDO& a);
std::pair<PsiDO, PsiDO> split_plus_minus(const PsiDO& a);
PsiDO nth_root(const PsiDO& a, int n, const TruncationPolicy& policy);
PsiDO inverse(const PsiDO& a, const TruncationPolicy& policy);
PsiDO power(const PsiDO& a, int k, const TruncationPolicy& policy);  // k >= 0
PsiDO frac_power(const PsiDO& a, int k, int n, const TruncationPolicy& policy);

}  // namespace agdcas
