#include "agdcas/psido.hpp"

#include <algorithm>
#include <stdexcept>

namespace agdcas {

// ---------------------------------------------------------------- Matrix

Matrix Matrix::identity(int m, const Rational& s) {
  Matrix r(m);
  for (int a = 0; a < m; ++a) r(a, a) = DiffPoly(s);
  return r;
}

Matrix Matrix::scalar(int m, const DiffPoly& s) {
  Matrix r(m);
  for (int a = 0; a < m; ++a) r(a, a) = s;
  return r;
}

Matrix Matrix::unit(int m, int a, int b, const DiffPoly& s) {
  Matrix r(m);
  r(a, b) = s;
  return r;
}

bool Matrix::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const DiffPoly& p) { return p.is_zero(); });
}

std::optional<Rational> Matrix::as_rational_scalar() const {
  if (m_ == 0 || !(*this)(0, 0).is_constant()) return std::nullopt;
  Rational r = (*this)(0, 0).constant_term();
  if (*this == identity(m_, r)) return r;
  return std::nullopt;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (m_ != o.m_) throw std::invalid_argument("matrix size mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (m_ != o.m_) throw std::invalid_argument("matrix size mismatch");
  for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
  return *this;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.m_ != y.m_) throw std::invalid_argument("matrix size mismatch");
  const int m = x.m_;
  Matrix r(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (m == 1) {
        r(0, 0) = x(0, 0) * y(0, 0);
        continue;
      }
      PolyBuilder acc;
      for (int c = 0; c < m; ++c) {
        if (x(a, c).is_zero() || y(c, b).is_zero()) continue;
        acc.add(x(a, c) * y(c, b));
      }
      r(a, b) = acc.finish();
    }
  return r;
}

Matrix operator*(Matrix x, const Rational& c) {
  for (auto& e : x.e_) e *= c;
  return x;
}

Matrix operator*(const DiffPoly& s, const Matrix& x) {
  Matrix r(x.m_);
  for (std::size_t k = 0; k < x.e_.size(); ++k) r.e_[k] = s * x.e_[k];
  return r;
}

Matrix Matrix::operator-() const { return *this * Rational(-1); }

Matrix Matrix::transpose() const {
  Matrix r(m_);
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b) r(a, b) = (*this)(b, a);
  return r;
}

Matrix Matrix::derivative() const {
  Matrix r(m_);
  for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] = total_derivative(e_[k]);
  return r;
}

DiffPoly Matrix::trace() const {
  DiffPoly t;
  for (int a = 0; a < m_; ++a) t += (*this)(a, a);
  return t;
}

// ---------------------------------------------------------------- PsiDO

PsiDO PsiDO::monomial(const Matrix& c, int e) {
  PsiDO r(c.size());
  r.add_to(e, c);
  return r;
}

PsiDO PsiDO::scalar(const std::map<int, DiffPoly>& coeffs) {
  PsiDO r(1);
  for (const auto& [e, c] : coeffs) r.add_to(e, Matrix::scalar(1, c));
  return r;
}

int PsiDO::order() const {
  if (c_.empty()) return floor_ == kExactFloor ? kExactFloor : floor_ - 1;
  return c_.rbegin()->first;
}

int PsiDO::min_exponent() const {
  if (c_.empty()) return order();
  return c_.begin()->first;
}

const Matrix& PsiDO::coeff(int e) const {
  static thread_local std::map<int, Matrix> zeros;
  if (e < floor_) throw std::out_of_range("PsiDO: coefficient below truncation floor requested");
  auto it = c_.find(e);
  if (it != c_.end()) return it->second;
  auto z = zeros.find(m_);
  if (z == zeros.end()) z = zeros.emplace(m_, Matrix(m_)).first;
  return z->second;
}

void PsiDO::add_to(int e, const Matrix& c) {
  if (c.size() != m_) throw std::invalid_argument("PsiDO: matrix size mismatch");
  if (e < floor_) return;
  auto it = c_.find(e);
  if (it == c_.end()) {
    if (!c.is_zero()) c_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
  }
}

void PsiDO::set_floor(int f) {
  floor_ = std::max(floor_, f);
  c_.erase(c_.begin(), c_.lower_bound(floor_));
}

PsiDO PsiDO::truncated(int f) const {
  PsiDO r = *this;
  r.set_floor(f);
  return r;
}

PsiDO& PsiDO::operator+=(const PsiDO& o) {
  if (m_ != o.m_) throw std::invalid_argument("PsiDO: size mismatch");
  set_floor(o.floor_);
  for (const auto& [e, c] : o.c_) add_to(e, c);
  return *this;
}

PsiDO& PsiDO::operator-=(const PsiDO& o) {
  if (m_ != o.m_) throw std::invalid_argument("PsiDO: size mismatch");
  set_floor(o.floor_);
  for (const auto& [e, c] : o.c_) add_to(e, -c);
  return *this;
}

PsiDO operator*(PsiDO x, const Rational& c) {
  if (is_zero(c)) {
    x.c_.clear();
    return x;
  }
  for (auto& [e, m] : x.c_) m = m * c;
  return x;
}

bool agree_above(const PsiDO& a, const PsiDO& b, int f) {
  if (a.m() != b.m()) return false;
  if (a.floor() > f || b.floor() > f) throw std::out_of_range("agree_above: floor not available");
  auto ia = a.coeffs().lower_bound(f);
  auto ib = b.coeffs().lower_bound(f);
  for (; ia != a.coeffs().end() && ib != b.coeffs().end(); ++ia, ++ib)
    if (ia->first != ib->first || !(ia->second == ib->second)) return false;
  return ia == a.coeffs().end() && ib == b.coeffs().end();
}

// ---------------------------------------------------------------- operations

namespace {

int safe_add(int x, int y) {
  if (x <= PsiDO::kExactFloor / 2 || y <= PsiDO::kExactFloor / 2) return PsiDO::kExactFloor;
  return x + y;
}

}  // namespace

PsiDO compose(const PsiDO& a, const PsiDO& b, const TruncationPolicy& policy) {
  if (a.m() != b.m()) throw std::invalid_argument("compose: matrix sizes differ");
  const int m = a.m();
  PsiDO r(m);
  if ((a.is_zero() && a.exact()) || (b.is_zero() && b.exact())) return r;
  const bool exact = a.exact() && b.exact() && a.is_differential();
  int rf = PsiDO::kExactFloor;
  if (!exact) {
    rf = std::max({policy.floor, safe_add(a.floor(), b.order()), safe_add(b.floor(), a.order())});
    r.set_floor(rf);
  }
  // Derivatives of coefficients of B, computed on demand.
  std::map<int, std::vector<Matrix>> bders;
  auto bder = [&](int q, int k) -> const Matrix& {
    auto& v = bders[q];
    if (v.empty()) v.push_back(b.coeffs().at(q));
    while (static_cast<int>(v.size()) <= k) v.push_back(v.back().derivative());
    return v[static_cast<std::size_t>(k)];
  };
  for (const auto& [p, ap] : a.coeffs()) {
    for (const auto& [q, bq] : b.coeffs()) {
      (void)bq;
      for (int k = 0;; ++k) {
        if (p >= 0 && k > p) break;
        int e = p + q - k;
        if (!exact && e < rf) break;
        Rational c = binom(p, k);
        const Matrix& d = bder(q, k);
        if (d.is_zero()) break;  // all further derivatives vanish too
        r.add_to(e, (ap * d) * c);
      }
    }
  }
  return r;
}

PsiDO adjoint(const PsiDO& a, const TruncationPolicy& policy) {
  PsiDO r(a.m());
  int rf = PsiDO::kExactFloor;
  if (!a.exact())
    rf = std::max(policy.floor, a.floor());
  else if (!a.is_differential())
    rf = policy.floor;
  if (rf != PsiDO::kExactFloor) r.set_floor(rf);
  for (const auto& [n, an] : a.coeffs()) {
    Matrix d = an.transpose();
    Rational sign = (n % 2 == 0) ? Rational(1) : Rational(-1);
    for (int k = 0;; ++k) {
      if (n >= 0 && k > n) break;
      int e = n - k;
      if (rf != PsiDO::kExactFloor && e < rf) break;
      if (d.is_zero()) break;
      r.add_to(e, d * (sign * binom(n, k)));
      d = d.derivative();
    }
  }
  return r;
}

Matrix residue(const PsiDO& a) {
  if (a.floor() > -1) throw std::out_of_range("residue: truncation floor above -1");
  return a.coeff(-1);
}

DiffPoly trace_residue(const PsiDO& a) { return residue(a).trace(); }

PsiDO plus_part(const PsiDO& a) {
  if (a.floor() > 0) throw std::out_of_range("plus_part: truncation floor above 0");
  PsiDO r(a.m());
  for (const auto& [e, c] : a.coeffs())
    if (e >= 0) r.add_to(e, c);
  return r;
}

PsiDO minus_part(const PsiDO& a) {
  PsiDO r(a.m());
  if (!a.exact()) r.set_floor(a.floor());
  for (const auto& [e, c] : a.coeffs())
    if (e < 0) r.add_to(e, c);
  return r;
}

std::pair<PsiDO, PsiDO> split_plus_minus(const PsiDO& a) { return {plus_part(a), minus_part(a)}; }

namespace {

void require_monic(const PsiDO& a, int n, const char* who) {
  if (a.is_zero() || a.order() != n) throw std::invalid_argument(std::string(who) + ": operator must have order N");
  if (!(a.coeff(n) == Matrix::identity(a.m()))) throw std::invalid_argument(std::string(who) + ": operator must be monic");
}

}  // namespace

PsiDO power(const PsiDO& a, int k, const TruncationPolicy& policy) {
  if (k < 0) throw std::invalid_argument("power: negative exponent");
  const int ord = a.is_zero() ? 0 : std::max(a.order(), 0);
  TruncationPolicy inner = policy.with_floor(policy.floor - (k > 1 ? (k - 1) * ord : 0));
  PsiDO r = PsiDO::identity(a.m());
  for (int i = 0; i < k; ++i) r = compose(r, a, inner);
  if (!r.exact() && r.floor() < policy.floor) r.set_floor(policy.floor);
  return r;
}

PsiDO nth_root(const PsiDO& a, int n, const TruncationPolicy& policy) {
  if (n < 1) throw std::invalid_argument("nth_root: N must be positive");
  require_monic(a, n, "nth_root");
  if (n == 1) return a.exact() ? a.truncated(policy.floor) : a;
  const int m = a.m();
  int rf = policy.floor;
  if (!a.exact()) rf = std::max(rf, a.floor() - n + 1);
  PsiDO r = PsiDO::d_power(m, 1);
  const Rational inv_n = Rational(1, n);
  for (int e = 0; e >= rf; --e) {
    PsiDO p = power(r, n, policy.with_floor(n - 1 + e));
    Matrix diff = a.coeff(n - 1 + e) - p.coeff(n - 1 + e);
    r.add_to(e, diff * inv_n);
  }
  r.set_floor(rf);
  return r;
}

PsiDO inverse(const PsiDO& a, const TruncationPolicy& policy) {
  if (a.is_zero()) throw std::invalid_argument("inverse: zero operator");
  const int m = a.m();
  const int n = a.order();
  auto lead = a.coeff(n).as_rational_scalar();
  if (!lead || is_zero(*lead)) throw std::invalid_argument("inverse: leading coefficient is not an invertible constant");
  const Rational scale = 1 / *lead;
  PsiDO an = a * scale;
  if (a.exact() && a.coeffs().size() == 1) return PsiDO::monomial(Matrix::identity(m, scale), -n);
  int rf = policy.floor;
  if (!a.exact()) rf = std::max(rf, a.floor() - 2 * n);
  PsiDO b = PsiDO::d_power(m, -n);
  for (int s = 1; -n - s >= rf; ++s) {
    PsiDO p = compose(an, b, policy.with_floor(-s));
    b.add_to(-n - s, -p.coeff(-s));
  }
  b.set_floor(rf);
  return b * scale;
}

PsiDO frac_power(const PsiDO& a, int k, int n, const TruncationPolicy& policy) {
  if (n < 1) throw std::invalid_argument("frac_power: N must be positive");
  require_monic(a, n, "frac_power");
  if (k == 0) return PsiDO::identity(a.m());
  const int kk = k < 0 ? -k : k;
  const bool integral = k % n == 0;
  const int reps = integral ? kk / n : kk;
  // Each further factor of order d > 0 lowers the exponent up to which the
  // product is exact by d, so the base is computed that much deeper.
  const int base_order = (integral ? n : 1) * (k < 0 ? -1 : 1);
  TruncationPolicy inner = policy.with_floor(policy.floor - (reps - 1) * std::max(base_order, 0));
  PsiDO base = integral ? a : nth_root(a, n, inner);
  if (k < 0) base = inverse(base, inner);
  PsiDO r = base;
  for (int i = 1; i < reps; ++i) r = compose(r, base, inner);
  if (r.exact() && r.is_differential()) return r;
  if (!r.exact() && r.floor() > policy.floor) return r;
  r.set_floor(policy.floor);
  return r;
}

}  // namespace agdcas
