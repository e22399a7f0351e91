#include "agdcas/lambda.hpp"

namespace agdcas {

namespace {
const DiffPoly kZero;
}

LambdaPoly::LambdaPoly(const DiffPoly& c0) {
  if (!c0.is_zero()) c_.push_back(c0);
}

LambdaPoly LambdaPoly::monomial(const DiffPoly& c, int p) {
  LambdaPoly r;
  r.add_to(p, c);
  return r;
}

const DiffPoly& LambdaPoly::coeff(int p) const {
  if (p < 0 || p >= static_cast<int>(c_.size())) return kZero;
  return c_[static_cast<std::size_t>(p)];
}

void LambdaPoly::add_to(int p, const DiffPoly& c) {
  if (c.is_zero()) return;
  if (p >= static_cast<int>(c_.size())) c_.resize(static_cast<std::size_t>(p) + 1);
  c_[static_cast<std::size_t>(p)] += c;
  trim();
}

void LambdaPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

LambdaPoly& LambdaPoly::operator+=(const LambdaPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t p = 0; p < o.c_.size(); ++p) c_[p] += o.c_[p];
  trim();
  return *this;
}

LambdaPoly& LambdaPoly::operator-=(const LambdaPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t p = 0; p < o.c_.size(); ++p) c_[p] -= o.c_[p];
  trim();
  return *this;
}

LambdaPoly LambdaPoly::operator-() const {
  LambdaPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

LambdaPoly operator*(const DiffPoly& f, const LambdaPoly& x) {
  LambdaPoly r;
  if (f.is_zero()) return r;
  r.c_.reserve(x.c_.size());
  for (const auto& c : x.c_) r.c_.push_back(f * c);
  r.trim();
  return r;
}

LambdaPoly operator*(const LambdaPoly& x, const Rational& c) {
  LambdaPoly r = x;
  for (auto& d : r.c_) d *= c;
  r.trim();
  return r;
}

LambdaPoly shift_apply(int n, const LambdaPoly& x) {
  if (n == 0) return x;
  LambdaPoly r;
  for (int q = 0; q <= x.degree(); ++q) {
    DiffPoly d = x.coeff(q);
    for (int t = 0; t <= n && !d.is_zero(); ++t) {
      r.add_to(q + n - t, d * binom(n, t));
      if (t < n) d = total_derivative(d);
    }
  }
  return r;
}

LambdaPoly neg_shift_apply(int n, const LambdaPoly& x) {
  LambdaPoly r = shift_apply(n, x);
  return (n % 2 == 0) ? r : -r;
}

LambdaPoly apply_symbol(const LambdaPoly& h, const LambdaPoly& x) {
  LambdaPoly r;
  if (x.is_zero()) return r;
  // Successive powers (λ+∂)^q X computed incrementally.
  LambdaPoly power = x;
  for (int q = 0; q <= h.degree(); ++q) {
    if (q > 0) power = shift_apply(1, power);
    if (!h.coeff(q).is_zero()) r += h.coeff(q) * power;
  }
  return r;
}

LambdaPoly flip(const LambdaPoly& h) {
  LambdaPoly r;
  for (int p = 0; p <= h.degree(); ++p)
    if (!h.coeff(p).is_zero()) r += neg_shift_apply(p, LambdaPoly(h.coeff(p)));
  return r;
}

void LambdaValue::add_nonlocal(const DiffPoly& p, const DiffPoly& q, const Rational& c) {
  if (agdcas::is_zero(c)) return;
  for (const auto& s : p.terms())
    for (const auto& t : q.terms()) {
      auto key = std::make_pair(s.mono, t.mono);
      Rational v = c * s.coeff * t.coeff;
      auto it = nonlocal.find(key);
      if (it == nonlocal.end()) {
        nonlocal.emplace(std::move(key), v);
      } else {
        it->second += v;
        if (agdcas::is_zero(it->second)) nonlocal.erase(it);
      }
    }
}

LambdaValue& LambdaValue::operator+=(const LambdaValue& o) {
  local += o.local;
  for (const auto& [k, c] : o.nonlocal) {
    auto it = nonlocal.find(k);
    if (it == nonlocal.end()) {
      nonlocal.emplace(k, c);
    } else {
      it->second += c;
      if (agdcas::is_zero(it->second)) nonlocal.erase(it);
    }
  }
  return *this;
}

LambdaValue& LambdaValue::operator-=(const LambdaValue& o) { return *this += o.scaled(Rational(-1)); }

LambdaValue LambdaValue::scaled(const Rational& c) const {
  LambdaValue r;
  if (agdcas::is_zero(c)) return r;
  r.local = local * c;
  for (const auto& [k, v] : nonlocal) r.nonlocal.emplace(k, v * c);
  return r;
}

LambdaValue flip(const LambdaValue& v) {
  LambdaValue r(flip(v.local));
  for (const auto& [k, c] : v.nonlocal) r.nonlocal.emplace(std::make_pair(k.second, k.first), -c);
  return r;
}

void LambdaMuPoly::add_to(int p, int q, const DiffPoly& c) {
  if (c.is_zero()) return;
  auto key = std::make_pair(p, q);
  auto it = t_.find(key);
  if (it == t_.end()) {
    t_.emplace(key, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

LambdaMuPoly& LambdaMuPoly::operator+=(const LambdaMuPoly& o) {
  for (const auto& [k, c] : o.t_) add_to(k.first, k.second, c);
  return *this;
}

LambdaMuPoly& LambdaMuPoly::operator-=(const LambdaMuPoly& o) {
  for (const auto& [k, c] : o.t_) add_to(k.first, k.second, -c);
  return *this;
}

}  // namespace agdcas
