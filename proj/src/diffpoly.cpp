#include "agdcas/diffpoly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace agdcas {

VarKey VarKey::make(Family f, int index, int a, int b, int order) {
  if (order < 0 || order >= (1 << 28)) throw std::out_of_range("VarKey: derivative order out of range");
  if (a < 0 || a > 63 || b < 0 || b > 63) throw std::out_of_range("VarKey: matrix entry out of range");
  long biased = static_cast<long>(index) + kIndexBias;
  if (biased < 0 || biased >= (1L << 20)) throw std::out_of_range("VarKey: index out of range");
  std::uint64_t bits = (static_cast<std::uint64_t>(f) << 60) | (static_cast<std::uint64_t>(biased) << 40) |
                       (static_cast<std::uint64_t>(a) << 34) | (static_cast<std::uint64_t>(b) << 28) |
                       static_cast<std::uint64_t>(order);
  return VarKey(bits);
}

VarKey VarKey::with_order(int n) const {
  if (n < 0 || n >= (1 << 28)) throw std::out_of_range("VarKey: derivative order out of range");
  return VarKey((bits_ & ~std::uint64_t{0xFFFFFFF}) | static_cast<std::uint64_t>(n));
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& f : m) {
    h ^= f.var.bits() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= f.exp + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
  }
  return h;
}

Monomial mono_mul(const Monomial& x, const Monomial& y) {
  Monomial r;
  r.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].var < y[j].var) {
      r.push_back(x[i++]);
    } else if (y[j].var < x[i].var) {
      r.push_back(y[j++]);
    } else {
      r.push_back({x[i].var, x[i].exp + y[j].exp});
      ++i;
      ++j;
    }
  }
  r.insert(r.end(), x.begin() + static_cast<long>(i), x.end());
  r.insert(r.end(), y.begin() + static_cast<long>(j), y.end());
  return r;
}

std::uint32_t mono_degree(const Monomial& m) {
  std::uint32_t d = 0;
  for (const auto& f : m)
    if (!f.var.is_param()) d += f.exp;
  return d;
}

bool mono_is_param_only(const Monomial& m) {
  return std::all_of(m.begin(), m.end(), [](const Factor& f) { return f.var.is_param(); });
}

// ---------------------------------------------------------------------------

DiffPoly::DiffPoly(const Rational& c) {
  if (!agdcas::is_zero(c)) terms_.push_back({Monomial{}, c});
}

DiffPoly DiffPoly::var(VarKey v, std::uint32_t exp) {
  DiffPoly p;
  if (exp == 0) return DiffPoly(1);
  p.terms_.push_back({Monomial{{v, exp}}, Rational(1)});
  return p;
}

DiffPoly DiffPoly::from_terms(std::vector<Term> terms) {
  PolyBuilder b;
  for (auto& t : terms) {
    std::sort(t.mono.begin(), t.mono.end());
    Monomial merged;
    for (const auto& f : t.mono) {
      if (f.exp == 0) continue;
      if (!merged.empty() && merged.back().var == f.var)
        merged.back().exp += f.exp;
      else
        merged.push_back(f);
    }
    b.add(std::move(merged), t.coeff);
  }
  return b.finish();
}

bool DiffPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty()); }

Rational DiffPoly::constant_term() const {
  if (!terms_.empty() && terms_[0].mono.empty()) return terms_[0].coeff;
  return Rational(0);
}

namespace {

template <typename Op>
std::vector<DiffPoly::Term> merge_terms(const std::vector<DiffPoly::Term>& x, const std::vector<DiffPoly::Term>& y,
                                        Op op) {
  std::vector<DiffPoly::Term> r;
  r.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].mono < y[j].mono)) {
      r.push_back(x[i++]);
    } else if (i == x.size() || y[j].mono < x[i].mono) {
      r.push_back({y[j].mono, op(Rational(0), y[j].coeff)});
      ++j;
    } else {
      Rational c = op(x[i].coeff, y[j].coeff);
      if (!agdcas::is_zero(c)) r.push_back({x[i].mono, c});
      ++i;
      ++j;
    }
  }
  return r;
}

}  // namespace

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, [](const Rational& a, const Rational& b) { return Rational(a + b); });
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, [](const Rational& a, const Rational& b) { return Rational(a - b); });
  return *this;
}

DiffPoly& DiffPoly::operator*=(const Rational& c) {
  if (agdcas::is_zero(c)) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coeff *= c;
  }
  return *this;
}

DiffPoly& DiffPoly::operator*=(const DiffPoly& o) {
  *this = *this * o;
  return *this;
}

DiffPoly operator*(const DiffPoly& x, const DiffPoly& y) {
  if (x.terms_.empty() || y.terms_.empty()) return DiffPoly();
  if (y.is_constant()) return x * y.terms_[0].coeff;
  if (x.is_constant()) return y * x.terms_[0].coeff;
  PolyBuilder b;
  for (const auto& s : x.terms_)
    for (const auto& t : y.terms_) b.add(mono_mul(s.mono, t.mono), s.coeff * t.coeff);
  return b.finish();
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

// ---------------------------------------------------------------------------

void PolyBuilder::add(const Monomial& m, const Rational& c) {
  if (agdcas::is_zero(c)) return;
  auto [it, inserted] = acc_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

void PolyBuilder::add(Monomial&& m, const Rational& c) {
  if (agdcas::is_zero(c)) return;
  auto [it, inserted] = acc_.try_emplace(std::move(m), c);
  if (!inserted) it->second += c;
}

void PolyBuilder::add(const DiffPoly& p, const Rational& scale) {
  for (const auto& t : p.terms()) add(t.mono, t.coeff * scale);
}

DiffPoly PolyBuilder::finish() {
  DiffPoly p;
  p.terms_.reserve(acc_.size());
  for (auto& [m, c] : acc_)
    if (!agdcas::is_zero(c)) p.terms_.push_back({m, c});
  std::sort(p.terms_.begin(), p.terms_.end(),
            [](const DiffPoly::Term& a, const DiffPoly::Term& b) { return a.mono < b.mono; });
  acc_.clear();
  return p;
}

// ---------------------------------------------------------------------------

DiffPoly total_derivative(const DiffPoly& f) {
  PolyBuilder b;
  for (const auto& t : f.terms()) {
    for (std::size_t k = 0; k < t.mono.size(); ++k) {
      const Factor& fk = t.mono[k];
      if (fk.var.is_param()) continue;
      Monomial m;
      m.reserve(t.mono.size() + 1);
      for (std::size_t l = 0; l < t.mono.size(); ++l) {
        if (l == k) {
          if (fk.exp > 1) m.push_back({fk.var, fk.exp - 1});
        } else {
          m.push_back(t.mono[l]);
        }
      }
      b.add(mono_mul(m, Monomial{{fk.var.shifted(1), 1}}), t.coeff * fk.exp);
    }
  }
  return b.finish();
}

DiffPoly total_derivative(const DiffPoly& f, int times) {
  DiffPoly r = f;
  for (int i = 0; i < times && !r.is_zero(); ++i) r = total_derivative(r);
  return r;
}

DiffPoly partial(const DiffPoly& f, VarKey v) {
  PolyBuilder b;
  for (const auto& t : f.terms()) {
    for (std::size_t k = 0; k < t.mono.size(); ++k) {
      if (t.mono[k].var != v) continue;
      Monomial m = t.mono;
      std::uint32_t e = m[k].exp;
      if (e > 1)
        m[k].exp = e - 1;
      else
        m.erase(m.begin() + static_cast<long>(k));
      b.add(std::move(m), t.coeff * e);
      break;
    }
  }
  return b.finish();
}

int max_order(const DiffPoly& f, VarKey gen) {
  int best = -1;
  VarKey g = gen.generator();
  for (const auto& t : f.terms())
    for (const auto& fac : t.mono)
      if (fac.var.generator() == g) best = std::max(best, fac.var.order());
  return best;
}

DiffPoly varder(const DiffPoly& f, VarKey gen) {
  int top = max_order(f, gen);
  DiffPoly r;
  for (int n = top; n >= 0; --n) {
    // Horner scheme for sum_n (-d)^n P_n.
    r = -total_derivative(r);
    r += partial(f, gen.with_order(n));
  }
  return r;
}

std::vector<VarKey> generators_of(const DiffPoly& f) {
  std::vector<VarKey> gens;
  for (const auto& t : f.terms())
    for (const auto& fac : t.mono)
      if (!fac.var.is_param()) gens.push_back(fac.var.generator());
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

TotalDerivativeReport is_total_derivative(const DiffPoly& f) {
  TotalDerivativeReport rep;
  PolyBuilder cb;
  for (const auto& t : f.terms())
    if (mono_is_param_only(t.mono)) cb.add(t.mono, t.coeff);
  DiffPoly constant_part = cb.finish();
  rep.constant = constant_part.constant_term();
  for (VarKey g : generators_of(f))
    if (!varder(f, g).is_zero()) rep.witnesses.push_back(g);
  rep.is_total = rep.witnesses.empty() && constant_part.is_zero();
  return rep;
}

DiffPoly reduce_mod_derivatives(const DiffPoly& f) {
  DiffPoly cur = f;
  for (int iter = 0; iter < 100000; ++iter) {
    bool changed = false;
    for (const auto& t : cur.terms()) {
      const Factor* lead = nullptr;
      for (const auto& fac : t.mono) {
        if (fac.var.is_param()) continue;
        if (!lead || std::make_pair(fac.var.order(), fac.var.generator()) > std::make_pair(lead->var.order(), lead->var.generator()))
          lead = &fac;
      }
      if (!lead || lead->exp != 1 || lead->var.order() == 0) continue;
      const VarKey x = lead->var;
      const int n = x.order();
      // t = coeff · rest · (x^{(n-1)})^e · x^{(n)}, all of rest ranked below x^{(n-1)}
      DiffPoly rest(t.coeff);
      std::uint32_t e = 0;
      bool ok = true;
      for (const auto& fac : t.mono) {
        if (&fac == lead) continue;
        if (fac.var == x.with_order(n - 1)) {
          e = fac.exp;
          continue;
        }
        if (!fac.var.is_param() &&
            (fac.var.order() > n - 1 || (fac.var.order() == n - 1 && !(fac.var.generator() < x.generator())))) {
          ok = false;
          break;
        }
        rest *= DiffPoly::var(fac.var, fac.exp);
      }
      if (!ok) continue;
      DiffPoly replacement = total_derivative(rest) * DiffPoly::var(x.with_order(n - 1), e + 1) * Rational(-1, static_cast<long>(e + 1));
      cur = cur - DiffPoly::from_terms({t}) + replacement;
      changed = true;
      break;
    }
    if (!changed) return cur;
  }
  return cur;
}

DiffPoly substitute(const DiffPoly& f, const GeneratorRule& rule) {
  std::map<VarKey, std::optional<std::vector<DiffPoly>>> cache;
  auto image = [&](VarKey v) -> const DiffPoly* {
    VarKey g = v.generator();
    auto it = cache.find(g);
    if (it == cache.end()) {
      auto img = rule(g);
      std::optional<std::vector<DiffPoly>> entry;
      if (img) entry = std::vector<DiffPoly>{*img};
      it = cache.emplace(g, std::move(entry)).first;
    }
    if (!it->second) return nullptr;
    auto& ders = *it->second;
    while (static_cast<int>(ders.size()) <= v.order()) ders.push_back(total_derivative(ders.back()));
    return &ders[static_cast<std::size_t>(v.order())];
  };
  DiffPoly result;
  for (const auto& t : f.terms()) {
    DiffPoly term(t.coeff);
    Monomial kept;
    for (const auto& fac : t.mono) {
      const DiffPoly* img = fac.var.is_param() ? nullptr : image(fac.var);
      if (!img) {
        kept.push_back(fac);
        continue;
      }
      for (std::uint32_t e = 0; e < fac.exp; ++e) term = term * *img;
      if (term.is_zero()) break;
    }
    if (term.is_zero()) continue;
    if (!kept.empty()) term = term * DiffPoly::from_terms({{kept, Rational(1)}});
    result += term;
  }
  return result;
}

}  // namespace agdcas
