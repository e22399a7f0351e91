#include "agdcas/agd.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace agdcas {

// ---------------------------------------------------------------- context

DiffPoly AdlerContext::u(int i, int a, int b) const {
  if (i < -N - 1) return DiffPoly();
  if (i == -N - 1) return a == b ? DiffPoly(1) : DiffPoly();
  if (flavor == Flavor::Finite && i >= 0) return DiffPoly();
  if (reduced && i == -N) return DiffPoly();
  return DiffPoly::var(VarKey::make(family, i, a, b, 0));
}

bool AdlerContext::is_generator(VarKey g) const {
  if (g.family() != family || g.order() != 0) return false;
  if (g.a() < 1 || g.a() > m || g.b() < 1 || g.b() > m) return false;
  int lo = reduced ? -N + 1 : -N;
  if (g.index() < lo) return false;
  return flavor == Flavor::Infinite || g.index() <= -1;
}

std::vector<VarKey> AdlerContext::generators() const {
  std::vector<VarKey> r;
  int lo = reduced ? -N + 1 : -N;
  int hi = flavor == Flavor::Finite ? -1 : window;
  for (int i = lo; i <= hi; ++i)
    for (int a = 1; a <= m; ++a)
      for (int b = 1; b <= m; ++b) r.push_back(VarKey::make(family, i, a, b, 0));
  return r;
}

PsiDO AdlerContext::L(const TruncationPolicy& policy) const {
  PsiDO l = PsiDO::d_power(m, N);
  int hi = flavor == Flavor::Finite ? -1 : -policy.floor - 1;
  for (int i = -N; i <= hi; ++i) {
    Matrix c(m);
    for (int a = 1; a <= m; ++a)
      for (int b = 1; b <= m; ++b) c(a - 1, b - 1) = u(i, a, b);
    l.add_to(-i - 1, c);
  }
  if (flavor == Flavor::Infinite) l.set_floor(policy.floor);
  return l;
}

std::string AdlerContext::label() const {
  std::ostringstream os;
  os << (reduced ? "W_" : "V_");
  if (m == 1)
    os << N;
  else
    os << "{" << N << "," << m << "}";
  if (flavor == Flavor::Infinite) os << "^inf";
  return os.str();
}

int epsilon(int i, int j) {
  if (i >= 0 && j >= 0) return 1;
  if (i < 0 && j < 0) return -1;
  return 0;
}

// ---------------------------------------------------------------- tables

namespace {

// r += c · P (λ+∂)^p Q for p ≥ 0.
void add_term(LambdaPoly& r, const DiffPoly& p_left, int p, const DiffPoly& q, const Rational& c) {
  if (p_left.is_zero() || q.is_zero() || is_zero(c)) return;
  DiffPoly d = q;
  for (int t = 0; t <= p; ++t) {
    r.add_to(p - t, p_left * d * (c * binom(p, t)));
    if (t < p) {
      d = total_derivative(d);
      if (d.is_zero()) break;
    }
  }
}

// Adds c · P (λ+∂)^e Q, with e = −1 recorded as a nonlocal pair.
void add_term_ext(LambdaValue& v, const DiffPoly& p, int e, const DiffPoly& q, const Rational& c) {
  if (e >= 0)
    add_term(v.local, p, e, q, c);
  else if (e == -1)
    v.add_nonlocal(p, q, c);
  else
    throw std::logic_error("unexpected power of (λ+∂)");
}

}  // namespace

LambdaValue h_entry(const AdlerContext& ctx, VarKey gi, VarKey gj) {
  const int N = ctx.N;
  const int i = gi.index(), a = gi.a(), b = gi.b();
  const int j = gj.index(), c = gj.a(), d = gj.b();
  LambdaPoly r;
  for (int k = 0; k <= i + N; ++k) {
    DiffPoly p = ctx.u(i - k - 1, c, b);
    if (p.is_zero()) continue;
    for (int al = 0; al <= k; ++al) add_term(r, p, al, ctx.u(j + k - al, a, d), binom(k, al));
  }
  for (int k = 0; k <= i + N; ++k) {
    for (int be = 0; be + k <= i + N; ++be) {
      DiffPoly q = ctx.u(i - be - k - 1, a, d);
      if (q.is_zero()) continue;
      Rational cb = binom(i - k - 1, be);
      if (is_zero(cb)) continue;
      int amax = j >= 0 ? j : j + k + N + 1;
      for (int al = 0; al <= amax; ++al) {
        Rational coef = binom(j, al) * cb * ((al % 2 == 0) ? -1 : 1);
        add_term(r, ctx.u(j + k - al, c, b), al + be, q, coef);
      }
    }
  }
  return LambdaValue(r);
}

LambdaValue k_entry(const AdlerContext& ctx, VarKey gi, VarKey gj) {
  const int N = ctx.N;
  const int i = gi.index(), a = gi.a(), b = gi.b();
  const int j = gj.index(), c = gj.a(), d = gj.b();
  const int eps = epsilon(i, j);
  LambdaPoly r;
  if (eps == 0) return LambdaValue(r);
  for (int k = 0; k <= i + j + N + 1; ++k) {
    if (c == b) add_term(r, DiffPoly(1), k, ctx.u(i + j - k, a, d), binom(i, k) * eps);
    if (a == d) {
      DiffPoly w = ctx.u(i + j - k, c, b);
      Rational sign = (k % 2 == 0) ? Rational(1) : Rational(-1);
      r.add_to(k, w * (-sign * binom(j, k) * eps));
    }
  }
  return LambdaValue(r);
}

LambdaValue hd_entry(const AdlerContext& ctx, VarKey gi, VarKey gj) {
  const int N = ctx.N, m = ctx.m;
  const int i = gi.index(), a = gi.a(), b = gi.b();
  const int j = gj.index(), c = gj.a(), d = gj.b();
  LambdaValue v = h_entry(ctx, gi, gj);
  const Rational inv_n(1, N);
  for (int s = 0; s <= j + N + 1; ++s) {
    DiffPoly p = ctx.u(j - s, c, b);
    if (p.is_zero()) continue;
    Rational bs = binom(s - j - 1, s);
    for (int r = 0; r <= i + N + 1; ++r) {
      Rational coef = -inv_n * bs * binom(r - i - 1, r) * ((r % 2 == 0) ? 1 : -1);
      add_term_ext(v, p, s + r - 1, ctx.u(i - r, a, d), coef);
    }
  }
  v.add_nonlocal(ctx.u(j, a, d), ctx.u(i, c, b), -inv_n);
  for (int k = 1; k <= m; ++k) {
    if (a == d)
      for (int s = 0; s <= j + N + 1; ++s)
        add_term_ext(v, ctx.u(j - s, c, k), s - 1, ctx.u(i, k, b), inv_n * binom(s - j - 1, s));
    if (c == b)
      for (int r = 0; r <= i + N + 1; ++r)
        add_term_ext(v, ctx.u(j, k, d), r - 1, ctx.u(i - r, a, k),
                     inv_n * binom(r - i - 1, r) * ((r % 2 == 0) ? 1 : -1));
  }
  return v;
}

LambdaValue hd_entry_scalar_sum(const AdlerContext& ctx, VarKey gi, VarKey gj) {
  if (ctx.m != 1) throw std::invalid_argument("hd_entry_scalar_sum is defined for scalar operators only");
  const int N = ctx.N;
  const int i = gi.index(), j = gj.index();
  LambdaValue v = h_entry(ctx, gi, gj);
  for (int al = 1; al <= j + N + 1; ++al)
    for (int be = 1; be <= i + N + 1; ++be) {
      Rational coef = -Rational(1, N) * binom(j, al) * binom(i, be) * ((al % 2 == 0) ? 1 : -1);
      add_term(v.local, ctx.u(j - al, 1, 1), al + be - 1, ctx.u(i - be, 1, 1), coef);
    }
  return v;
}

// ---------------------------------------------------------------- Adler map

PsiDO adler_apply(const PsiDO& l, const PsiDO& f, const TruncationPolicy& policy) {
  PsiDO lf = compose(l, f, policy);
  PsiDO fl = compose(f, l, policy);
  return compose(plus_part(lf), l, policy) - compose(l, plus_part(fl), policy);
}

PsiDO adler_apply_alt(const PsiDO& l, const PsiDO& f, const TruncationPolicy& policy) {
  PsiDO lf = compose(l, f, policy);
  PsiDO fl = compose(f, l, policy);
  return compose(l, minus_part(fl), policy) - compose(minus_part(lf), l, policy);
}

DiffPoly oracle_entry(const AdlerContext& ctx, VarKey gi, VarKey gj, const DiffPoly& f) {
  const int i = gi.index(), a = gi.a(), b = gi.b();
  const int j = gj.index(), c = gj.a(), d = gj.b();
  TruncationPolicy pol;
  pol.floor = -(std::abs(i) + std::abs(j) + 2 * ctx.N + 6);
  PsiDO l = ctx.L(pol);
  PsiDO fop = compose(PsiDO::d_power(ctx.m, i), PsiDO::monomial(Matrix::unit(ctx.m, b - 1, a - 1, f), 0), pol);
  PsiDO img = adler_apply(l, fop, pol);
  return img.coeff(-j - 1)(c - 1, d - 1);
}

DiffPoly apply_to(const LambdaPoly& h, const DiffPoly& f) {
  DiffPoly r, d = f;
  for (int p = 0; p <= h.degree(); ++p) {
    if (p > 0) d = total_derivative(d);
    if (!h.coeff(p).is_zero()) r += h.coeff(p) * d;
  }
  return r;
}

// ---------------------------------------------------------------- structures

namespace {

Structure::Options context_options(const AdlerContext& ctx, bool local) {
  Structure::Options o;
  o.local = local;
  o.infinite = ctx.flavor == Flavor::Infinite;
  o.member = [ctx](VarKey g) { return ctx.is_generator(g); };
  o.N = ctx.N;
  o.m = ctx.m;
  return o;
}

}  // namespace

Structure build_H(const AdlerContext& ctx, bool cross_check) {
  Structure::Rule rule = [ctx, cross_check](VarKey gi, VarKey gj) {
    LambdaValue v = h_entry(ctx, gi, gj);
    if (cross_check) {
      std::mt19937_64 rng(gi.bits() ^ (gj.bits() << 1));
      for (int t = 0; t < 3; ++t) {
        DiffPoly f = random_diffpoly(rng, ctx.generators(), 2, 3, 2);
        if (!(apply_to(v.local, f) == oracle_entry(ctx, gi, gj, f)))
          throw std::runtime_error("closed-form H entry disagrees with the Adler-map oracle");
      }
    }
    return v;
  };
  return Structure("H[" + ctx.label() + "]", ctx.generators(), rule, context_options(ctx, true));
}

Structure build_K(const AdlerContext& ctx) {
  Structure::Rule rule = [ctx](VarKey gi, VarKey gj) { return k_entry(ctx, gi, gj); };
  return Structure("K[" + ctx.label() + "]", ctx.generators(), rule, context_options(ctx, true));
}

Structure dirac_reduce(const AdlerContext& ctx, const Structure& s) {
  if (s.name().rfind("K[", 0) == 0)
    throw std::invalid_argument("dirac_reduce: the constraint matrix of K is degenerate (u_{-N} is central for K)");
  if (s.name().rfind("H[", 0) != 0) throw std::invalid_argument("dirac_reduce expects the H table of an Adler context");
  AdlerContext w = ctx;
  w.reduced = true;
  Structure::Rule rule = [w](VarKey gi, VarKey gj) { return hd_entry(w, gi, gj); };
  return Structure("HD[" + w.label() + "]", w.generators(), rule, context_options(w, w.m == 1));
}

Structure generic_dirac(const Structure& s, const std::vector<DiffPoly>& constraints, const GeneratorRule& quotient,
                        const std::vector<VarKey>& new_generators, const std::string& name,
                        const TruncationPolicy& policy) {
  if (constraints.empty()) return s;
  if (!s.local()) throw std::domain_error("generic_dirac needs a local structure");
  const int r = static_cast<int>(constraints.size());
  PsiDO cop(r);
  for (int al = 0; al < r; ++al)
    for (int be = 0; be < r; ++be) {
      LambdaValue v = master_bracket(s, constraints[static_cast<std::size_t>(be)], constraints[static_cast<std::size_t>(al)]);
      for (int p = 0; p <= v.local.degree(); ++p) cop.add_to(p, Matrix::unit(r, al, be, v.local.coeff(p)));
    }
  if (cop.is_zero()) throw std::invalid_argument("generic_dirac: constraint matrix C is zero");
  PsiDO cinv = inverse(cop, policy);
  Structure base = s;
  Structure::Rule rule = [base, constraints, cinv, quotient, policy, r](VarKey ga, VarKey gb) {
    LambdaPoly val = base.local_bracket(ga, gb);
    PsiDO bop(r);
    std::vector<LambdaPoly> ys;
    for (int be = 0; be < r; ++be) {
      LambdaPoly bv = bracket_left_gen(base, constraints[static_cast<std::size_t>(be)], gb);
      for (int p = 0; p <= bv.degree(); ++p) bop.add_to(p, Matrix::unit(r, 0, be, bv.coeff(p)));
      ys.push_back(bracket_gen_right(base, ga, constraints[static_cast<std::size_t>(be)]));
    }
    PsiDO mop = compose(bop, cinv, policy);
    for (const auto& [e, coef] : mop.coeffs())
      for (int al = 0; al < r; ++al) {
        const DiffPoly& mc = coef(0, al);
        const LambdaPoly& y = ys[static_cast<std::size_t>(al)];
        if (mc.is_zero() || y.is_zero()) continue;
        if (e < 0) throw std::domain_error("generic_dirac: the modified bracket is nonlocal");
        val -= mc * shift_apply(e, y);
      }
    LambdaPoly out;
    for (int p = 0; p <= val.degree(); ++p) out.add_to(p, substitute(val.coeff(p), quotient));
    return LambdaValue(out);
  };
  Structure::Options o;
  o.N = s.N();
  o.m = s.m();
  return Structure(name, new_generators, rule, o);
}

// ---------------------------------------------------------------- Virasoro

VirasoroReport virasoro_report(const AdlerContext& ctx, const Structure& s) {
  VirasoroReport rep;
  DiffPoly t;
  for (int a = 1; a <= ctx.m; ++a) t += ctx.u(-ctx.N + 1, a, a);
  LambdaValue tt = master_bracket(s, t, t);
  const LambdaPoly& l = tt.local;
  bool shape = tt.is_local() && l.degree() <= 3 && l.coeff(2).is_zero() && l.coeff(1) == t * Rational(2) &&
               l.coeff(0) == total_derivative(t) && l.coeff(3).is_constant();
  rep.virasoro_shape = shape;
  if (!shape) rep.diagnostics.push_back("{T λ T} is not of the form (2λ+∂)T + cλ³");
  rep.central_charge = l.coeff(3).constant_term();
  for (VarKey g : ctx.generators()) {
    DiffPoly ug = DiffPoly::var(g);
    LambdaValue v = master_bracket(s, t, ug);
    const DiffPoly& c1 = v.local.coeff(1);
    bool ok = v.is_local() && v.local.coeff(0) == total_derivative(ug) && c1.size() == 1 &&
              c1.terms()[0].mono == ug.terms()[0].mono;
    if (!ok) {
      rep.diagnostics.push_back("generator is not a T-eigenvector at order λ");
      rep.virasoro_shape = false;
      continue;
    }
    rep.weights[g] = c1.terms()[0].coeff;
  }
  return rep;
}

// ---------------------------------------------------------------- constraints

std::map<int, Matrix> constraint_B(const AdlerContext& ctx, const Matrix& f) {
  const int N = ctx.N, m = ctx.m;
  std::map<int, Matrix> out;
  Matrix ft = f.transpose();
  std::vector<Matrix> ders{ft};
  for (int i = -N; i <= -1; ++i) {
    const int e = -i - 1;
    Matrix ui(m);
    for (int a = 1; a <= m; ++a)
      for (int b = 1; b <= m; ++b) ui(a - 1, b - 1) = ctx.u(i, a, b);
    Matrix r = ft * ui;
    for (int n = e; n <= N; ++n) {
      Matrix un(m);
      for (int a = 1; a <= m; ++a)
        for (int b = 1; b <= m; ++b) un(a - 1, b - 1) = ctx.u(-n - 1, a, b);
      while (static_cast<int>(ders.size()) <= n - e) ders.push_back(ders.back().derivative());
      r -= (un * ders[static_cast<std::size_t>(n - e)]) * binom(n, n - e);
    }
    out.emplace(i, r);
  }
  return out;
}

std::map<int, Matrix> constraint_B_via_compose(const AdlerContext& ctx, const Matrix& f) {
  PsiDO l = ctx.L();
  PsiDO ft = PsiDO::monomial(f.transpose(), 0);
  TruncationPolicy pol;
  PsiDO comm = compose(ft, l, pol) - compose(l, ft, pol);
  std::map<int, Matrix> out;
  for (int i = -ctx.N; i <= -1; ++i) out.emplace(i, comm.coeff(-i - 1));
  return out;
}

Matrix constraint_C(const AdlerContext& ctx, const Matrix& f) { return constraint_B(ctx, f).at(-ctx.N); }

Matrix constraint_B_adjoint(const AdlerContext& ctx, const std::map<int, Matrix>& g) {
  const int N = ctx.N, m = ctx.m;
  Matrix out(m);
  for (const auto& [i, gi] : g) {
    const int e = -i - 1;
    for (int a = 1; a <= m; ++a)
      for (int b = 1; b <= m; ++b) {
        const DiffPoly& gab = gi(a - 1, b - 1);
        if (gab.is_zero()) continue;
        // δ_ad u_{i,cb} G_{i,ab}  ->  entry (c, a)
        for (int c = 1; c <= m; ++c) out(c - 1, a - 1) += ctx.u(i, c, b) * gab;
        // −δ_cb Σ_n binom(n,e) (−∂)^{n−e}(u_{−n−1,ad} G_{i,ab})  ->  entry (b, d)
        for (int d = 1; d <= m; ++d)
          for (int n = e; n <= N; ++n) {
            DiffPoly w = ctx.u(-n - 1, a, d) * gab;
            if (w.is_zero()) continue;
            w = total_derivative(w, n - e);
            Rational sign = ((n - e) % 2 == 0) ? Rational(1) : Rational(-1);
            out(b - 1, d - 1) -= w * (sign * binom(n, e));
          }
      }
  }
  return out;
}

// ---------------------------------------------------------------- named structures

namespace {

std::vector<VarKey> v_generators(int n) {
  std::vector<VarKey> g;
  for (int i = 1; i <= n; ++i) g.push_back(VarKey::make(Family::V, i));
  return g;
}

}  // namespace

Structure gfz_structure(int n, const std::vector<std::vector<Rational>>& s) {
  if (static_cast<int>(s.size()) != n) throw std::invalid_argument("gfz: S must be N×N");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != s[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
        throw std::invalid_argument("gfz: S must be symmetric");
  Structure::Rule rule = [s](VarKey gi, VarKey gj) {
    return LambdaValue(LambdaPoly::monomial(
        DiffPoly(s[static_cast<std::size_t>(gj.index() - 1)][static_cast<std::size_t>(gi.index() - 1)]), 1));
  };
  Structure::Options o;
  o.N = n;
  return Structure("GFZ_" + std::to_string(n), v_generators(n), rule, o);
}

Structure gfz_symbolic(int n) {
  Structure::Rule rule = [](VarKey gi, VarKey gj) {
    return LambdaValue(LambdaPoly::monomial(DiffPoly::var(gfz_param(gi.index(), gj.index())), 1));
  };
  Structure::Options o;
  o.N = n;
  return Structure("GFZ_" + std::to_string(n), v_generators(n), rule, o);
}

Structure virasoro_structure(bool symbolic_c, const Rational& c) {
  Structure::Rule rule = [symbolic_c, c](VarKey gi, VarKey) {
    DiffPoly u = DiffPoly::var(gi);
    LambdaPoly r;
    r.add_to(0, total_derivative(u));
    r.add_to(1, u * Rational(2));
    r.add_to(3, symbolic_c ? DiffPoly::var(pencil_param()) : DiffPoly(c));
    return LambdaValue(r);
  };
  Structure::Options o;
  o.N = 1;
  return Structure("Virasoro", v_generators(1), rule, o);
}

Structure broken_demo_structure() {
  // Symbol of u∂³ + ∂³∘u: skew-adjoint but not Hamiltonian.
  Structure::Rule rule = [](VarKey gi, VarKey) {
    DiffPoly u = DiffPoly::var(gi);
    LambdaPoly r;
    r.add_to(3, u * Rational(2));
    r.add_to(2, total_derivative(u) * Rational(3));
    r.add_to(1, total_derivative(u, 2) * Rational(3));
    r.add_to(0, total_derivative(u, 3));
    return LambdaValue(r);
  };
  Structure::Options o;
  o.N = 1;
  return Structure("broken-demo", v_generators(1), rule, o);
}

Structure pencil(const Structure& h, const Structure& k) {
  return Structure::linear_combination(h.name() + "-c" + k.name(), h, k, -DiffPoly::var(pencil_param()));
}

DiffPoly random_diffpoly(std::mt19937_64& rng, const std::vector<VarKey>& gens, int max_order, int terms,
                         int max_degree) {
  if (gens.empty()) return DiffPoly(1);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(gens.size()) - 1);
  std::uniform_int_distribution<int> ord(0, max_order);
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  std::vector<DiffPoly::Term> out;
  for (int t = 0; t < terms; ++t) {
    Monomial mono;
    int dg = deg(rng);
    for (int k = 0; k < dg; ++k) mono.push_back({gens[static_cast<std::size_t>(pick(rng))].with_order(ord(rng)), 1});
    int nn = num(rng);
    if (nn == 0) nn = 1;
    Rational c(nn, den(rng));
    c.canonicalize();
    out.push_back({mono, c});
  }
  return DiffPoly::from_terms(out);
}

}  // namespace agdcas
