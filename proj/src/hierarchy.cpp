#include "agdcas/hierarchy.hpp"

#include <mutex>
#include <sstream>
#include <stdexcept>

namespace agdcas {

TruncationPolicy HierarchySpec::policy_for(int k) const {
  TruncationPolicy p;
  p.convergence_margin = convergence_margin;
  if (floor) {
    p.floor = *floor;
    return p;
  }
  p.floor = -(k + ctx.N + 2);
  if (ctx.flavor == Flavor::Infinite) p.floor = std::min(p.floor, -(k + ctx.N + ctx.window + 4));
  return p;
}

Structure cached_structure(const AdlerContext& ctx, BracketChoice which) {
  static std::mutex mu;
  static std::map<std::string, Structure> cache;
  std::ostringstream key;
  key << ctx.label() << '/' << ctx.window << '/' << static_cast<int>(ctx.family) << '/' << static_cast<int>(which);
  std::lock_guard lock(mu);
  auto it = cache.find(key.str());
  if (it != cache.end()) return it->second;
  Structure s;
  switch (which) {
    case BracketChoice::H:
      if (ctx.reduced) throw std::invalid_argument("H lives on the unreduced algebra");
      s = build_H(ctx);
      break;
    case BracketChoice::K:
      s = build_K(ctx);
      break;
    case BracketChoice::HD:
      if (!ctx.reduced) throw std::invalid_argument("H^D lives on the reduced algebra");
      s = dirac_reduce(ctx.unreduced(), build_H(ctx.unreduced()));
      break;
  }
  cache.emplace(key.str(), s);
  return s;
}

// ---------------------------------------------------------------- densities

namespace {

DiffPoly density_at(const AdlerContext& ctx, int k, const TruncationPolicy& pol) {
  PsiDO l = ctx.L(pol);
  PsiDO p = frac_power(l, k, ctx.N, pol.with_floor(std::max(pol.floor, -1)));
  return trace_residue(p) * frac(ctx.N, k);
}

DiffPoly varder_at(const AdlerContext& ctx, int k, VarKey gen, const TruncationPolicy& pol) {
  const int i = gen.index(), a = gen.a(), b = gen.b();
  PsiDO l = ctx.L(pol);
  PsiDO p = frac_power(l, k - ctx.N, ctx.N, pol.with_floor(std::max(pol.floor, -ctx.N)));
  const int q = -i - 1;
  DiffPoly r;
  const int top = p.is_zero() ? 0 : p.order();
  for (int t = 0;; ++t) {
    if (q >= 0 && t > q) break;
    int e = t - q - 1;
    if (e > top) break;
    DiffPoly c = p.coeff(e)(b - 1, a - 1);
    if (!c.is_zero()) r += total_derivative(c, t) * binom(q, t);
  }
  return r;
}

void require_stable(bool equal, const char* what, int k) {
  if (!equal) {
    std::ostringstream os;
    os << what << " for k=" << k << " changed when the truncation floor was lowered; use a deeper --floor";
    throw std::runtime_error(os.str());
  }
}

}  // namespace

DiffPoly density(const HierarchySpec& spec, int k) {
  if (k < 1) throw std::invalid_argument("density: k must be positive");
  TruncationPolicy pol = spec.policy_for(k);
  DiffPoly h = density_at(spec.ctx, k, pol);
  if (spec.stability_recheck) require_stable(h == density_at(spec.ctx, k, pol.deeper()), "density", k);
  return h;
}

DiffPoly density_varder(const HierarchySpec& spec, int k, VarKey gen) {
  if (k < 1) throw std::invalid_argument("density_varder: k must be positive");
  if (!spec.ctx.is_generator(gen)) throw std::invalid_argument("density_varder: not a generator of the context");
  TruncationPolicy pol = spec.policy_for(k);
  DiffPoly r = varder_at(spec.ctx, k, gen, pol);
  if (spec.stability_recheck) require_stable(r == varder_at(spec.ctx, k, gen, pol.deeper()), "variational derivative", k);
  return r;
}

// ---------------------------------------------------------------- flows

namespace {

FlowEquation lax_flow_at(const AdlerContext& ctx, int k, const TruncationPolicy& pol) {
  PsiDO l = ctx.L(pol);
  PsiDO p = plus_part(frac_power(l, k, ctx.N, pol.with_floor(std::max(pol.floor, 0))));
  PsiDO c = compose(p, l, pol) - compose(l, p, pol);
  FlowEquation fe;
  fe.k = k;
  for (VarKey g : ctx.generators()) fe.rhs[g] = c.coeff(-g.index() - 1)(g.a() - 1, g.b() - 1);
  if (ctx.reduced)
    for (int a = 1; a <= ctx.m; ++a)
      for (int b = 1; b <= ctx.m; ++b)
        fe.constraint_flow[VarKey::make(ctx.family, -ctx.N, a, b)] = c.coeff(ctx.N - 1)(a - 1, b - 1);
  return fe;
}

}  // namespace

FlowEquation lax_flow(const HierarchySpec& spec, int k) {
  if (k < 1) throw std::invalid_argument("lax_flow: k must be positive");
  TruncationPolicy pol = spec.policy_for(k);
  FlowEquation fe = lax_flow_at(spec.ctx, k, pol);
  if (spec.stability_recheck) {
    FlowEquation deeper = lax_flow_at(spec.ctx, k, pol.deeper());
    require_stable(fe == deeper && fe.constraint_flow == deeper.constraint_flow, "Lax flow", k);
  }
  return fe;
}

FlowEquation bracket_flow(const HierarchySpec& spec, BracketChoice which, int k) {
  const AdlerContext& ctx = spec.ctx;
  FlowEquation fe;
  fe.k = k;
  Structure s;
  DiffPoly h;
  bool reduce_after = false;
  if (which == BracketChoice::H && ctx.reduced) {
    HierarchySpec vspec = spec;
    vspec.ctx = ctx.unreduced();
    h = density(vspec, k);
    s = cached_structure(vspec.ctx, BracketChoice::H);
    reduce_after = true;
  } else {
    h = density(spec, k);
    s = cached_structure(ctx, which);
  }
  const int n = ctx.N;
  const Family fam = ctx.family;
  GeneratorRule drop_constraint = [n, fam](VarKey g) -> std::optional<DiffPoly> {
    if (g.family() == fam && g.index() == -n) return DiffPoly();
    return std::nullopt;
  };
  for (VarKey g : ctx.generators()) {
    DiffPoly a = flow_bracket_route(s, h, g);
    if (spec.cross_check_routes) {
      DiffPoly b = flow_operator_route(s, h, g);
      if (!(a == b)) throw std::logic_error("flow routes disagree (λ=0 bracket vs H(∂)·varder)");
    }
    if (reduce_after) a = substitute(a, drop_constraint);
    fe.rhs[g] = a;
  }
  return fe;
}

std::map<VarKey, DiffPoly> lenard_residual(const HierarchySpec& spec, int k) {
  BracketChoice first = (spec.ctx.reduced && spec.ctx.m == 1) ? BracketChoice::HD : BracketChoice::H;
  FlowEquation a = bracket_flow(spec, first, k);
  FlowEquation b = bracket_flow(spec, BracketChoice::K, k + spec.ctx.N);
  std::map<VarKey, DiffPoly> r;
  for (const auto& [g, f] : a.rhs) r[g] = f - b.rhs.at(g);
  return r;
}

InvolutionResult involution_check(const HierarchySpec& spec, int k1, int k2) {
  if (spec.ctx.reduced && spec.ctx.m > 1)
    throw std::domain_error("involution check needs a local structure; matrix H^D is nonlocal");
  LocalFunctional f{density(spec, k1)}, g{density(spec, k2)};
  Structure first = cached_structure(spec.ctx, spec.ctx.reduced ? BracketChoice::HD : BracketChoice::H);
  Structure second = cached_structure(spec.ctx, BracketChoice::K);
  return {functional_bracket(first, f, g), functional_bracket(second, f, g)};
}

Matrix b_star_annihilation(const HierarchySpec& spec, int k) {
  const AdlerContext& ctx = spec.ctx;
  if (ctx.flavor != Flavor::Finite || ctx.reduced)
    throw std::invalid_argument("b_star_annihilation needs a finite unreduced matrix context");
  std::map<int, Matrix> g;
  for (int i = -ctx.N; i <= -1; ++i) {
    Matrix gi(ctx.m);
    for (int a = 1; a <= ctx.m; ++a)
      for (int b = 1; b <= ctx.m; ++b)
        gi(a - 1, b - 1) = density_varder(spec, k, VarKey::make(ctx.family, i, a, b));
    g.emplace(i, gi);
  }
  return constraint_B_adjoint(ctx, g);
}

// ---------------------------------------------------------------- derivations and PDEs

DiffPoly FlowDerivation::operator()(const DiffPoly& f) const {
  std::map<VarKey, bool> seen;
  for (const auto& t : f.terms())
    for (const auto& fac : t.mono)
      if (!fac.var.is_param()) seen[fac.var] = true;
  DiffPoly r;
  for (const auto& [v, unused] : seen) {
    (void)unused;
    auto it = gen_.find(v.generator());
    if (it == gen_.end()) throw std::out_of_range("flow derivation: no flow known for a generator in the expression");
    r += partial(f, v) * total_derivative(it->second, v.order());
  }
  return r;
}

bool PdeCheck::zero() const {
  for (const auto& [label, r] : residuals)
    if (!r.is_zero()) return false;
  return true;
}

HierarchySpec named_hierarchy(const std::string& name) {
  HierarchySpec s;
  if (name == "kdv") {
    s.ctx = {2, 1, Flavor::Finite, true};
    s.k_max = 5;
  } else if (name == "boussinesq") {
    s.ctx = {3, 1, Flavor::Finite, true};
    s.k_max = 4;
  } else if (name == "kp") {
    s.ctx = {1, 1, Flavor::Infinite, true};
    s.k_max = 4;
  } else if (name == "matrix_kdv") {
    s.ctx = {2, 2, Flavor::Finite, true};
    s.k_max = 3;
  } else if (name == "matrix_kp") {
    s.ctx = {1, 2, Flavor::Infinite, true};
    s.k_max = 3;
  } else if (name == "v2") {
    s.ctx = {2, 1, Flavor::Finite, false};
    s.k_max = 5;
  } else if (name == "v3") {
    s.ctx = {3, 1, Flavor::Finite, false};
    s.k_max = 4;
  } else if (name == "v-mat22") {
    s.ctx = {2, 2, Flavor::Finite, false};
    s.k_max = 3;
  } else {
    throw std::invalid_argument("unknown hierarchy: " + name);
  }
  s.ctx.window = 3;
  return s;
}

namespace {

DiffPoly d(const DiffPoly& f, int n = 1) { return total_derivative(f, n); }

}  // namespace

PdeCheck verify_reduced_pde(const std::string& name) {
  PdeCheck out;
  out.name = name;
  if (name == "kp") {
    HierarchySpec spec = named_hierarchy("kp");
    FlowDerivation d1(lax_flow(spec, 1).rhs), d2(lax_flow(spec, 2).rhs), d3(lax_flow(spec, 3).rhs);
    DiffPoly u = DiffPoly::var(VarKey::u(0)) * Rational(2);
    auto kp = [&](const FlowDerivation& dy, const FlowDerivation& dt) {
      return dy(dy(u)) * Rational(3) - d(dt(u) * Rational(4) - d(u, 3) - u * d(u) * Rational(6));
    };
    out.residuals.push_back({"3u_yy - (4u_t - u''' - 6uu')' with y = t_2, t = t_3", kp(d2, d3)});
    out.diagnostics.push_back({"same with y = t_1, t = t_2", kp(d1, d2)});
  } else if (name == "boussinesq") {
    HierarchySpec spec = named_hierarchy("boussinesq");
    FlowDerivation d2(lax_flow(spec, 2).rhs);
    DiffPoly u = DiffPoly::var(VarKey::u(-2));
    DiffPoly utt = d2(d2(u));
    DiffPoly uu1 = d(u * d(u));
    out.residuals.push_back({"u_tt + (1/3)(u'''' - 4(uu')')", utt + (d(u, 4) - uu1 * Rational(4)) * Rational(1, 3)});
    out.diagnostics.push_back({"u_tt + (1/3)(u'''' + 4(uu')')", utt + (d(u, 4) + uu1 * Rational(4)) * Rational(1, 3)});
  } else if (name == "matrix_kp") {
    HierarchySpec spec = named_hierarchy("matrix_kp");
    const int m = spec.ctx.m;
    FlowDerivation d2(lax_flow(spec, 2).rhs), d3(lax_flow(spec, 3).rhs);
    Matrix U(m), W(m);
    for (int a = 1; a <= m; ++a)
      for (int b = 1; b <= m; ++b) {
        U(a - 1, b - 1) = spec.ctx.u(0, a, b);
        W(a - 1, b - 1) = spec.ctx.u(1, a, b) * Rational(2) + d(spec.ctx.u(0, a, b));
      }
    Matrix u2 = U * U, comm = U * W - W * U;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        std::string ab = std::to_string(a + 1) + std::to_string(b + 1);
        out.residuals.push_back({"W' - U_y [" + ab + "]", d(W(a, b)) - d2(U(a, b))});
        DiffPoly rhs = d3(U(a, b)) * Rational(4) - d(U(a, b), 3) - d(u2(a, b)) * Rational(6) + comm(a, b) * Rational(6);
        out.residuals.push_back({"3W_y - (4U_t - U''' - 6(U^2)' + 6[U,W]) [" + ab + "]", d2(W(a, b)) * Rational(3) - rhs});
      }
  } else {
    throw std::invalid_argument("unknown PDE: " + name + " (expected kp, boussinesq or matrix_kp)");
  }
  return out;
}

}  // namespace agdcas
