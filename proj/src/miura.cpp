#include "agdcas/miura.hpp"

#include <mutex>
#include <stdexcept>

namespace agdcas {

DiffPoly MiuraMap::apply(const DiffPoly& f) const {
  return substitute(f, [this](VarKey g) -> std::optional<DiffPoly> {
    auto it = image.find(g);
    if (it != image.end()) return it->second;
    if (g.is_param()) return std::nullopt;
    throw std::out_of_range("Miura map: no image for a source variable");
  });
}

LambdaValue MiuraMap::apply(const LambdaValue& v) const {
  if (!v.is_local()) throw std::domain_error("Miura map applied to a nonlocal value");
  LambdaPoly r;
  for (int p = 0; p <= v.local.degree(); ++p) r.add_to(p, apply(v.local.coeff(p)));
  return LambdaValue(r);
}

LambdaValue miura_hom_residual(const MiuraMap& mu, VarKey gi, VarKey gj) {
  LambdaValue lhs = master_bracket(mu.target, mu.image.at(gi), mu.image.at(gj));
  return lhs - mu.apply(mu.source.bracket(gi, gj));
}

std::vector<MiuraWitness> miura_check_all(const MiuraMap& mu, int jobs) {
  const auto& gens = mu.source.generators();
  std::vector<std::pair<VarKey, VarKey>> pairs;
  for (VarKey a : gens)
    for (VarKey b : gens) pairs.emplace_back(a, b);
  std::vector<LambdaValue> res(pairs.size());
  parallel_for(pairs.size(), jobs, [&](std::size_t i) { res[i] = miura_hom_residual(mu, pairs[i].first, pairs[i].second); });
  std::vector<MiuraWitness> out;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (!res[i].is_zero()) out.push_back({pairs[i].first, pairs[i].second, res[i]});
  return out;
}

// ---------------------------------------------------------------- free fields

namespace {

std::vector<std::vector<Rational>> scalar_matrix(int n, const Rational& s) {
  std::vector<std::vector<Rational>> r(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = s;
  return r;
}

VarKey v(int i) { return VarKey::make(Family::V, i); }

// Coefficients of (∂+v_n)∘…∘(∂+v_1) as the image of u_i of V_n.
std::map<VarKey, DiffPoly> factor_image(int n) {
  PsiDO l = PsiDO::identity(1);
  TruncationPolicy exact;
  for (int k = 1; k <= n; ++k) {
    PsiDO f = PsiDO::scalar({{1, DiffPoly(1)}, {0, DiffPoly::var(v(k))}});
    l = compose(f, l, exact);
  }
  std::map<VarKey, DiffPoly> img;
  for (int i = -n; i <= -1; ++i) img[VarKey::u(i)] = l.coeff(-i - 1)(0, 0);
  return img;
}

}  // namespace

MiuraMap miura_image(int n, int sign) {
  if (n < 1) throw std::invalid_argument("miura_image: N must be >= 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("miura_image: sign must be ±1");
  AdlerContext ctx;
  ctx.N = n;
  MiuraMap mu;
  mu.name = "miura(" + std::to_string(n) + ")";
  mu.source = build_H(ctx);
  mu.target = gfz_structure(n, scalar_matrix(n, Rational(sign)));
  mu.image = factor_image(n);
  return mu;
}

Structure dirac_gfz_closed_form(int n) {
  std::vector<std::vector<Rational>> s(static_cast<std::size_t>(n - 1), std::vector<Rational>(static_cast<std::size_t>(n - 1)));
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = Rational(1, n) - (i == j ? 1 : 0);
  return gfz_structure(n - 1, s);
}

MiuraMap dirac_miura(int n) {
  if (n < 2) throw std::invalid_argument("dirac_miura: N must be >= 2");
  AdlerContext ctx;
  ctx.N = n;
  ctx.reduced = true;
  DiffPoly theta, rest;
  std::vector<VarKey> kept;
  for (int i = 1; i <= n; ++i) theta += DiffPoly::var(v(i));
  for (int i = 1; i < n; ++i) {
    rest -= DiffPoly::var(v(i));
    kept.push_back(v(i));
  }
  GeneratorRule eliminate = [n, rest](VarKey g) -> std::optional<DiffPoly> {
    if (g.family() == Family::V && g.index() == n) return rest;
    return std::nullopt;
  };
  Structure gfz = gfz_structure(n, scalar_matrix(n, Rational(-1)));
  MiuraMap mu;
  mu.name = "dirac-miura(" + std::to_string(n) + ")";
  mu.source = dirac_reduce(ctx.unreduced(), build_H(ctx.unreduced()));
  mu.target = generic_dirac(gfz, {theta}, eliminate, kept, "GFZ_" + std::to_string(n) + "/θ");
  for (const auto& [g, f] : factor_image(n))
    if (ctx.is_generator(g)) mu.image[g] = substitute(f, eliminate);
  return mu;
}

// ---------------------------------------------------------------- products of operators

namespace {

Structure tensor_product(const std::vector<Structure>& parts, const std::string& name) {
  std::vector<VarKey> gens;
  for (const auto& p : parts) gens.insert(gens.end(), p.generators().begin(), p.generators().end());
  std::vector<Structure> copy = parts;
  Structure::Rule rule = [copy](VarKey gi, VarKey gj) -> LambdaValue {
    for (const auto& p : copy)
      if (p.contains(gi)) return p.contains(gj) ? p.bracket(gi, gj) : LambdaValue();
    throw std::invalid_argument("tensor product: unknown generator");
  };
  Structure::Options o;
  o.member = [copy](VarKey g) {
    for (const auto& p : copy)
      if (p.contains(g)) return true;
    return false;
  };
  for (const auto& p : parts) o.infinite = o.infinite || p.infinite();
  return Structure(name, gens, rule, o);
}

}  // namespace

MiuraMap general_miura(const std::vector<AdlerContext>& factors, const TruncationPolicy& policy) {
  if (factors.empty()) throw std::invalid_argument("general_miura: no factors");
  const int m = factors.front().m;
  AdlerContext src;
  src.N = 0;
  src.m = m;
  std::vector<Structure> parts;
  std::string label;
  PsiDO prod = PsiDO::identity(m);
  for (std::size_t k = 0; k < factors.size(); ++k) {
    AdlerContext f = factors[k];
    if (f.m != m) throw std::invalid_argument("general_miura: factors must share m");
    if (f.reduced) throw std::invalid_argument("general_miura: factors must be unreduced");
    f.family = factor_family(static_cast<int>(k));
    src.N += f.N;
    if (f.flavor == Flavor::Infinite) src.flavor = Flavor::Infinite;
    src.window = std::max(src.window, f.window);
    parts.push_back(build_H(f));
    label += (k ? "," : "") + std::to_string(f.N);
    prod = compose(prod, f.L(policy), policy);
  }
  MiuraMap mu;
  mu.name = "miura(" + label + ")";
  mu.source = build_H(src);
  mu.target = tensor_product(parts, "R(" + label + ")");
  for (VarKey g : src.generators()) {
    int e = -g.index() - 1;
    if (!prod.exact() && e < prod.floor())
      throw std::runtime_error("general_miura: truncation floor too shallow for the generator window");
    mu.image[g] = prod.coeff(e)(g.a() - 1, g.b() - 1);
  }
  return mu;
}

MiuraMap general_miura(int order_a, int order_b) {
  AdlerContext a, b;
  a.N = order_a;
  b.N = order_b;
  return general_miura({a, b});
}

MiuraMap matrix_miura(int n, int m) {
  std::vector<AdlerContext> factors(static_cast<std::size_t>(n));
  for (auto& f : factors) {
    f.N = 1;
    f.m = m;
  }
  MiuraMap mu = general_miura(factors);
  mu.name = "matrix-miura(" + std::to_string(n) + "," + std::to_string(m) + ")";
  return mu;
}

}  // namespace agdcas
