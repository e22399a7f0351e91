#include "agdcas/pva.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <thread>

namespace agdcas {

struct Structure::Impl {
  std::string name;
  std::vector<VarKey> gens;
  Rule rule;
  Options opts;
  mutable std::shared_mutex mu;
  mutable std::map<std::pair<VarKey, VarKey>, std::unique_ptr<LambdaValue>> cache;
};

Structure::Structure(std::string name, std::vector<VarKey> generators, Rule rule, Options opts)
    : impl_(std::make_shared<Impl>()) {
  impl_->name = std::move(name);
  impl_->gens = std::move(generators);
  impl_->rule = std::move(rule);
  impl_->opts = std::move(opts);
}

const std::string& Structure::name() const { return impl_->name; }
const std::vector<VarKey>& Structure::generators() const { return impl_->gens; }
bool Structure::local() const { return impl_->opts.local; }
bool Structure::infinite() const { return impl_->opts.infinite; }
int Structure::N() const { return impl_->opts.N; }
int Structure::m() const { return impl_->opts.m; }

bool Structure::contains(VarKey gen) const {
  if (impl_->opts.member) return impl_->opts.member(gen.generator());
  return std::find(impl_->gens.begin(), impl_->gens.end(), gen.generator()) != impl_->gens.end();
}

const LambdaValue& Structure::bracket(VarKey gi, VarKey gj) const {
  gi = gi.generator();
  gj = gj.generator();
  auto key = std::make_pair(gi, gj);
  {
    std::shared_lock lock(impl_->mu);
    auto it = impl_->cache.find(key);
    if (it != impl_->cache.end()) return *it->second;
  }
  if (!contains(gi) || !contains(gj))
    throw std::invalid_argument("bracket requested for a variable outside the structure '" + impl_->name + "'");
  auto value = std::make_unique<LambdaValue>(impl_->rule(gi, gj));
  std::unique_lock lock(impl_->mu);
  auto [it, inserted] = impl_->cache.try_emplace(key, std::move(value));
  return *it->second;
}

const LambdaPoly& Structure::local_bracket(VarKey gi, VarKey gj) const {
  const LambdaValue& v = bracket(gi, gj);
  if (!v.is_local()) throw std::domain_error("operation requires a local structure; '" + impl_->name + "' has nonlocal entries");
  return v.local;
}

Structure Structure::linear_combination(const std::string& name, const Structure& s0, const Structure& s1,
                                        const DiffPoly& coeff) {
  Options opts = s0.impl_->opts;
  opts.local = s0.local() && s1.local();
  Structure a = s0, b = s1;
  Rule rule = [a, b, coeff](VarKey gi, VarKey gj) {
    LambdaValue v = a.bracket(gi, gj);
    const LambdaValue& w = b.bracket(gi, gj);
    if (!w.is_local()) throw std::domain_error("linear combination with nonlocal entries is not supported");
    v.local += coeff * w.local;
    return v;
  };
  if (!opts.member) {
    Structure base = s0;
    opts.member = [base](VarKey g) { return base.contains(g); };
  }
  return Structure(name, s0.generators(), rule, opts);
}

// ---------------------------------------------------------------- brackets

namespace {

// Variables u_i^{(n)} of a generator present in f, grouped by generator.
std::map<VarKey, int> generator_orders(const DiffPoly& f) {
  std::map<VarKey, int> r;
  for (const auto& t : f.terms())
    for (const auto& fac : t.mono) {
      if (fac.var.is_param()) continue;
      auto& o = r[fac.var.generator()];
      o = std::max(o, fac.var.order());
    }
  return r;
}

}  // namespace

LambdaPoly bracket_gen_right(const Structure& s, VarKey gi, const DiffPoly& g) {
  LambdaPoly r;
  for (const auto& [gj, top] : generator_orders(g)) {
    const LambdaPoly& h = s.local_bracket(gi, gj);
    if (h.is_zero()) continue;
    LambdaPoly shifted = h;
    for (int n = 0; n <= top; ++n) {
      if (n > 0) shifted = shift_apply(1, shifted);
      DiffPoly dg = partial(g, gj.with_order(n));
      if (!dg.is_zero()) r += dg * shifted;
    }
  }
  return r;
}

LambdaPoly bracket_left_gen(const Structure& s, const DiffPoly& f, VarKey gk) {
  LambdaPoly r;
  for (const auto& [gi, top] : generator_orders(f)) {
    const LambdaPoly& h = s.local_bracket(gi, gk);
    if (h.is_zero()) continue;
    LambdaPoly x;
    for (int m = 0; m <= top; ++m) {
      DiffPoly df = partial(f, gi.with_order(m));
      if (!df.is_zero()) x += neg_shift_apply(m, LambdaPoly(df));
    }
    r += apply_symbol(h, x);
  }
  return r;
}

namespace {

bool is_linear_in_generators(const DiffPoly& f) {
  for (const auto& t : f.terms()) {
    if (t.mono.size() != 1 || t.mono[0].exp != 1 || t.mono[0].var.is_param() || t.mono[0].var.order() != 0)
      return false;
  }
  return true;
}

}  // namespace

LambdaValue master_bracket(const Structure& s, const DiffPoly& f, const DiffPoly& g) {
  if (!s.local()) {
    if (!is_linear_in_generators(f) || !is_linear_in_generators(g))
      throw std::domain_error("master_bracket on a nonlocal structure supports only linear combinations of generators");
    LambdaValue r;
    for (const auto& a : f.terms())
      for (const auto& b : g.terms()) r += s.bracket(a.mono[0].var, b.mono[0].var).scaled(a.coeff * b.coeff);
    return r;
  }
  LambdaPoly r;
  for (const auto& [gj, top] : generator_orders(g)) {
    LambdaPoly base = bracket_left_gen(s, f, gj);
    if (base.is_zero()) continue;
    for (int n = 0; n <= top; ++n) {
      if (n > 0) base = shift_apply(1, base);
      DiffPoly dg = partial(g, gj.with_order(n));
      if (!dg.is_zero()) r += dg * base;
    }
  }
  return LambdaValue(r);
}

LambdaValue skew_residual(const Structure& s, VarKey gi, VarKey gj) {
  return s.bracket(gi, gj) + flip(s.bracket(gj, gi));
}

LambdaMuPoly jacobi_residual(const Structure& s, VarKey gi, VarKey gj, VarKey gk) {
  LambdaMuPoly res;
  // {u_i λ {u_j μ u_k}}
  const LambdaPoly& jk = s.local_bracket(gj, gk);
  for (int q = 0; q <= jk.degree(); ++q) {
    if (jk.coeff(q).is_zero()) continue;
    LambdaPoly v = bracket_gen_right(s, gi, jk.coeff(q));
    for (int p = 0; p <= v.degree(); ++p) res.add_to(p, q, v.coeff(p));
  }
  // − {u_j μ {u_i λ u_k}}
  const LambdaPoly& ik = s.local_bracket(gi, gk);
  for (int p = 0; p <= ik.degree(); ++p) {
    if (ik.coeff(p).is_zero()) continue;
    LambdaPoly v = bracket_gen_right(s, gj, ik.coeff(p));
    for (int r = 0; r <= v.degree(); ++r) res.add_to(p, r, -v.coeff(r));
  }
  // − {{u_i λ u_j} λ+μ u_k}
  const LambdaPoly& ij = s.local_bracket(gi, gj);
  for (int p = 0; p <= ij.degree(); ++p) {
    if (ij.coeff(p).is_zero()) continue;
    LambdaPoly v = bracket_left_gen(s, ij.coeff(p), gk);
    for (int r = 0; r <= v.degree(); ++r) {
      if (v.coeff(r).is_zero()) continue;
      for (int t = 0; t <= r; ++t) res.add_to(p + t, r - t, -(v.coeff(r) * binom(r, t)));
    }
  }
  return res;
}

LambdaMuPoly compat_residual(const Structure& s0, const Structure& s1, VarKey gi, VarKey gj, VarKey gk) {
  Structure pencil =
      Structure::linear_combination(s0.name() + "+t*" + s1.name(), s0, s1, DiffPoly::var(compat_param()));
  return jacobi_residual(pencil, gi, gj, gk);
}

LocalFunctional functional_bracket(const Structure& s, const LocalFunctional& f, const LocalFunctional& g) {
  LambdaValue v = master_bracket(s, f.rep, g.rep);
  return LocalFunctional{v.local.coeff(0)};
}

DiffPoly flow_bracket_route(const Structure& s, const DiffPoly& h, VarKey gen) {
  return bracket_left_gen(s, h, gen.generator()).coeff(0);
}

DiffPoly flow_operator_route(const Structure& s, const DiffPoly& h, VarKey gen) {
  DiffPoly r;
  for (VarKey gi : generators_of(h)) {
    DiffPoly d = varder(h, gi);
    if (d.is_zero()) continue;
    const LambdaPoly& op = s.local_bracket(gi, gen.generator());
    DiffPoly dd = d;
    for (int p = 0; p <= op.degree(); ++p) {
      if (p > 0) dd = total_derivative(dd);
      if (!op.coeff(p).is_zero()) r += op.coeff(p) * dd;
    }
  }
  return r;
}

// ---------------------------------------------------------------- sweeps

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<int>(jobs, static_cast<int>(count));
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<CheckResult> sweep(Check check, const Structure& s, const std::vector<VarKey>& gens, int jobs,
                               const Structure* partner) {
  std::vector<CheckResult> out;
  if (check == Check::Skew) {
    for (VarKey a : gens)
      for (VarKey b : gens) out.push_back({check, {a, b}, true, {}, {}});
  } else {
    if (!s.local()) throw std::domain_error("Jacobi and compatibility checks need a local structure");
    if (check == Check::Compat && !partner) throw std::invalid_argument("compatibility check needs a second structure");
    for (VarKey a : gens)
      for (VarKey b : gens)
        for (VarKey c : gens) out.push_back({check, {a, b, c}, true, {}, {}});
  }
  std::optional<Structure> pencil;
  if (check == Check::Compat)
    pencil = Structure::linear_combination(s.name() + "+t*" + partner->name(), s, *partner,
                                           DiffPoly::var(compat_param()));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    CheckResult& r = out[i];
    if (check == Check::Skew) {
      r.pair_residual = skew_residual(s, r.gens[0], r.gens[1]);
      r.zero = r.pair_residual.is_zero();
    } else {
      const Structure& target = pencil ? *pencil : s;
      r.triple_residual = jacobi_residual(target, r.gens[0], r.gens[1], r.gens[2]);
      r.zero = r.triple_residual.is_zero();
    }
  });
  return out;
}

}  // namespace agdcas
