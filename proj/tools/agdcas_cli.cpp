#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "agdcas/miura.hpp"
#include "agdcas/registry.hpp"

using namespace agdcas;

namespace {

constexpr int kOk = 0;
constexpr int kResidual = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  int N = 0;
  int m = 1;
  int window = 3;
  std::string format = "text";
  int jobs = 1;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--N", c.N, "operator order for vN, vN-inf and wN");
  app->add_option("--m", c.m, "matrix size")->check(CLI::Range(1, 63));
  app->add_option("--window", c.window, "generator window for infinite flavors")->check(CLI::Range(0, 64));
  app->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "latex", "json"}));
  app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::Range(1, 256));
}

NamedStructure resolve(const std::string& name, const Common& c) {
  try {
    return resolve_structure({name, c.N, c.m, c.window});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

VarKey pick_generator(const NamedStructure& s, int index, const std::string& ab) {
  int a = 1, b = 1;
  if (!ab.empty()) {
    if (ab.size() != 2 || !std::isdigit(static_cast<unsigned char>(ab[0])) || !std::isdigit(static_cast<unsigned char>(ab[1])))
      throw UsageError("matrix entry must be two digits, e.g. 12");
    a = ab[0] - '0';
    b = ab[1] - '0';
  }
  const auto& gens = s.generators();
  if (gens.empty()) throw UsageError("structure has no generators");
  VarKey g = VarKey::make(gens.front().family(), index, a, b);
  if (!s.first.contains(g)) {
    std::ostringstream os;
    os << "index " << index << (ab.empty() ? "" : " entry " + ab) << " is not a generator of " << s.name;
    throw UsageError(os.str());
  }
  return g;
}

std::string render_value(const LambdaValue& v, const Namer& namer, Format f) {
  switch (f) {
    case Format::Latex:
      return render_latex(v, namer);
    case Format::Json:
      return to_json(v).dump();
    default:
      return render_text(v, namer);
  }
}

std::string render_poly(const DiffPoly& p, const Namer& namer, Format f) {
  switch (f) {
    case Format::Latex:
      return render_latex(p, namer);
    case Format::Json:
      return to_json(p).dump();
    default:
      return render_text(p, namer);
  }
}

int default_kmax(const AdlerContext& ctx) {
  if (ctx.m > 1) return 3;
  if (ctx.flavor == Flavor::Infinite) return 4;
  return ctx.N == 2 ? 5 : 4;
}

// ---------------------------------------------------------------- bracket

struct BracketArgs {
  Common c;
  std::string name, which = "H", ab, cd;
  int i = 0, j = 0;
  bool pencil = false;
};

int cmd_bracket(const BracketArgs& a) {
  NamedStructure s = resolve(a.name, a.c);
  Format fmt = parse_format(a.c.format);
  std::string which = a.pencil ? "pencil" : a.which;
  Structure chosen;
  if (which == "H") {
    chosen = s.first;
  } else if (which == "K") {
    if (!s.second) throw UsageError("structure '" + s.name + "' has no K");
    chosen = *s.second;
  } else if (which == "HD") {
    if (!s.ctx) throw UsageError("H^D needs an AGD structure");
    if (s.ctx->reduced) {
      chosen = s.first;
    } else {
      AdlerContext w = *s.ctx;
      w.reduced = true;
      s.namer = namer_for(w);
      s.first = dirac_reduce(*s.ctx, s.first);
      chosen = s.first;
    }
  } else if (which == "pencil") {
    chosen = s.pencil();
  } else {
    throw UsageError("--structure must be H, K, HD or pencil");
  }
  VarKey gi = pick_generator(s, a.i, a.ab), gj = pick_generator(s, a.j, a.cd);
  if (!chosen.contains(gi) || !chosen.contains(gj)) throw UsageError("generator is not part of the requested structure");
  std::cout << render_value(chosen.bracket(gi, gj), s.namer, fmt) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  Common c;
  std::string name;
  std::vector<std::string> checks{"skew", "jacobi"};
};

int cmd_verify(const VerifyArgs& a) {
  NamedStructure s = resolve(a.name, a.c);
  Format fmt = parse_format(a.c.format);
  json report = json::array();
  bool all_zero = true;
  std::ostringstream text;
  for (const auto& name : a.checks) {
    Check check;
    if (name == "skew")
      check = Check::Skew;
    else if (name == "jacobi")
      check = Check::Jacobi;
    else if (name == "compat")
      check = Check::Compat;
    else
      throw UsageError("unknown check '" + name + "' (expected skew, jacobi or compat)");
    if (check != Check::Skew && !s.first.local())
      throw UsageError("structure '" + s.name + "' is nonlocal; Jacobi and compatibility checks need a local structure");
    if (check == Check::Compat && !s.second) throw UsageError("structure '" + s.name + "' has no second structure");
    const Structure* partner = s.second ? &*s.second : nullptr;
    std::vector<CheckResult> results = sweep(check, s.first, s.generators(), a.c.jobs, partner);
    std::size_t failures = 0;
    for (const auto& r : results) {
      if (r.zero) continue;
      ++failures;
      all_zero = false;
      json idx = json::array();
      std::string names;
      for (VarKey g : r.gens) {
        idx.push_back(s.namer(g, false));
        names += (names.empty() ? "" : ", ") + s.namer(g, false);
      }
      json residual = check == Check::Skew ? to_json(r.pair_residual) : to_json(r.triple_residual);
      report.push_back({{"check", name}, {"indices", idx}, {"residual", residual}});
      text << "  witness (" << names << "): "
           << (check == Check::Skew ? render_text(r.pair_residual, s.namer) : render_text(r.triple_residual, s.namer))
           << "\n";
    }
    std::ostringstream line;
    line << name << ": " << (failures ? "FAIL" : "ok") << " (" << results.size() - failures << "/" << results.size()
         << " vanish)\n";
    text.str(line.str() + text.str());
  }
  if (fmt == Format::Json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << s.first.name() << "\n" << text.str();
  return all_zero ? kOk : kResidual;
}

// ---------------------------------------------------------------- hierarchy / densities

struct HierArgs {
  Common c;
  std::string name;
  int k = 0, kmax = 0;
  std::optional<int> floor;
  bool cross_check = false;
};

HierarchySpec hierarchy_spec(const HierArgs& a, const NamedStructure& s) {
  if (!s.ctx) throw UsageError("structure '" + s.name + "' has no Lax operator");
  HierarchySpec spec;
  spec.ctx = *s.ctx;
  spec.k_max = a.kmax > 0 ? a.kmax : default_kmax(spec.ctx);
  spec.floor = a.floor;
  spec.cross_check_routes = a.cross_check;
  return spec;
}

int cmd_hierarchy(const HierArgs& a) {
  NamedStructure s = resolve(a.name, a.c);
  Format fmt = parse_format(a.c.format);
  HierarchySpec spec = hierarchy_spec(a, s);
  std::vector<int> ks;
  if (a.k > 0)
    ks.push_back(a.k);
  else
    for (int k = 1; k <= spec.k_max; ++k) ks.push_back(k);
  bool mismatch = false;
  json out = json::array();
  for (int k : ks) {
    FlowEquation fe = lax_flow(spec, k);
    if (a.cross_check) {
      bool scalar_reduced = spec.ctx.reduced && spec.ctx.m == 1;
      FlowEquation viaH = bracket_flow(spec, BracketChoice::H, k);
      bool ok = viaH == fe;
      if (scalar_reduced) ok = ok && bracket_flow(spec, BracketChoice::HD, k) == fe;
      for (const auto& [g, r] : fe.constraint_flow) ok = ok && r.is_zero();
      if (!ok) {
        mismatch = true;
        std::cerr << "k=" << k << ": Lax and Hamiltonian flows disagree\n";
      }
    }
    if (fmt == Format::Json)
      out.push_back(to_json(fe, s.namer));
    else
      std::cout << render_flow(fe, s.namer, fmt);
  }
  if (fmt == Format::Json) std::cout << out.dump(2) << "\n";
  return mismatch ? kResidual : kOk;
}

int cmd_densities(const HierArgs& a) {
  NamedStructure s = resolve(a.name, a.c);
  Format fmt = parse_format(a.c.format);
  HierarchySpec spec = hierarchy_spec(a, s);
  json out = json::object();
  for (int k = 1; k <= spec.k_max; ++k) {
    DiffPoly h = reduce_mod_derivatives(density(spec, k));
    if (fmt == Format::Json)
      out[std::to_string(k)] = to_json(h);
    else if (fmt == Format::Latex)
      std::cout << "{\\textstyle\\int} h_{" << k << "} = {\\textstyle\\int} " << render_latex(h, s.namer) << "\n";
    else
      std::cout << "∫h_" << k << " = ∫ " << render_text(h, s.namer) << "\n";
  }
  if (fmt == Format::Json) std::cout << out.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- miura

struct MiuraArgs {
  Common c;
  bool reduced = false, check = false;
  std::vector<int> factors;
};

int cmd_miura(const MiuraArgs& a) {
  Format fmt = parse_format(a.c.format);
  MiuraMap mu;
  Namer src, tgt = default_namer();
  if (!a.factors.empty()) {
    std::vector<AdlerContext> fs;
    for (int n : a.factors) {
      if (n < 1) throw UsageError("factor orders must be positive");
      AdlerContext f;
      f.N = n;
      f.m = a.c.m;
      fs.push_back(f);
    }
    mu = general_miura(fs);
    AdlerContext sctx;
    sctx.m = a.c.m;
    src = namer_for(sctx);
  } else {
    if (a.c.N < 1) throw UsageError("miura needs --N >= 1");
    AdlerContext ctx;
    ctx.N = a.c.N;
    ctx.m = a.c.m;
    ctx.reduced = a.reduced;
    if (a.c.m > 1) {
      if (a.reduced) throw UsageError("the matrix Miura map is provided for the unreduced algebra only");
      mu = matrix_miura(a.c.N, a.c.m);
    } else if (a.reduced) {
      if (a.c.N < 2) throw UsageError("the reduced Miura map needs --N >= 2");
      mu = dirac_miura(a.c.N);
      tgt = namer_for_gfz(a.c.N, true);
    } else {
      mu = miura_image(a.c.N);
    }
    src = namer_for(ctx);
  }
  if (fmt == Format::Json) {
    json out = json::object();
    for (const auto& [g, f] : mu.image) out[src(g, true)] = to_json(f);
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& [g, f] : mu.image) {
      if (fmt == Format::Latex)
        std::cout << src(g, true) << " = " << render_latex(f, tgt) << "\n";
      else
        std::cout << src(g, false) << " = " << render_text(f, tgt) << "\n";
    }
  }
  if (!a.check) return kOk;
  auto failures = miura_check_all(mu, a.c.jobs);
  if (fmt != Format::Json) {
    std::cout << "homomorphism residuals: " << (failures.empty() ? "all zero" : "NONZERO") << "\n";
    for (const auto& w : failures)
      std::cout << "  (" << src(w.gi, false) << ", " << src(w.gj, false) << "): " << render_text(w.residual, tgt) << "\n";
  }
  return failures.empty() ? kOk : kResidual;
}

// ---------------------------------------------------------------- report

int cmd_report(const std::string& name, const Common& c) {
  NamedStructure s = resolve(name, c);
  Format fmt = parse_format(c.format);
  if (!s.ctx || !s.ctx->reduced || s.ctx->flavor != Flavor::Finite)
    throw UsageError("report needs a finite W algebra (w2, w3, wN, w-mat(N,m))");
  VirasoroReport r = virasoro_report(*s.ctx, s.first);
  const int n = s.ctx->N, m = s.ctx->m;
  Rational expected = frac(m * (n * n * n - n), 12);
  if (fmt == Format::Json) {
    json w = json::object();
    for (const auto& [g, q] : r.weights) w[s.namer(g, true)] = q.get_str();
    std::cout << json{{"structure", s.first.name()},
                      {"virasoro", r.virasoro_shape},
                      {"central_charge", r.central_charge.get_str()},
                      {"expected_central_charge", expected.get_str()},
                      {"weights", w},
                      {"diagnostics", r.diagnostics}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << s.first.name() << "\n";
    std::cout << "Virasoro element: " << (r.virasoro_shape ? "yes" : "no") << "\n";
    std::cout << "central charge: " << rational_text(r.central_charge) << " (m(N³−N)/12 = " << rational_text(expected)
              << ")\n";
    for (const auto& [g, q] : r.weights) std::cout << "weight of " << s.namer(g, false) << ": " << rational_text(q) << "\n";
    for (const auto& d : r.diagnostics) std::cout << "note: " << d << "\n";
  }
  return r.virasoro_shape && r.central_charge == expected ? kOk : kResidual;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"agdcas: exact computer algebra for Adler-Gelfand-Dickey Poisson structures"};
  app.require_subcommand(1);

  BracketArgs br;
  auto* sb = app.add_subcommand("bracket", "print a generator λ-bracket");
  add_common(sb, br.c);
  sb->add_option("name", br.name, "structure name (v2, w3, kp, gfz(3), ...)")->required();
  sb->add_option("i", br.i, "index of the left generator")->required();
  sb->add_option("j", br.j, "index of the right generator")->required();
  sb->add_option("--ab", br.ab, "matrix entry of the left generator (e.g. 12)");
  sb->add_option("--cd", br.cd, "matrix entry of the right generator");
  sb->add_option("--structure", br.which, "H, K, HD or pencil")->check(CLI::IsMember({"H", "K", "HD", "pencil"}));
  sb->add_flag("--pencil", br.pencil, "the pencil H − cK");

  VerifyArgs vr;
  auto* sv = app.add_subcommand("verify", "run skew-symmetry, Jacobi and compatibility sweeps");
  add_common(sv, vr.c);
  sv->add_option("name", vr.name, "structure name (v2, w3, kp, gfz(3), ...)")->required();
  sv->add_option("--checks", vr.checks, "comma-separated list of skew, jacobi, compat")->delimiter(',');

  HierArgs hr;
  auto* sh = app.add_subcommand("hierarchy", "Lax flows dL/dt_k");
  add_common(sh, hr.c);
  sh->add_option("name", hr.name, "structure name (v2, w3, kp, gfz(3), ...)")->required();
  sh->add_option("--k", hr.k, "a single flow index")->check(CLI::Range(1, 64));
  sh->add_option("--kmax", hr.kmax, "largest flow index")->check(CLI::Range(1, 64));
  sh->add_option("--floor", hr.floor, "truncation floor")->check(CLI::Range(-100000, -1));
  sh->add_flag("--cross-check", hr.cross_check, "compare with the Hamiltonian routes");

  HierArgs dr;
  auto* sd = app.add_subcommand("densities", "conserved densities ∫h_k");
  add_common(sd, dr.c);
  sd->add_option("name", dr.name, "structure name (v2, w3, kp, gfz(3), ...)")->required();
  sd->add_option("--kmax", dr.kmax, "largest k")->check(CLI::Range(1, 64));
  sd->add_option("--floor", dr.floor, "truncation floor")->check(CLI::Range(-100000, -1));
  sd->add_flag("--cross-check", dr.cross_check, "unused; accepted for symmetry");

  MiuraArgs mr;
  auto* sm = app.add_subcommand("miura", "Miura maps into free fields");
  add_common(sm, mr.c);
  sm->add_flag("--reduced", mr.reduced, "the map on the W algebra");
  sm->add_flag("--check", mr.check, "verify the homomorphism property on all generator pairs");
  sm->add_option("--factors", mr.factors, "orders of the factors of a generalized Miura map")->delimiter(',');

  std::string report_name;
  Common rc;
  auto* sr = app.add_subcommand("report", "Virasoro element, central charge and conformal weights");
  add_common(sr, rc);
  sr->add_option("name", report_name, "structure name (v2, w3, kp, gfz(3), ...)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (sb->parsed()) return cmd_bracket(br);
    if (sv->parsed()) return cmd_verify(vr);
    if (sh->parsed()) return cmd_hierarchy(hr);
    if (sd->parsed()) return cmd_densities(dr);
    if (sm->parsed()) return cmd_miura(mr);
    if (sr->parsed()) return cmd_report(report_name, rc);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
