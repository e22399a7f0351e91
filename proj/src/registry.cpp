#include "agdcas/registry.hpp"

#include <regex>
#include <stdexcept>

namespace agdcas {

Structure NamedStructure::pencil() const {
  if (!second) throw std::invalid_argument("structure '" + name + "' has no second structure for a pencil");
  return agdcas::pencil(first, *second);
}

std::vector<std::string> structure_names() {
  return {"v1",         "v2",         "v3",     "vN",       "vN-inf",     "kp", "w2", "w3", "wN",
          "v-mat(N,m)", "w-mat(N,m)", "gfz(N)", "virasoro", "broken-demo"};
}

namespace {

NamedStructure from_context(const std::string& name, const AdlerContext& ctx) {
  NamedStructure s;
  s.name = name;
  s.ctx = ctx;
  s.namer = namer_for(ctx);
  s.first = ctx.reduced ? dirac_reduce(ctx.unreduced(), build_H(ctx.unreduced())) : build_H(ctx);
  s.second = build_K(ctx);
  return s;
}

Structure constant_lambda_structure() {
  Structure::Rule rule = [](VarKey, VarKey) { return LambdaValue(LambdaPoly::monomial(DiffPoly(1), 1)); };
  Structure::Options o;
  o.N = 1;
  return Structure("Magri", {VarKey::make(Family::V, 1)}, rule, o);
}

int need_n(const StructureRequest& req, int lo) {
  if (req.N < lo) throw std::invalid_argument("structure '" + req.name + "' needs --N >= " + std::to_string(lo));
  return req.N;
}

}  // namespace

NamedStructure resolve_structure(const StructureRequest& req) {
  const std::string& n = req.name;
  std::smatch mt;
  auto ctx_of = [&](int N, int m, Flavor f, bool reduced) {
    if (N < 1 || m < 1 || N > 64 || m > 63) throw std::invalid_argument("N and m must be in range");
    AdlerContext c;
    c.N = N;
    c.m = m;
    c.flavor = f;
    c.reduced = reduced;
    c.window = req.window;
    return c;
  };
  static const std::regex v_re(R"(v(\d+))"), w_re(R"(w(\d+))"), vinf_re(R"(v(\d+|N)-inf)"),
      mat_re(R"(([vw])-mat\((\d+),(\d+)\))"), gfz_re(R"(gfz\((\d+)\))");
  if (std::regex_match(n, mt, v_re)) return from_context(n, ctx_of(std::stoi(mt[1]), req.m, Flavor::Finite, false));
  if (n == "vN") return from_context(n, ctx_of(need_n(req, 1), req.m, Flavor::Finite, false));
  if (std::regex_match(n, mt, w_re)) {
    int N = std::stoi(mt[1]);
    if (N < 2) throw std::invalid_argument("W_N needs N >= 2");
    return from_context(n, ctx_of(N, req.m, Flavor::Finite, true));
  }
  if (n == "wN") return from_context(n, ctx_of(need_n(req, 2), req.m, Flavor::Finite, true));
  if (std::regex_match(n, mt, vinf_re)) {
    int N = mt[1] == "N" ? need_n(req, 1) : std::stoi(mt[1]);
    return from_context(n, ctx_of(N, req.m, Flavor::Infinite, false));
  }
  if (n == "kp") return from_context(n, ctx_of(1, 1, Flavor::Infinite, true));
  if (std::regex_match(n, mt, mat_re)) {
    bool reduced = mt[1] == "w";
    return from_context(n, ctx_of(std::stoi(mt[2]), std::stoi(mt[3]), Flavor::Finite, reduced));
  }
  if (std::regex_match(n, mt, gfz_re)) {
    int N = std::stoi(mt[1]);
    if (N < 1 || N > 63) throw std::invalid_argument("gfz(N) needs 1 <= N <= 63");
    NamedStructure s;
    s.name = n;
    s.first = gfz_symbolic(N);
    std::vector<std::vector<Rational>> id(static_cast<std::size_t>(N), std::vector<Rational>(static_cast<std::size_t>(N)));
    for (int i = 0; i < N; ++i) id[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    s.second = gfz_structure(N, id);
    s.namer = default_namer();
    return s;
  }
  if (n == "virasoro") {
    NamedStructure s;
    s.name = n;
    s.first = virasoro_structure(true);
    s.second = constant_lambda_structure();
    s.namer = Namer{[](VarKey g, bool latex) { return g.is_param() ? default_namer()(g, latex) : std::string("u"); }};
    return s;
  }
  if (n == "broken-demo") {
    NamedStructure s;
    s.name = n;
    s.first = broken_demo_structure();
    s.namer = Namer{[](VarKey g, bool latex) { return g.is_param() ? default_namer()(g, latex) : std::string("u"); }};
    return s;
  }
  throw std::invalid_argument("unknown structure '" + n + "'");
}

}  // namespace agdcas
