#include "agdcas/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace agdcas {

Format parse_format(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "latex") return Format::Latex;
  if (s == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + s + "' (expected text, latex or json)");
}

// ---------------------------------------------------------------- small pieces

namespace {

const char* const kSub[] = {"₀", "₁", "₂", "₃", "₄", "₅", "₆", "₇", "₈", "₉"};
const char* const kSup[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
const char* const kMinus = "−";

std::string digits_with(long n, const char* const table[], const char* minus) {
  std::string s = std::to_string(n), out;
  for (char ch : s) out += ch == '-' ? std::string(minus) : std::string(table[ch - '0']);
  return out;
}

std::string sub(long n) { return digits_with(n, kSub, "₋"); }
std::string sup(long n) { return digits_with(n, kSup, "⁻"); }

bool ends_with_subscript(const std::string& s) {
  for (const char* d : kSub)
    if (s.size() >= 3 && s.compare(s.size() - 3, 3, d) == 0) return true;
  return s.size() >= 3 && s.compare(s.size() - 3, 3, "₋") == 0;
}

std::string ab_text(VarKey g) { return sub(g.a()) + sub(g.b()); }

std::string plain_name(const std::string& letter, VarKey g, bool latex, bool show_ab) {
  if (latex) {
    std::string s = letter + "_{" + std::to_string(g.index());
    if (show_ab) s += "," + std::to_string(g.a()) + std::to_string(g.b());
    return s + "}";
  }
  std::string s = letter + sub(g.index());
  if (show_ab) s += "," + ab_text(g);
  return s;
}

std::string param_name(VarKey g, bool latex) {
  switch (g.index()) {
    case 0:
      return "c";
    case 1:
      return "t";
    case 2:
      return latex ? "s_{" + std::to_string(g.a()) + std::to_string(g.b()) + "}" : "s" + ab_text(g);
    default:
      return latex ? "p_{" + std::to_string(g.index()) + "}" : "p" + sub(g.index());
  }
}

std::string family_letter(Family f) {
  switch (f) {
    case Family::U:
      return "u";
    case Family::V:
      return "v";
    default: {
      int k = static_cast<int>(f) - static_cast<int>(Family::Factor0);
      return std::string(1, static_cast<char>('a' + k));
    }
  }
}

Namer generic_namer(bool always_ab) {
  return Namer{[always_ab](VarKey g, bool latex) -> std::string {
    g = g.generator();
    if (g.is_param()) return param_name(g, latex);
    bool ab = always_ab || g.a() != 1 || g.b() != 1;
    return plain_name(family_letter(g.family()), g, latex, ab);
  }};
}

}  // namespace

Namer default_namer() { return generic_namer(false); }

Namer namer_for(const AdlerContext& ctx) {
  Namer base = generic_namer(ctx.m > 1);
  if (ctx.m == 1 && ctx.reduced && ctx.flavor == Flavor::Finite && (ctx.N == 2 || ctx.N == 3)) {
    const int n = ctx.N;
    const Family fam = ctx.family;
    return Namer{[base, n, fam](VarKey g, bool latex) -> std::string {
      g = g.generator();
      if (g.family() == fam && g.a() == 1 && g.b() == 1) {
        if (n == 2 && g.index() == -1) return "u";
        if (n == 3 && g.index() == -2) return "u";
        if (n == 3 && g.index() == -1) return "v";
      }
      return base(g, latex);
    }};
  }
  return base;
}

Namer namer_for_gfz(int n, bool reduced_pair) {
  Namer base = default_namer();
  if (n == 2 && reduced_pair)
    return Namer{[base](VarKey g, bool latex) -> std::string {
      g = g.generator();
      if (g.family() == Family::V && g.index() == 1) return "v";
      return base(g, latex);
    }};
  return base;
}

std::string rational_text(const Rational& q) {
  static const std::map<std::pair<long, long>, const char*> vulgar = {
      {{1, 2}, "½"}, {{1, 3}, "⅓"}, {{2, 3}, "⅔"}, {{1, 4}, "¼"}, {{3, 4}, "¾"}, {{1, 5}, "⅕"},
      {{2, 5}, "⅖"}, {{3, 5}, "⅗"}, {{4, 5}, "⅘"}, {{1, 6}, "⅙"}, {{5, 6}, "⅚"}, {{1, 8}, "⅛"},
      {{3, 8}, "⅜"}, {{5, 8}, "⅝"}, {{7, 8}, "⅞"}};
  std::string sign = sgn(q) < 0 ? kMinus : "";
  Rational a = abs(q);
  if (a.get_den() == 1) return sign + a.get_num().get_str();
  if (a.get_num().fits_slong_p() && a.get_den().fits_slong_p()) {
    auto it = vulgar.find({a.get_num().get_si(), a.get_den().get_si()});
    if (it != vulgar.end()) return sign + it->second;
  }
  return sign + a.get_num().get_str() + "/" + a.get_den().get_str();
}

std::string rational_latex(const Rational& q) {
  std::string sign = sgn(q) < 0 ? "-" : "";
  Rational a = abs(q);
  if (a.get_den() == 1) return sign + a.get_num().get_str();
  std::string p = a.get_num().get_str(), d = a.get_den().get_str();
  if (p.size() == 1 && d.size() == 1) return sign + "\\frac" + p + d;
  return sign + "\\frac{" + p + "}{" + d + "}";
}

std::string var_text(VarKey v, const Namer& namer) {
  std::string s = namer(v.generator(), false);
  int n = v.order();
  if (n == 1) return s + "′";
  if (n == 2) return s + "″";
  if (n == 3) return s + "‴";
  if (n > 3) return s + "⁽" + sup(n) + "⁾";
  return s;
}

std::string var_latex(VarKey v, const Namer& namer) {
  std::string s = namer(v.generator(), true);
  int n = v.order();
  if (n > 3) return s + "^{(" + std::to_string(n) + ")}";
  return s + std::string(static_cast<std::size_t>(n), '\'');
}

// ---------------------------------------------------------------- DiffPoly

namespace {

std::string mono_text(const Monomial& m, const Namer& namer) {
  std::string s;
  for (const auto& f : m) {
    std::string v = var_text(f.var, namer);
    if (f.exp > 1) {
      if (f.var.order() > 3) v = "(" + v + ")";
      v += sup(f.exp);
    }
    s += v;
  }
  return s;
}

std::string mono_latex(const Monomial& m, const Namer& namer) {
  std::string s;
  for (const auto& f : m) {
    std::string v = var_latex(f.var, namer);
    if (f.exp > 1) {
      if (f.var.order() > 3) v = "(" + v + ")";
      v += "^" + (f.exp < 10 ? std::to_string(f.exp) : "{" + std::to_string(f.exp) + "}");
    }
    s += v;
  }
  return s;
}

// |c| as a multiplier in front of `rest` (which may be empty).
std::string coeff_prefix_text(const Rational& c, const std::string& rest) {
  Rational a = abs(c);
  if (rest.empty()) return rational_text(a);
  if (a == 1) return "";
  std::string r = rational_text(a);
  if (a.get_den() != 1 && r.find('/') != std::string::npos) return "(" + r + ")";
  return r;
}

std::string coeff_prefix_latex(const Rational& c, const std::string& rest) {
  Rational a = abs(c);
  if (rest.empty()) return rational_latex(a);
  if (a == 1) return "";
  return rational_latex(a);
}

struct Piece {
  bool negative;
  std::string body;
};

std::string join_text(const std::vector<Piece>& pieces) {
  if (pieces.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (i == 0)
      s += pieces[i].negative ? kMinus : "";
    else
      s += pieces[i].negative ? std::string(" ") + kMinus + " " : " + ";
    s += pieces[i].body;
  }
  return s;
}

std::string join_latex(const std::vector<Piece>& pieces) {
  if (pieces.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].negative)
      s += "-";
    else if (i > 0)
      s += "+";
    s += pieces[i].body;
  }
  return s;
}

std::string text_term(const Rational& c, const std::string& mono, const std::string& tail) {
  std::string rest = mono + tail;
  std::string pre = coeff_prefix_text(c, rest);
  std::string s = pre + mono;
  if (!tail.empty() && ends_with_subscript(s)) s += " ";
  return s + tail;
}

std::string latex_term(const Rational& c, const std::string& mono, const std::string& tail) {
  std::string rest = mono + tail;
  return coeff_prefix_latex(c, rest) + mono + tail;
}

// Display order: lower polynomial degree first, then higher derivative weight.
std::vector<const DiffPoly::Term*> display_order(const DiffPoly& f) {
  std::vector<const DiffPoly::Term*> out;
  for (const auto& t : f.terms()) out.push_back(&t);
  auto key = [](const DiffPoly::Term* t) {
    int deg = 0, weight = 0;
    for (const auto& fac : t->mono) {
      if (fac.var.is_param()) continue;
      deg += static_cast<int>(fac.exp);
      weight += fac.var.order() * static_cast<int>(fac.exp);
    }
    return std::make_pair(deg, -weight);
  };
  std::stable_sort(out.begin(), out.end(), [&](auto* x, auto* y) { return key(x) < key(y); });
  return out;
}

Rational content_of(const DiffPoly& f) {
  mpz_class num = 0, den = 1;
  for (const auto& t : f.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num().get_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den().get_mpz_t());
  }
  return Rational(num, den);
}

}  // namespace

std::string render_text(const DiffPoly& f, const Namer& namer) {
  std::vector<Piece> pieces;
  for (const auto* t : display_order(f))
    pieces.push_back({sgn(t->coeff) < 0, text_term(t->coeff, mono_text(t->mono, namer), "")});
  return join_text(pieces);
}

std::string render_latex(const DiffPoly& f, const Namer& namer) {
  if (f.size() > 1) {
    Rational content = content_of(f);
    if (content.get_den() != 1) {
      bool neg = sgn(display_order(f).front()->coeff) < 0;
      if (neg) content = -content;
      DiffPoly inner = f * Rational(1 / content);
      return rational_latex(content) + "(" + render_latex(inner, namer) + ")";
    }
  }
  std::vector<Piece> pieces;
  for (const auto* t : display_order(f))
    pieces.push_back({sgn(t->coeff) < 0, latex_term(t->coeff, mono_latex(t->mono, namer), "")});
  return join_latex(pieces);
}

// ---------------------------------------------------------------- λ-values

namespace {

struct Style {
  bool latex;
  std::string lambda, partial;
  std::string power(const std::string& base, int p) const {
    if (p == 0) return "";
    if (p == 1) return base;
    if (latex) return base + "^" + (p < 10 ? std::to_string(p) : "{" + std::to_string(p) + "}");
    return base + sup(p);
  }
};

// Terms linear in one generator are grouped as (P(λ,∂)) g, e.g. (2λ+∂)u.
std::string render_lambda_value(const LambdaValue& v, const Namer& namer, const Style& st) {
  std::map<VarKey, std::map<std::pair<int, int>, Rational>> groups;  // g -> (λ power, ∂ power) -> coeff
  struct Other {
    int p;
    Monomial mono;
    Rational c;
  };
  std::vector<Other> others;
  for (int p = 0; p <= v.local.degree(); ++p)
    for (const auto& t : v.local.coeff(p).terms()) {
      if (t.mono.size() == 1 && t.mono[0].exp == 1 && !t.mono[0].var.is_param())
        groups[t.mono[0].var.generator()][{p, t.mono[0].var.order()}] += t.coeff;
      else
        others.push_back({p, t.mono, t.coeff});
    }
  auto mono_str = [&](const Monomial& m) { return st.latex ? mono_latex(m, namer) : mono_text(m, namer); };
  auto term = [&](const Rational& c, const std::string& mono, const std::string& tail) {
    return st.latex ? latex_term(c, mono, tail) : text_term(c, mono, tail);
  };
  std::vector<Piece> pieces;
  for (const auto& [g, entries] : groups) {
    if (entries.size() == 1) {
      const auto& [pn, c] = *entries.begin();
      others.push_back({pn.first, Monomial{Factor{g.with_order(pn.second), 1}}, c});
      continue;
    }
    std::vector<std::pair<std::pair<int, int>, Rational>> ordered(entries.begin(), entries.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
      int dx = x.first.first + x.first.second, dy = y.first.first + y.first.second;
      if (dx != dy) return dx > dy;
      return x.first.first > y.first.first;
    });
    bool neg = sgn(ordered.front().second) < 0;
    std::vector<Piece> inner;
    for (const auto& [pn, c0] : ordered) {
      Rational c = neg ? Rational(-c0) : c0;
      std::string body = st.power(st.lambda, pn.first) + st.power(st.partial, pn.second);
      inner.push_back({sgn(c) < 0, term(c, "", body)});
    }
    std::string poly = st.latex ? join_latex(inner) : join_text(inner);
    if (!st.latex) {
      // join_text spaces the operators; the operator polynomial reads better tight.
      std::string tight;
      for (std::size_t i = 0; i < inner.size(); ++i) {
        if (i == 0)
          tight += inner[i].negative ? kMinus : "";
        else
          tight += inner[i].negative ? kMinus : "+";
        tight += inner[i].body;
      }
      poly = tight;
    }
    pieces.push_back({neg, "(" + poly + ")" + namer(g, st.latex)});
  }
  std::stable_sort(others.begin(), others.end(), [](const Other& x, const Other& y) { return x.p > y.p; });
  for (const auto& o : others) pieces.push_back({sgn(o.c) < 0, term(o.c, mono_str(o.mono), st.power(st.lambda, o.p))});
  for (const auto& [pq, c] : v.nonlocal) {
    std::string inv = st.latex ? "(\\lambda+\\partial)^{-1}" : "(λ+∂)⁻¹";
    std::string p = mono_str(pq.first), q = mono_str(pq.second);
    pieces.push_back({sgn(c) < 0, term(c, p, inv + q)});
  }
  return st.latex ? join_latex(pieces) : join_text(pieces);
}

}  // namespace

std::string render_text(const LambdaValue& v, const Namer& namer) {
  return render_lambda_value(v, namer, Style{false, "λ", "∂"});
}

std::string render_latex(const LambdaValue& v, const Namer& namer) {
  return render_lambda_value(v, namer, Style{true, "\\lambda ", "\\partial "});
}

std::string render_text(const LambdaMuPoly& v, const Namer& namer) {
  if (v.is_zero()) return "0";
  std::vector<std::string> parts;
  for (const auto& [pq, c] : v.terms()) {
    std::string s = "(" + render_text(c, namer) + ")";
    if (pq.first) s += pq.first == 1 ? "λ" : "λ" + sup(pq.first);
    if (pq.second) s += pq.second == 1 ? "μ" : "μ" + sup(pq.second);
    parts.push_back(s);
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
  return out;
}

std::string render_text(const PsiDO& a, const Namer& namer) {
  std::vector<std::string> parts;
  for (auto it = a.coeffs().rbegin(); it != a.coeffs().rend(); ++it) {
    const Matrix& c = it->second;
    std::string coeff;
    if (c.size() == 1) {
      coeff = "(" + render_text(c(0, 0), namer) + ")";
    } else {
      coeff = "[";
      for (int r = 0; r < c.size(); ++r) {
        coeff += r ? "; " : "";
        for (int s = 0; s < c.size(); ++s) coeff += (s ? ", " : "") + render_text(c(r, s), namer);
      }
      coeff += "]";
    }
    parts.push_back(coeff + (it->first == 0 ? "" : it->first == 1 ? "∂" : "∂" + sup(it->first)));
  }
  std::string out = parts.empty() ? "0" : "";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
  if (!a.exact()) out += " + O(∂" + sup(a.floor() - 1) + ")";
  return out;
}

// ---------------------------------------------------------------- JSON

json to_json(const DiffPoly& f) {
  json out = json::array();
  for (const auto& t : f.terms()) {
    json vars = json::array();
    for (const auto& fac : t.mono) {
      json v = {fac.var.index(), fac.var.a(), fac.var.b(), fac.var.order(), fac.exp};
      if (fac.var.family() != Family::U) v.push_back(static_cast<int>(fac.var.family()));
      vars.push_back(v);
    }
    out.push_back({{"coeff", t.coeff.get_str()}, {"vars", vars}});
  }
  return out;
}

DiffPoly diffpoly_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("DiffPoly JSON must be an array");
  DiffPoly r;
  for (const auto& t : j) {
    DiffPoly term(parse_rational(t.at("coeff").get<std::string>()));
    for (const auto& v : t.at("vars")) {
      if (v.size() != 5 && v.size() != 6) throw std::invalid_argument("DiffPoly JSON variable needs 5 or 6 entries");
      Family fam = v.size() == 6 ? static_cast<Family>(v[5].get<int>()) : Family::U;
      VarKey key = VarKey::make(fam, v[0].get<int>(), v[1].get<int>(), v[2].get<int>(), v[3].get<int>());
      term *= DiffPoly::var(key, v[4].get<std::uint32_t>());
    }
    r += term;
  }
  return r;
}

namespace {

json mono_json(const Monomial& m) {
  DiffPoly::Term t{m, Rational(1)};
  return to_json(DiffPoly::from_terms({t}))[0]["vars"];
}

DiffPoly mono_from_json(const json& vars) { return diffpoly_from_json(json::array({{{"coeff", "1"}, {"vars", vars}}})); }

}  // namespace

json to_json(const LambdaValue& v) {
  json local = json::object();
  for (int p = 0; p <= v.local.degree(); ++p)
    if (!v.local.coeff(p).is_zero()) local[std::to_string(p)] = to_json(v.local.coeff(p));
  json nonlocal = json::array();
  for (const auto& [pq, c] : v.nonlocal)
    nonlocal.push_back({{"coeff", c.get_str()}, {"P", mono_json(pq.first)}, {"Q", mono_json(pq.second)}});
  return {{"local", local}, {"nonlocal", nonlocal}};
}

LambdaValue lambda_value_from_json(const json& j) {
  LambdaValue v;
  for (const auto& [k, c] : j.at("local").items()) v.local.add_to(std::stoi(k), diffpoly_from_json(c));
  for (const auto& t : j.at("nonlocal"))
    v.add_nonlocal(mono_from_json(t.at("P")), mono_from_json(t.at("Q")), parse_rational(t.at("coeff").get<std::string>()));
  return v;
}

json to_json(const LambdaMuPoly& v) {
  json out = json::array();
  for (const auto& [pq, c] : v.terms()) out.push_back({{"lambda", pq.first}, {"mu", pq.second}, {"coeff", to_json(c)}});
  return out;
}

LambdaMuPoly lambda_mu_from_json(const json& j) {
  LambdaMuPoly r;
  for (const auto& t : j) r.add_to(t.at("lambda").get<int>(), t.at("mu").get<int>(), diffpoly_from_json(t.at("coeff")));
  return r;
}

json to_json(const PsiDO& a) {
  json coeffs = json::object();
  for (const auto& [e, c] : a.coeffs()) {
    json rows = json::array();
    for (int r = 0; r < c.size(); ++r) {
      json row = json::array();
      for (int s = 0; s < c.size(); ++s) row.push_back(to_json(c(r, s)));
      rows.push_back(row);
    }
    coeffs[std::to_string(e)] = rows;
  }
  json floor = a.exact() ? json(nullptr) : json(a.floor());
  return {{"m", a.m()}, {"order", a.is_zero() ? json(nullptr) : json(a.order())}, {"floor", floor}, {"coeffs", coeffs}};
}

PsiDO psido_from_json(const json& j) {
  int m = j.at("m").get<int>();
  PsiDO a(m);
  for (const auto& [k, rows] : j.at("coeffs").items()) {
    Matrix c(m);
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s) c(r, s) = diffpoly_from_json(rows.at(r).at(s));
    a.add_to(std::stoi(k), c);
  }
  if (!j.at("floor").is_null()) a.set_floor(j.at("floor").get<int>());
  return a;
}

json to_json(const FlowEquation& fe, const Namer& namer) {
  json flows = json::object();
  for (const auto& [g, f] : fe.rhs) flows[namer(g, true)] = to_json(f);
  return {{"k", fe.k}, {"flows", flows}};
}

std::string render_flow(const FlowEquation& fe, const Namer& namer, Format fmt) {
  if (fmt == Format::Json) return to_json(fe, namer).dump(2);
  std::ostringstream os;
  for (const auto& [g, f] : fe.rhs) {
    if (fmt == Format::Latex)
      os << "\\frac{d" << namer(g, true) << "}{dt_{" << fe.k << "}} = " << render_latex(f, namer) << "\n";
    else
      os << "d" << namer(g, false) << "/dt" << sub(fe.k) << " = " << render_text(f, namer) << "\n";
  }
  return os.str();
}

}  // namespace agdcas
