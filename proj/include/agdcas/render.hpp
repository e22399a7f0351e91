#pragma once

#include <functional>
#include <string>

#include "agdcas/hierarchy.hpp"
#include "json.hpp"

namespace agdcas {

using json = nlohmann::json;

enum class Format { Text, Latex, Json };
Format parse_format(const std::string& s);  // "text", "latex" or "json"

// Display name of a generator (derivative order stripped) in a given style.
struct Namer {
  std::function<std::string(VarKey gen, bool latex)> name;
  std::string operator()(VarKey gen, bool latex) const { return name(gen, latex); }
};
Namer default_namer();
// Conventional short names: W_2 → u; W_3 → u, v; reduced Miura
// N = 2 → v; everything else falls back to default_namer().
Namer namer_for(const AdlerContext& ctx);
Namer namer_for_gfz(int n, bool reduced_pair);

std::string rational_text(const Rational& q);
std::string rational_latex(const Rational& q);

std::string var_text(VarKey v, const Namer& namer);
std::string var_latex(VarKey v, const Namer& namer);

std::string render_text(const DiffPoly& f, const Namer& namer = default_namer());
std::string render_latex(const DiffPoly& f, const Namer& namer = default_namer());
std::string render_text(const LambdaValue& v, const Namer& namer = default_namer());
std::string render_latex(const LambdaValue& v, const Namer& namer = default_namer());
std::string render_text(const LambdaMuPoly& v, const Namer& namer = default_namer());
std::string render_text(const PsiDO& a, const Namer& namer = default_namer());

json to_json(const DiffPoly& f);
DiffPoly diffpoly_from_json(const json& j);
json to_json(const LambdaValue& v);
LambdaValue lambda_value_from_json(const json& j);
json to_json(const LambdaMuPoly& v);
LambdaMuPoly lambda_mu_from_json(const json& j);
json to_json(const PsiDO& a);
PsiDO psido_from_json(const json& j);
json to_json(const FlowEquation& fe, const Namer& namer);

// du/dt_k = ... in the requested style (one line per generator).
std::string render_flow(const FlowEquation& fe, const Namer& namer, Format fmt);

}  // namespace agdcas
