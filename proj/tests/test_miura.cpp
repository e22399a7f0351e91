#include "doctest.h"
#include "agdcas/miura.hpp"
#include "helpers.hpp"

using namespace th;

namespace {
bool hom(const MiuraMap& mu) { return miura_check_all(mu, 1).empty(); }
}  // namespace

TEST_CASE("Miura images") {
  MiuraMap m2 = miura_image(2);
  CHECK(m2.image.at(VarKey::u(-2)) == V(1) + V(2));
  CHECK(m2.image.at(VarKey::u(-1)) == V(1, 1) + V(1) * V(2));
  MiuraMap m3 = miura_image(3);
  CHECK(m3.image.at(VarKey::u(-3)) == V(1) + V(2) + V(3));
  CHECK(m3.image.at(VarKey::u(-1)) == V(1, 2) + total_derivative(V(2) * V(1)) + V(3) * V(1, 1) + V(3) * V(2) * V(1));
}

TEST_CASE("Miura map as a differential-algebra morphism") {
  MiuraMap m2 = miura_image(2);
  DiffPoly f = U(-1, 1) * U(-2);
  DiffPoly img = m2.apply(f);
  CHECK(img == total_derivative(m2.image.at(VarKey::u(-1))) * m2.image.at(VarKey::u(-2)));
  CHECK(m2.apply(f + U(-2, 2)) == img + total_derivative(m2.image.at(VarKey::u(-2)), 2));
}

TEST_CASE("the Miura map is a Poisson homomorphism for S = −𝟙 only") {
  CHECK(hom(miura_image(2)));
  CHECK(hom(miura_image(3)));
  CHECK(miura_check_all(miura_image(2, +1), 1).size() == 4);
}

TEST_CASE("the reduced Miura map") {
  MiuraMap r2 = dirac_miura(2);
  CHECK(r2.image.at(VarKey::u(-1)) == V(1, 1) - V(1) * V(1));
  CHECK(r2.target.bracket(VarKey::make(Family::V, 1), VarKey::make(Family::V, 1)) ==
        LambdaValue(lam({{1, DiffPoly(q(-1, 2))}})));
  CHECK(hom(r2));
  for (int n : {2, 3}) {
    MiuraMap r = dirac_miura(n);
    Structure closed = dirac_gfz_closed_form(n);
    for (VarKey a : r.target.generators())
      for (VarKey b : r.target.generators()) CHECK(r.target.bracket(a, b) == closed.bracket(a, b));
    CHECK(hom(r));
  }
}

TEST_CASE("generalized Miura maps") {
  MiuraMap g11 = general_miura(1, 1);
  GeneratorRule rename = [](VarKey g) -> std::optional<DiffPoly> {
    if (g.family() == factor_family(0)) return V(2);
    if (g.family() == factor_family(1)) return V(1);
    return std::nullopt;
  };
  MiuraMap m2 = miura_image(2);
  for (const auto& [g, f] : m2.image) CHECK(substitute(g11.image.at(g), rename) == f);
  CHECK(hom(g11));
  CHECK(hom(general_miura(1, 2)));
  CHECK(hom(general_miura(2, 1)));

  AdlerContext one = ctx(1);
  MiuraMap g111 = general_miura({one, one, one});
  CHECK(hom(g111));
  CHECK(g111.image.at(VarKey::u(-3)) == F(0, -1) + F(1, -1) + F(2, -1));

  // (A1∘A2)∘A3: feed the (1,1) map into the first factor of the (2,1) map
  MiuraMap g21 = general_miura({ctx(2), one});
  GeneratorRule nest = [&](VarKey g) -> std::optional<DiffPoly> {
    if (g.family() == factor_family(0)) return g11.image.at(VarKey::u(g.index()));
    if (g.family() == factor_family(1)) return F(2, g.index());
    return std::nullopt;
  };
  for (const auto& [g, f] : g111.image) CHECK(substitute(g21.image.at(g), nest) == f);
}

TEST_CASE("matrix Miura map") {
  MiuraMap mm = matrix_miura(2, 2);
  CHECK(mm.source.generators().size() == 8);
  CHECK(mm.target.generators().size() == 8);
  CHECK(hom(mm));
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(miura_image(0), std::invalid_argument);
  CHECK_THROWS_AS(miura_image(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(dirac_miura(1), std::invalid_argument);
  CHECK_THROWS_AS(general_miura(std::vector<AdlerContext>{}), std::invalid_argument);
}
