#include "doctest.h"
#include "helpers.hpp"

using namespace th;

namespace {

PsiDO scalar_op(std::initializer_list<std::pair<int, DiffPoly>> c) {
  std::map<int, DiffPoly> m;
  for (const auto& [e, p] : c) m[e] = p;
  return PsiDO::scalar(m);
}

const DiffPoly& co(const PsiDO& a, int e) { return a.coeff(e)(0, 0); }

}  // namespace

TEST_CASE("composition rule") {
  TruncationPolicy pol{-6, 4};
  PsiDO d = PsiDO::d_power(1, 1), u = scalar_op({{0, U(-1)}});
  PsiDO du = compose(d, u, pol);
  CHECK(du.exact());
  CHECK(co(du, 1) == U(-1));
  CHECK(co(du, 0) == U(-1, 1));
  // ∂^{-1}∘u = Σ_k (−1)^k u^{(k)} ∂^{-1-k}
  PsiDO dinv_u = compose(PsiDO::d_power(1, -1), u, pol);
  CHECK(dinv_u.floor() == -6);
  for (int k = 0; k <= 5; ++k) CHECK(co(dinv_u, -1 - k) == U(-1, k) * q(k % 2 ? -1 : 1));
  CHECK_THROWS_AS(dinv_u.coeff(-7), std::out_of_range);
}

TEST_CASE("matrix composition keeps the factor order") {
  TruncationPolicy pol;
  Matrix a(2), b(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      a(i, j) = U(-1, 0, i + 1, j + 1);
      b(i, j) = V(1 + 2 * i + j);
    }
  PsiDO A = PsiDO::monomial(a, 1), B = PsiDO::monomial(b, 0);
  PsiDO ab = compose(A, B, pol);
  CHECK(ab.coeff(1) == a * b);
  CHECK(ab.coeff(0) == a * b.derivative());
  CHECK_FALSE(a * b == b * a);
}

TEST_CASE("root of the KdV operator: known series coefficients") {
  TruncationPolicy pol{-6, 4};
  PsiDO l = scalar_op({{2, DiffPoly(1)}, {0, U(-1)}});
  PsiDO r = nth_root(l, 2, pol);
  CHECK(co(r, 1) == 1);
  CHECK(co(r, 0).is_zero());
  CHECK(co(r, -1) == U(-1) * q(1, 2));
  CHECK(co(r, -2) == U(-1, 1) * q(-1, 4));
  CHECK(co(r, -3) == (U(-1, 2) - U(-1) * U(-1)) * q(1, 8));
  CHECK(co(r, -4) == (U(-1, 3) - U(-1) * U(-1, 1) * q(6)) * q(-1, 16));
  CHECK(agree_above(compose(r, r, pol), l, -5));
  PsiDO l32 = frac_power(l, 3, 2, pol);
  CHECK(co(l32, 3) == 1);
  CHECK(co(l32, 1) == U(-1) * q(3, 2));
  CHECK(co(l32, 0) == U(-1, 1) * q(3, 4));
  CHECK(co(l32, -1) == (U(-1) * U(-1) * q(3) + U(-1, 2)) * q(1, 8));
}

TEST_CASE("cube root and two-thirds power of the Boussinesq operator") {
  TruncationPolicy pol{-5, 4};
  PsiDO l = scalar_op({{3, DiffPoly(1)}, {1, U(-2)}, {0, U(-1)}});
  PsiDO r = nth_root(l, 3, pol);
  CHECK(co(r, -1) == U(-2) * q(1, 3));
  CHECK(co(r, -2) == (U(-2, 1) - U(-1)) * q(-1, 3));
  CHECK(co(r, -3) == (U(-2, 2) * q(2) - U(-1, 1) * q(3) - U(-2) * U(-2)) * q(1, 9));
  PsiDO l23 = frac_power(l, 2, 3, pol);
  CHECK(co(l23, 2) == 1);
  CHECK(co(l23, 1).is_zero());
  CHECK(co(l23, 0) == U(-2) * q(2, 3));
  CHECK(co(l23, -1) == (U(-1) * q(2) - U(-2, 1)) * q(1, 3));
}

TEST_CASE("inverse, adjoint and the plus/minus split") {
  TruncationPolicy pol{-7, 4};
  PsiDO a = scalar_op({{1, DiffPoly(1)}, {0, U(-1)}});
  PsiDO inv = inverse(a, pol);
  CHECK(agree_above(compose(a, inv, pol), PsiDO::identity(1), -6));
  CHECK(agree_above(compose(inv, a, pol), PsiDO::identity(1), -6));
  // (u∂)* = −∂∘u = −u∂ − u′
  PsiDO ud = scalar_op({{1, U(-1)}});
  PsiDO adj = adjoint(ud, pol);
  CHECK(co(adj, 1) == -U(-1));
  CHECK(co(adj, 0) == -U(-1, 1));
  PsiDO mixed = scalar_op({{2, DiffPoly(1)}, {0, U(-1)}, {-1, U(-2)}, {-2, V(1)}});
  auto [plus, minus] = split_plus_minus(mixed);
  CHECK((plus + minus).coeffs() == mixed.coeffs());
  CHECK(co(plus, 0) == U(-1));
  CHECK(residue(mixed)(0, 0) == U(-2));
  CHECK(trace_residue(mixed) == U(-2));
  CHECK(inverse(PsiDO::d_power(1, 2), pol).coeffs().size() == 1);
}

TEST_CASE("PsiDO JSON round trip") {
  TruncationPolicy pol{-5, 4};
  PsiDO r = nth_root(scalar_op({{2, DiffPoly(1)}, {0, U(-1)}}), 2, pol);
  json j = to_json(r);
  CHECK(j["floor"] == r.floor());
  CHECK(j["order"] == 1);
  PsiDO back = psido_from_json(json::parse(j.dump()));
  CHECK(back.floor() == r.floor());
  CHECK(back.coeffs() == r.coeffs());
  PsiDO exact = scalar_op({{1, DiffPoly(1)}});
  CHECK(psido_from_json(to_json(exact)).exact());
}
