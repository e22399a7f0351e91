#pragma once

#include <map>
#include <string>
#include <vector>

#include "agdcas/agd.hpp"

namespace agdcas {

// A differential-algebra map from the generators of a source structure into
// differential polynomials over the generators of a target structure.
struct MiuraMap {
  std::string name;
  Structure source;
  Structure target;
  std::map<VarKey, DiffPoly> image;

  DiffPoly apply(const DiffPoly& f) const;
  LambdaValue apply(const LambdaValue& v) const;  // local values only
};

// (∂+v_N)∘…∘(∂+v_1) into GFZ_N with S = sign·𝟙 (sign = −1 is the homomorphism).
MiuraMap miura_image(int n, int sign = -1);
// Reduction of miura_image: v_N = −(v_1+…+v_{N−1}) and u_{−N} = 0.  The target
// is the Dirac reduction of GFZ_N(−𝟙) by v_1+…+v_N, computed generically.
MiuraMap dirac_miura(int n);
// GFZ table with S_ij = 1/N − δ_ij on v_1..v_{N−1} (closed form of the above target).
Structure dirac_gfz_closed_form(int n);

// Generalized Miura map for a product A_1∘A_2∘…∘A_r of generic operators.
// Factor k lives in family Factor_k with the H structure of its own context;
// the target is their tensor product.  The source is H of V_{ΣN_k, m}.
MiuraMap general_miura(const std::vector<AdlerContext>& factors, const TruncationPolicy& policy = {});
MiuraMap general_miura(int order_a, int order_b);
// (∂+V_N)∘…∘(∂+V_1) with m×m matrices V_k, each factor a V_{1,m} algebra.
MiuraMap matrix_miura(int n, int m);

// master_bracket in the target of (μ(g_i), μ(g_j)) minus μ({g_i λ g_j}_source).
LambdaValue miura_hom_residual(const MiuraMap& mu, VarKey gi, VarKey gj);

struct MiuraWitness {
  VarKey gi, gj;
  LambdaValue residual;
};
// All source generator pairs; returns the nonzero residuals.
std::vector<MiuraWitness> miura_check_all(const MiuraMap& mu, int jobs = 1);

}  // namespace agdcas
