#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agdcas/render.hpp"

namespace agdcas {

// A structure addressable by name from the command line.
//   v1 v2 v3 vN          V_N (AGD pair H, K); vN takes N from the request
//   vN-inf, kp           V_N^∞ and W_1^∞ (generator window `window`)
//   w2 w3 wN             W_N = Dirac reduction (H^D, K)
//   v-mat(N,m) w-mat(N,m)
//   gfz(N)               {v_i λ v_j} = s_ij λ, paired with S = 𝟙
//   virasoro             (2λ+∂)u + cλ³, paired with {u λ u} = λ
//   broken-demo          a skew-adjoint table that fails Jacobi
struct NamedStructure {
  std::string name;
  std::optional<AdlerContext> ctx;
  Structure first;                  // H, or H^D on W algebras
  std::optional<Structure> second;  // K or the pencil partner
  Namer namer;

  const std::vector<VarKey>& generators() const { return first.generators(); }
  Structure pencil() const;  // first − c·second
};

struct StructureRequest {
  std::string name;
  int N = 0;  // used by vN, vN-inf, wN
  int m = 1;
  int window = 3;
};

// Throws std::invalid_argument on an unknown or malformed name.
NamedStructure resolve_structure(const StructureRequest& req);
std::vector<std::string> structure_names();

}  // namespace agdcas
