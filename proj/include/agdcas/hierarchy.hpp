#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agdcas/agd.hpp"

namespace agdcas {

struct HierarchySpec {
  AdlerContext ctx;
  int k_max = 5;
  std::optional<int> floor;     // overrides the per-k default floor
  int convergence_margin = 4;
  bool stability_recheck = true;
  bool cross_check_routes = true;  // compare λ=0 bracket route with H(∂)·varder route

  // Default floor −(k+N+2); the infinite flavor also accounts for the generator window.
  TruncationPolicy policy_for(int k) const;
};

struct FlowEquation {
  int k = 0;
  std::map<VarKey, DiffPoly> rhs;
  // Flow of u_{-N,ab} produced by the Lax commutator on a reduced context
  // (must vanish); empty for other routes.
  std::map<VarKey, DiffPoly> constraint_flow;
  bool operator==(const FlowEquation& o) const { return k == o.k && rhs == o.rhs; }
};

enum class BracketChoice { H, K, HD };

// Structures shared across hierarchy computations (cached per context).
Structure cached_structure(const AdlerContext& ctx, BracketChoice which);

DiffPoly density(const HierarchySpec& spec, int k);
DiffPoly density_varder(const HierarchySpec& spec, int k, VarKey gen);
FlowEquation lax_flow(const HierarchySpec& spec, int k);
FlowEquation bracket_flow(const HierarchySpec& spec, BracketChoice which, int k);
std::map<VarKey, DiffPoly> lenard_residual(const HierarchySpec& spec, int k);

struct InvolutionResult {
  LocalFunctional first_structure;   // H (or H^D on reduced contexts)
  LocalFunctional second_structure;  // K
  bool zero() const { return first_structure.is_zero() && second_structure.is_zero(); }
};
InvolutionResult involution_check(const HierarchySpec& spec, int k1, int k2);

// B*(∂) applied to the variational derivatives of h_k (finite matrix context, U_{-N} kept).
Matrix b_star_annihilation(const HierarchySpec& spec, int k);

// Flows d/dt_k as derivations of the differential algebra.
class FlowDerivation {
 public:
  explicit FlowDerivation(std::map<VarKey, DiffPoly> on_generators) : gen_(std::move(on_generators)) {}
  DiffPoly operator()(const DiffPoly& f) const;

 private:
  std::map<VarKey, DiffPoly> gen_;
};

struct PdeCheck {
  std::string name;
  std::vector<std::pair<std::string, DiffPoly>> residuals;  // label -> residual (zero when the identity holds)
  std::vector<std::pair<std::string, DiffPoly>> diagnostics;  // related variants, informational only
  bool zero() const;
};
// name ∈ {kp, boussinesq, matrix_kp}
PdeCheck verify_reduced_pde(const std::string& name);

// Named hierarchy contexts: kdv (W_2), boussinesq (W_3), kp (W_1^inf),
// matrix_kdv (W_{2,2}), matrix_kp (W_{1,2}^inf), v2 (V_2).
HierarchySpec named_hierarchy(const std::string& name);

}  // namespace agdcas
