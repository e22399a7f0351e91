#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "agdcas/psido.hpp"
#include "agdcas/pva.hpp"

namespace agdcas {

enum class Flavor { Finite, Infinite };

// A generic monic operator L = ∂^N + Σ_i U_i ∂^{-i-1} with U_i = (u_{i,ab}).
// Finite flavor: i ∈ {-N..-1}.  Infinite flavor: i ≥ -N.  When `reduced`,
// U_{-N} = 0 and u_{-N,ab} is not a generator.
struct AdlerContext {
  int N = 2;
  int m = 1;
  Flavor flavor = Flavor::Finite;
  bool reduced = false;
  Family family = Family::U;
  int window = 3;  // infinite flavor: generators listed by generators() stop at index `window`

  // The coefficient u_{i,ab} with u_{-N-1} = δ_ab and the vanishing conventions applied.
  DiffPoly u(int i, int a, int b) const;
  bool is_generator(VarKey g) const;
  std::vector<VarKey> generators() const;
  // L as a pseudodifferential operator; infinite flavor is truncated at policy.floor.
  PsiDO L(const TruncationPolicy& policy = {}) const;
  std::string label() const;  // e.g. "V_2", "W_3", "V_{2,2}", "W_1^inf"
  AdlerContext unreduced() const {
    AdlerContext c = *this;
    c.reduced = false;
    return c;
  }
};

// ε_ij: +1 if both indices non-negative, −1 if both negative, 0 otherwise.
int epsilon(int i, int j);

// Closed-form table entries {u_{i,ab} λ u_{j,cd}}.
LambdaValue h_entry(const AdlerContext& ctx, VarKey gi, VarKey gj);
LambdaValue k_entry(const AdlerContext& ctx, VarKey gi, VarKey gj);
LambdaValue hd_entry(const AdlerContext& ctx, VarKey gi, VarKey gj);
// The scalar Dirac entries written with the single double sum (m = 1 only).
LambdaValue hd_entry_scalar_sum(const AdlerContext& ctx, VarKey gi, VarKey gj);

// The Adler map A(F) = (LF)_+ L − L (FL)_+ and its alternative form.
PsiDO adler_apply(const PsiDO& l, const PsiDO& f, const TruncationPolicy& policy);
PsiDO adler_apply_alt(const PsiDO& l, const PsiDO& f, const TruncationPolicy& policy);

// H entry for generators gi, gj applied to f, computed as the residue of the
// Adler map (independent of the closed-form tables).
DiffPoly oracle_entry(const AdlerContext& ctx, VarKey gi, VarKey gj, const DiffPoly& f);
// A local λ-polynomial applied to f: Σ h_p ∂^p f.
DiffPoly apply_to(const LambdaPoly& h, const DiffPoly& f);

Structure build_H(const AdlerContext& ctx, bool cross_check = false);
Structure build_K(const AdlerContext& ctx);
// Dirac reduction by the constraints u_{-N,ab}; `s` must be the H table of
// the unreduced context.  The result lives on the reduced context.
Structure dirac_reduce(const AdlerContext& ctx, const Structure& s);

// Dirac modification of S by constraints θ_α followed by the quotient map
// `quotient` onto the listed generators.  Uses inverse(C) under `policy`.
Structure generic_dirac(const Structure& s, const std::vector<DiffPoly>& constraints, const GeneratorRule& quotient,
                        const std::vector<VarKey>& new_generators, const std::string& name,
                        const TruncationPolicy& policy = {});

struct VirasoroReport {
  bool virasoro_shape = false;
  Rational central_charge;
  std::map<VarKey, Rational> weights;
  std::vector<std::string> diagnostics;
};
// T = tr U_{-N+1} on the reduced context; S is the Dirac-reduced H table.
VirasoroReport virasoro_report(const AdlerContext& ctx, const Structure& s);

// Matrix constraint operators for a finite matrix context (U_{-N} kept).
// B(F): i -> m×m matrix, the ∂^{-i-1} coefficient of [F^t, L].
std::map<int, Matrix> constraint_B(const AdlerContext& ctx, const Matrix& f);
// Same family computed by composing pseudodifferential operators.
std::map<int, Matrix> constraint_B_via_compose(const AdlerContext& ctx, const Matrix& f);
Matrix constraint_C(const AdlerContext& ctx, const Matrix& f);
// Formal adjoint of B applied to G = (G_{i,ab}).
Matrix constraint_B_adjoint(const AdlerContext& ctx, const std::map<int, Matrix>& g);

// Other named structures.
Structure gfz_structure(int n, const std::vector<std::vector<Rational>>& s);  // {v_i λ v_j} = s_ij λ
Structure gfz_symbolic(int n);                                               // s_ij as formal constants
Structure virasoro_structure(bool symbolic_c = true, const Rational& c = Rational(0));
Structure broken_demo_structure();
Structure pencil(const Structure& h, const Structure& k);  // H − cK

// Random differential polynomial in the given generators.
DiffPoly random_diffpoly(std::mt19937_64& rng, const std::vector<VarKey>& gens, int max_order, int terms,
                         int max_degree);

}  // namespace agdcas
