#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "agdcas/lambda.hpp"

namespace agdcas {

// Formal parameters used across modules.
inline VarKey pencil_param() { return VarKey::param(0); }   // "c"
inline VarKey compat_param() { return VarKey::param(1); }   // "t", adjoined for compatibility checks
inline VarKey gfz_param(int i, int j) { return VarKey::param(2, std::min(i, j), std::max(i, j)); }  // s_ij

// Table of generator brackets {g_i λ g_j}, generated lazily by a rule and
// cached with populate-once semantics (safe for concurrent readers).
class Structure {
 public:
  using Rule = std::function<LambdaValue(VarKey gi, VarKey gj)>;
  using Membership = std::function<bool(VarKey gen)>;

  struct Options {
    bool local = true;
    bool infinite = false;   // generators() is then only a sampling window
    Membership member;       // defaults to membership in generators()
    int N = 0;
    int m = 1;
  };

  Structure() = default;
  Structure(std::string name, std::vector<VarKey> generators, Rule rule, Options opts);

  const std::string& name() const;
  const std::vector<VarKey>& generators() const;
  bool contains(VarKey gen) const;
  bool local() const;
  bool infinite() const;
  int N() const;
  int m() const;

  const LambdaValue& bracket(VarKey gi, VarKey gj) const;
  const LambdaPoly& local_bracket(VarKey gi, VarKey gj) const;  // throws on nonlocal entries

  // Same generators, entries S0 + coeff * S1.
  static Structure linear_combination(const std::string& name, const Structure& s0, const Structure& s1,
                                      const DiffPoly& coeff);

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// {u_i λ g} for a generator u_i.
LambdaPoly bracket_gen_right(const Structure& s, VarKey gi, const DiffPoly& g);
// {f λ u_k} for a generator u_k.
LambdaPoly bracket_left_gen(const Structure& s, const DiffPoly& f, VarKey gk);
// The Master Formula.  For nonlocal structures f and g must be linear
// combinations of generators with constant coefficients.
LambdaValue master_bracket(const Structure& s, const DiffPoly& f, const DiffPoly& g);

LambdaValue skew_residual(const Structure& s, VarKey gi, VarKey gj);
LambdaMuPoly jacobi_residual(const Structure& s, VarKey gi, VarKey gj, VarKey gk);
// Jacobi residual of S0 + t·S1 with t a formal parameter.
LambdaMuPoly compat_residual(const Structure& s0, const Structure& s1, VarKey gi, VarKey gj, VarKey gk);

// Element of V/∂V represented by a differential polynomial.
struct LocalFunctional {
  DiffPoly rep;
  bool is_zero() const { return is_total_derivative(rep).is_total; }
  bool equals(const LocalFunctional& o) const { return LocalFunctional{rep - o.rep}.is_zero(); }
};

LocalFunctional functional_bracket(const Structure& s, const LocalFunctional& f, const LocalFunctional& g);
// Hamiltonian flow du/dt = {∫h, u}: the λ=0 value of {h λ u}.
DiffPoly flow_bracket_route(const Structure& s, const DiffPoly& h, VarKey gen);
// Same flow as Σ_i H_{gen,i}(∂) δh/δu_i.
DiffPoly flow_operator_route(const Structure& s, const DiffPoly& h, VarKey gen);

// Verification sweeps -------------------------------------------------------

enum class Check { Skew, Jacobi, Compat };

struct CheckResult {
  Check check;
  std::vector<VarKey> gens;
  bool zero = true;
  LambdaValue pair_residual;      // skew
  LambdaMuPoly triple_residual;   // jacobi / compat
};

// Runs the requested check over all pairs or triples of `gens` using `jobs`
// worker threads.  For Compat, `partner` supplies S1.
std::vector<CheckResult> sweep(Check check, const Structure& s, const std::vector<VarKey>& gens, int jobs,
                               const Structure* partner = nullptr);

// Runs fn(0..count-1) on `jobs` threads; the first exception is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace agdcas
