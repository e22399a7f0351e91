#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "agdcas/rational.hpp"

namespace agdcas {

// Variable families.  U holds the coefficients u_{i,ab} of a generic operator,
// V the free fields of GFZ algebras, Param formal constants (killed by the
// derivation), and Factor0.. the coefficients of the factors of a generalized
// Miura map.
enum class Family : std::uint8_t { U = 0, V = 1, Param = 2, Factor0 = 3 };

inline Family factor_family(int k) { return static_cast<Family>(3 + k); }

// A variable u_{i,ab}^{(n)} packed into 64 bits so that integer order equals
// lexicographic order on (family, gen_index, a, b, der_order).
class VarKey {
 public:
  static constexpr int kIndexBias = 1 << 19;

  VarKey() = default;
  static VarKey make(Family f, int index, int a = 1, int b = 1, int order = 0);
  static VarKey u(int index, int a = 1, int b = 1, int order = 0) {
    return make(Family::U, index, a, b, order);
  }
  static VarKey param(int index, int a = 1, int b = 1) {
    return make(Family::Param, index, a, b, 0);
  }

  Family family() const { return static_cast<Family>(bits_ >> 60); }
  int index() const { return static_cast<int>((bits_ >> 40) & 0xFFFFF) - kIndexBias; }
  int a() const { return static_cast<int>((bits_ >> 34) & 0x3F); }
  int b() const { return static_cast<int>((bits_ >> 28) & 0x3F); }
  int order() const { return static_cast<int>(bits_ & 0xFFFFFFF); }
  bool is_param() const { return family() == Family::Param; }

  VarKey generator() const { return VarKey(bits_ & ~std::uint64_t{0xFFFFFFF}); }
  VarKey with_order(int n) const;
  VarKey shifted(int dn) const { return with_order(order() + dn); }

  std::uint64_t bits() const { return bits_; }
  auto operator<=>(const VarKey&) const = default;

 private:
  explicit VarKey(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

struct VarKeyHash {
  std::size_t operator()(const VarKey& v) const { return std::hash<std::uint64_t>()(v.bits()); }
};

struct Factor {
  VarKey var;
  std::uint32_t exp;
  auto operator<=>(const Factor&) const = default;
};

// Sorted product of powers; empty vector is the monomial 1.
using Monomial = std::vector<Factor>;

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

Monomial mono_mul(const Monomial& x, const Monomial& y);
std::uint32_t mono_degree(const Monomial& m);
bool mono_is_param_only(const Monomial& m);

class DiffPoly {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
    bool operator==(const Term& o) const { return mono == o.mono && coeff == o.coeff; }
  };

  DiffPoly() = default;
  DiffPoly(const Rational& c);  // NOLINT: constants convert implicitly
  DiffPoly(long c) : DiffPoly(Rational(c)) {}  // NOLINT
  DiffPoly(int c) : DiffPoly(Rational(c)) {}   // NOLINT
  static DiffPoly var(VarKey v, std::uint32_t exp = 1);
  static DiffPoly from_terms(std::vector<Term> terms);  // canonicalizes

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;

  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly& operator*=(const DiffPoly& o);
  DiffPoly& operator*=(const Rational& c);

  friend DiffPoly operator+(DiffPoly x, const DiffPoly& y) { return x += y; }
  friend DiffPoly operator-(DiffPoly x, const DiffPoly& y) { return x -= y; }
  friend DiffPoly operator*(const DiffPoly& x, const DiffPoly& y);
  friend DiffPoly operator*(DiffPoly x, const Rational& c) { return x *= c; }
  friend DiffPoly operator*(const Rational& c, DiffPoly x) { return x *= c; }
  DiffPoly operator-() const;
  bool operator==(const DiffPoly& o) const { return terms_ == o.terms_; }

 private:
  std::vector<Term> terms_;  // strictly increasing monomials, nonzero coefficients
  friend class PolyBuilder;
};

// Accumulates monomial contributions and emits a canonical DiffPoly.
class PolyBuilder {
 public:
  void add(const Monomial& m, const Rational& c);
  void add(Monomial&& m, const Rational& c);
  void add(const DiffPoly& p, const Rational& scale = Rational(1));
  DiffPoly finish();

 private:
  std::unordered_map<Monomial, Rational, MonomialHash> acc_;
};

DiffPoly total_derivative(const DiffPoly& f);
DiffPoly total_derivative(const DiffPoly& f, int times);
// Partial derivative with respect to one variable u_{i,ab}^{(n)}.
DiffPoly partial(const DiffPoly& f, VarKey v);
// Variational derivative with respect to the generator `gen` (order ignored).
DiffPoly varder(const DiffPoly& f, VarKey gen);

// Distinct non-parameter generators (order stripped) occurring in f, sorted.
std::vector<VarKey> generators_of(const DiffPoly& f);
// Highest derivative order of `gen` in f, or -1 if absent.
int max_order(const DiffPoly& f, VarKey gen);

struct TotalDerivativeReport {
  bool is_total = false;        // true iff every variational derivative vanishes and no constant
  Rational constant;            // constant (parameter-only) part, reported separately
  std::vector<VarKey> witnesses;  // generators with nonzero variational derivative
};
TotalDerivativeReport is_total_derivative(const DiffPoly& f);

// A representative of f modulo total derivatives obtained by integrating by
// parts whenever the leading variable (highest order, then generator) occurs
// linearly.  Deterministic; equal functionals need not give equal outputs.
DiffPoly reduce_mod_derivatives(const DiffPoly& f);

// Replace generators by differential polynomials, extended to derivatives by
// u^{(n)} -> d^n(image).  Generators for which `rule` returns nullopt stay.
using GeneratorRule = std::function<std::optional<DiffPoly>(VarKey gen)>;
DiffPoly substitute(const DiffPoly& f, const GeneratorRule& rule);

}  // namespace agdcas
