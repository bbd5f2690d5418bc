#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hydro/expr.hpp"
#include "hydro/poly.hpp"

namespace hydro::sym {

/// Rational function N / (m * F1^e1 * ... * Fk^ek) with the denominator kept
/// factored: m is a monomial, each Fi is primitive with positive leading
/// coefficient. Used for internal arithmetic; common denominators are formed
/// factor by factor, so the numerator is zero iff the value is zero.
class Fraction {
 public:
  struct Factor {
    Poly p;
    std::uint32_t e;
  };

  Fraction() = default;
  explicit Fraction(Poly num) : num_(std::move(num)) {}
  explicit Fraction(const mpq_class& c) : num_(c) {}
  static Fraction var(VarIndex v) { return Fraction(Poly::var(v)); }

  const Poly& numerator() const { return num_; }
  const Monomial& monomial_denominator() const { return mden_; }
  const std::vector<Factor>& factors() const { return factors_; }
  Poly expanded_denominator() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && mden_.is_one() && factors_.empty(); }
  /// Every indeterminate in numerator or denominator.
  std::set<VarIndex> indeterminates() const;

  Fraction operator+(const Fraction& o) const;
  Fraction operator-(const Fraction& o) const;
  Fraction operator*(const Fraction& o) const;
  Fraction operator/(const Fraction& o) const { return *this * o.inverse(); }
  Fraction operator-() const;
  Fraction& operator+=(const Fraction& o) { return *this = *this + o; }
  Fraction& operator-=(const Fraction& o) { return *this = *this - o; }
  Fraction& operator*=(const Fraction& o) { return *this = *this * o; }
  Fraction scaled(const mpq_class& c) const;
  /// Throws std::domain_error when the value is identically zero.
  Fraction inverse() const;
  Fraction pow(long e) const;
  /// Same denominator with a different numerator (then cancelled).
  Fraction with_numerator(Poly num) const;

  /// Total derivative in the variable v, applying the chain rule through atoms.
  Fraction derivative(VarIndex v) const;

 private:
  void cancel();
  Poly num_;
  Monomial mden_;
  std::vector<Factor> factors_;
};

/// Canonical reduced form: gcd(num, den) = 1 and den has leading coefficient 1.
struct RationalForm {
  Poly num;
  Poly den{mpq_class(1)};

  bool is_zero() const { return num.is_zero(); }
  friend bool operator==(const RationalForm& a, const RationalForm& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const RationalForm& a, const RationalForm& b) { return !(a == b); }
};

enum class AtomKind { Exp, Ln, Sqrt, Apply };

/// Opaque indeterminate standing for exp/ln/sqrt of an argument or for an
/// abstract-function derivative. Atoms are interned by kind, function,
/// multi-index and the canonical form of their arguments.
struct AtomInfo {
  VarIndex index;
  AtomKind kind;
  const FunctionDef* fn = nullptr;
  std::vector<unsigned> multi;
  std::vector<Expr> args;
  std::vector<Fraction> arg_fractions;
  std::string key;
  /// Exp/Ln/Sqrt anywhere inside, which puts identities beyond the exact test.
  bool transcendental = false;
  /// Variables (and atoms) the atom depends on.
  std::set<VarIndex> depends;
};

const AtomInfo& atom_info(VarIndex v);
/// Expression for an indeterminate: a symbol or the atom's expression.
Expr indeterminate_expr(VarIndex v);
Fraction atom_derivative(VarIndex atom, VarIndex v);

/// Converts an expression into factored rational arithmetic.
/// Throws std::domain_error on division by an identically zero expression.
Fraction to_fraction(const Expr& e);

RationalForm normalize(const Fraction& f);
RationalForm normalize(const Expr& e);
Expr to_expr(const Poly& p);
Expr to_expr(const RationalForm& r);
/// Expression whose tree mirrors the factored denominator.
Expr to_expr(const Fraction& f);

bool has_transcendental(const Fraction& f);

inline VarIndex index_of(Symbol s) { return s.id(); }

}  // namespace hydro::sym
