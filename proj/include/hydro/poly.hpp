#pragma once

#include <gmpxx.h>

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hydro::sym {

/// Index of a polynomial indeterminate. Symbols use their registry id; opaque
/// atoms (exp, ln, sqrt, abstract-function derivatives) live above kAtomBase,
/// so they sort after every true variable.
using VarIndex = std::uint32_t;
inline constexpr VarIndex kAtomBase = 1u << 31;

inline bool is_atom_index(VarIndex v) { return v >= kAtomBase; }

/// Sparse monomial: (variable, exponent) pairs sorted by variable, exponents > 0.
class Monomial {
 public:
  using Entry = std::pair<VarIndex, std::uint32_t>;
  using Storage = boost::container::small_vector<Entry, 4>;

  Monomial() = default;
  static Monomial var(VarIndex v, std::uint32_t e = 1);

  const Storage& entries() const { return f_; }
  bool is_one() const { return f_.empty(); }
  std::uint32_t degree() const;
  std::uint32_t exponent(VarIndex v) const;
  bool divides(const Monomial& other) const;

  Monomial operator*(const Monomial& o) const;
  /// Requires divides(o, *this).
  Monomial operator/(const Monomial& o) const;
  Monomial without(VarIndex v) const;
  Monomial lcm(const Monomial& o) const;
  Monomial gcd(const Monomial& o) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }
  std::size_t hash() const;

 private:
  Storage f_;
  friend class Poly;
};

/// Graded reverse lexicographic comparison; a smaller index is a bigger variable.
int grevlex_cmp(const Monomial& a, const Monomial& b);

struct Term {
  Monomial m;
  mpq_class c;
};

/// Sparse multivariate polynomial over Q, terms sorted in decreasing grevlex order.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const mpq_class& c);
  static Poly constant(const mpq_class& c) { return Poly(c); }
  static Poly var(VarIndex v, std::uint32_t e = 1);
  static Poly monomial(const Monomial& m, const mpq_class& c);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  bool is_one() const { return is_constant() && !terms_.empty() && terms_[0].c == 1; }
  mpq_class constant_value() const;
  const Term& lead() const { return terms_.front(); }
  std::size_t size() const { return terms_.size(); }
  std::uint32_t total_degree() const;
  std::uint32_t degree_in(VarIndex v) const;
  std::set<VarIndex> variables() const;
  bool has_variable(VarIndex v) const;
  bool is_single_variable_monomial() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scaled(const mpq_class& c) const;
  Poly times_monomial(const Monomial& m, const mpq_class& c) const;
  Poly pow(std::uint32_t e) const;

  /// Partial derivative treating every indeterminate (atoms included) as independent.
  Poly derivative(VarIndex v) const;

  /// Exact division; returns false (leaving q unspecified) when d does not divide *this.
  bool divide_exact(const Poly& d, Poly* q) const;

  /// Coefficients with respect to v: degree -> coefficient free of v.
  std::map<std::uint32_t, Poly> coefficients_in(VarIndex v) const;
  /// Leading coefficient with respect to v.
  Poly lead_coefficient_in(VarIndex v) const;

  /// Rational content c such that *this / c has coprime integer coefficients
  /// and a positive leading coefficient.
  mpq_class numeric_content() const;
  Poly numeric_primitive() const;
  /// Largest monomial dividing every term.
  Monomial monomial_content() const;
  Poly divided_by_monomial(const Monomial& m) const;

  /// Substitute values for indeterminates; the callback maps each variable
  /// occurring in the polynomial to a value of type T.
  template <class T, class F>
  T evaluate(F&& value_of) const;

  friend bool operator==(const Poly& a, const Poly& b);
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  std::size_t hash() const;

  /// Debug rendering with raw indeterminate indices.
  std::string debug_string() const;

 private:
  static Poly from_unsorted(std::vector<Term> terms);
  std::vector<Term> terms_;
};

/// Pseudo-remainder of a by b with respect to v.
Poly pseudo_remainder(const Poly& a, const Poly& b, VarIndex v);

/// Greatest common divisor, normalized with numeric_primitive (positive lead,
/// coprime integer coefficients); gcd(0, 0) = 0 and constants give 1.
Poly gcd(const Poly& a, const Poly& b);

/// True when p is provably irreducible by a cheap sufficient test: a single
/// indeterminate, or degree one in some indeterminate with coprime coefficients.
bool known_irreducible(const Poly& p);

template <class T, class F>
T Poly::evaluate(F&& value_of) const {
  T total(0);
  std::map<VarIndex, T> cache;
  for (const auto& t : terms_) {
    T term(t.c);
    for (const auto& [v, e] : t.m.entries()) {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, value_of(v)).first;
      for (std::uint32_t k = 0; k < e; ++k) term = term * it->second;
    }
    total = total + term;
  }
  return total;
}

}  // namespace hydro::sym

template <>
struct std::hash<hydro::sym::Monomial> {
  std::size_t operator()(const hydro::sym::Monomial& m) const noexcept { return m.hash(); }
};
template <>
struct std::hash<hydro::sym::Poly> {
  std::size_t operator()(const hydro::sym::Poly& p) const noexcept { return p.hash(); }
};
