#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hydro/expr.hpp"
#include "hydro/real.hpp"

namespace hydro::sym {

/// Exact rational or MPFR real. Arithmetic stays exact while both sides are.
class Number {
 public:
  Number() : v_(mpq_class(0)) {}
  Number(long v) : v_(mpq_class(v)) {}  // NOLINT(google-explicit-constructor)
  Number(const mpq_class& q) : v_(q) {}  // NOLINT(google-explicit-constructor)
  Number(const Real& r) : v_(r) {}  // NOLINT(google-explicit-constructor)

  bool is_exact() const { return std::holds_alternative<mpq_class>(v_); }
  const mpq_class& exact() const { return std::get<mpq_class>(v_); }
  Real real() const;
  bool is_zero() const;
  std::string str(int digits = 20) const;

  Number operator+(const Number& o) const;
  Number operator-(const Number& o) const;
  Number operator*(const Number& o) const;
  /// Throws SingularityError when o is zero.
  Number operator/(const Number& o) const;
  Number operator-() const;

 private:
  std::variant<mpq_class, Real> v_;
};

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnassignedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using FunctionValue =
    std::function<Number(const FunctionDef*, const std::vector<unsigned>& multi, const std::vector<Number>& args)>;

/// Assignment of values to symbols. Abstract functions are evaluated through
/// the optional callback.
struct Point {
  std::map<Symbol, Number> values;
  FunctionValue functions;
  unsigned precision = 64;
};

/// Exact when every operation stays rational; otherwise an MPFR real at the
/// point's working precision.
Number evaluate(const Expr& e, const Point& p);

}  // namespace hydro::sym
