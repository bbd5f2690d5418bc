#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hydro/symbol.hpp"

namespace hydro::sym {

enum class Op { Num, Sym, Neg, Add, Sub, Mul, Div, Pow, Exp, Ln, Sqrt, Apply };

class Expr;
struct Node;

/// Immutable expression tree. Nodes are shared; copying an Expr is cheap.
///
/// Construction through the free functions below folds operations whose
/// operands are all numeric constants (so "1/2" and "-3" become rational
/// leaves) and flattens powers of powers. Nothing else is rewritten, which
/// keeps parse/print round trips structural.
class Expr {
 public:
  Expr();  // the constant 0
  Expr(long v);  // NOLINT(google-explicit-constructor)
  Expr(const mpq_class& v);  // NOLINT(google-explicit-constructor)
  Expr(Symbol s);  // NOLINT(google-explicit-constructor)

  Op op() const;
  const Node& node() const { return *node_; }
  const Node* raw() const { return node_.get(); }

  bool is_num() const { return op() == Op::Num; }
  bool is_zero() const;
  bool is_one() const;
  const mpq_class& num() const;
  Symbol symbol() const;
  const std::vector<Expr>& kids() const;
  long exponent() const;
  const FunctionDef* function() const;
  const std::vector<unsigned>& multi_index() const;
  std::size_t hash() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend Expr make_node(Node n);
};

struct Node {
  Op op = Op::Num;
  mpq_class num;
  Symbol sym;
  std::vector<Expr> kids;
  long exponent = 0;
  const FunctionDef* fn = nullptr;
  std::vector<unsigned> multi;
  std::size_t hash = 0;
};

// Structural constructors (constant folding only).
Expr neg(const Expr& a);
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& base, long exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sqrt(const Expr& a);
Expr apply(const FunctionDef* f, std::vector<Expr> args, std::vector<unsigned> multi = {});
/// f applied to its declared parameters.
Expr apply(const FunctionDef* f);

inline Expr operator-(const Expr& a) { return neg(a); }
inline Expr operator+(const Expr& a, const Expr& b) { return add(a, b); }
inline Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul(a, b); }
inline Expr operator/(const Expr& a, const Expr& b) { return div(a, b); }

// Simplifying builders: drop additive zeros and multiplicative ones. Used by
// derivative, substitution and normal-form output, never by the parser.
Expr plus(const Expr& a, const Expr& b);
Expr minus(const Expr& a, const Expr& b);
Expr times(const Expr& a, const Expr& b);
Expr over(const Expr& a, const Expr& b);
Expr negate(const Expr& a);
Expr sum(const std::vector<Expr>& terms);
Expr product(const std::vector<Expr>& factors);

/// Exact partial derivative with respect to a variable. Constants and
/// parameters differentiate to zero; abstract functions follow the chain rule
/// over their argument list.
Expr differentiate(const Expr& e, Symbol v);

/// Simultaneous syntactic substitution of symbols.
Expr substitute(const Expr& e, const std::map<Symbol, Expr>& bindings);

/// Replaces applications of f (and its derivatives) by body (differentiated
/// accordingly) with f's parameters bound to the application's arguments.
Expr substitute_functions(const Expr& e, const std::map<const FunctionDef*, Expr>& bodies);

/// Symbols (variables and constants) occurring anywhere in e, including
/// inside function arguments.
std::set<Symbol> free_symbols(const Expr& e);
/// Abstract functions applied anywhere in e.
std::set<const FunctionDef*> functions_used(const Expr& e);
bool has_transcendental(const Expr& e);
std::size_t node_count(const Expr& e);

/// Text form in the input grammar; parse(print(e)) == e.
std::string print(const Expr& e);
/// Name of a derivative atom such as "f_23" or "q''" (without arguments).
std::string derivative_name(const FunctionDef* f, const std::vector<unsigned>& multi);

}  // namespace hydro::sym

template <>
struct std::hash<hydro::sym::Expr> {
  std::size_t operator()(const hydro::sym::Expr& e) const noexcept { return e.hash(); }
};
