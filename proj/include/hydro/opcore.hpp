#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hydro/symexpr.hpp"

namespace hydro {

using sym::Expr;
using sym::Symbol;

using Matrix = std::vector<std::vector<Expr>>;
using Tensor3 = std::vector<Matrix>;
using Tensor4 = std::vector<Tensor3>;

/// First-order operator sum_a g^{ija} d/dx^a + b^{ija}_k u^k_{x^a}.
/// Stored densely: g[a][i][j], b[a][i][j][k] with zero entries explicit.
struct HydroOperator {
  int d = 1;
  int n = 0;
  std::vector<Symbol> vars;
  std::vector<Symbol> constants;
  std::vector<const sym::FunctionDef*> functions;
  Tensor3 g;
  Tensor4 b;

  static HydroOperator zero(int d, std::vector<Symbol> vars);

  /// Throws std::invalid_argument on shape or free-symbol violations.
  void validate() const;
  /// The one-dimensional operator formed by the coefficients of axis a.
  HydroOperator axis(int a) const;
  /// Workspace with the operator's variables, constants and functions.
  sym::Workspace workspace() const;
};

/// Name of axis a: x, y for d <= 2, otherwise x1, x2, ...
std::string axis_name(int a, int d);

enum class Verdict { ProvenPass, ProbablyPass, Inconclusive, Fail };

std::string to_string(Verdict v);
/// The weaker of two verdicts (ProvenPass > ProbablyPass > Inconclusive > Fail).
Verdict combine(Verdict a, Verdict b);
Verdict verdict_of(const sym::ZeroVerdict& z);

struct Residual {
  std::string relation;
  /// 1-based indices; the layout per relation is documented in check_hamiltonian.
  std::vector<int> indices;
  Expr value;
  sym::ZeroVerdict zero;
  Verdict verdict = Verdict::ProvenPass;
  std::string note;
};

struct ConditionReport {
  std::vector<Residual> residuals;
  Verdict overall = Verdict::ProvenPass;
  double seconds = 0;

  void add(Residual r);
  void merge(const ConditionReport& other);
  bool passed() const { return overall == Verdict::ProvenPass || overall == Verdict::ProbablyPass; }
  std::vector<const Residual*> failures() const;
  /// Weakest verdict per relation name, in name order.
  std::map<std::string, Verdict> by_relation() const;
  std::size_t count(const std::string& relation) const;
};

/// Residual for one relation instance; the zero test runs under policy.
Residual make_residual(const std::string& rel, std::vector<int> idx, const sym::Fraction& f,
                       const sym::ZeroPolicy& policy);

struct CheckOptions {
  sym::ZeroPolicy policy;
  /// Stop at the first failing residual.
  bool fail_fast = false;
  /// Keep residuals that are ProvenZero in the report.
  bool keep_zero = true;
};

/// (a1): g^{ija} - g^{jia} for all a and i < j. Indices (a, i, j).
ConditionReport check_symmetry(const HydroOperator& op, const CheckOptions& opt = {});
/// (a2): d_k g^{ija} - b^{ija}_k - b^{jia}_k. Indices (a, i, j, k).
ConditionReport check_skew(const HydroOperator& op, const CheckOptions& opt = {});
/// (a3)-(a7) over all a, b in 1..d and all free indices in 1..n.
/// Indices: a3, a4 (a, b, i, j, r); a5, a6 (a, b, i, j, r, q); a7 (a, b, i, j, r, q, k).
ConditionReport check_jacobi(const HydroOperator& op, const CheckOptions& opt = {});
/// Union of the three fragments.
ConditionReport check_hamiltonian(const HydroOperator& op, const CheckOptions& opt = {});

/// Formal pencil parameters lambda1..lambdad (registered as constants).
std::vector<Symbol> pencil_parameters(int d);
/// sum_a lambda_a g^a.
Matrix pencil_matrix(const HydroOperator& op);

/// A polynomial in formal parameters with expression coefficients.
struct ParamPolynomial {
  std::vector<Symbol> params;
  /// Exponent vector -> coefficient, only nonzero coefficients.
  std::map<std::vector<unsigned>, sym::Fraction> coefficients;

  bool empty() const { return coefficients.empty(); }
  Expr coefficient_expr(const std::vector<unsigned>& exps) const;
  /// Monomial in the parameters, e.g. "lambda1*lambda2".
  std::string monomial_string(const std::vector<unsigned>& exps) const;
  Expr to_expr() const;
};

/// Splits a fraction whose denominator is free of params into params-monomials.
ParamPolynomial split_by_params(const sym::Fraction& f, const std::vector<Symbol>& params);

/// Exact determinant of a square matrix of expressions.
sym::Fraction determinant(const std::vector<std::vector<sym::Fraction>>& m);

ParamPolynomial pencil_determinant(const HydroOperator& op);

struct DegeneracyResult {
  bool degenerate = true;
  Verdict verdict = Verdict::ProvenPass;
  /// First nonzero coefficient of the pencil determinant, e.g. "lambda1*lambda2: 1".
  std::optional<std::string> certificate;
};

DegeneracyResult is_degenerate(const HydroOperator& op, const sym::ZeroPolicy& policy = {});

struct RankResult {
  int rank = 0;
  Verdict verdict = Verdict::ProvenPass;
};

/// Largest r with a nonzero r x r minor of the formal pencil.
RankResult generic_rank(const HydroOperator& op, const sym::ZeroPolicy& policy = {});

struct TrivialityResult {
  bool trivial = false;
  Verdict verdict = Verdict::ProvenPass;
  /// The constant factor when one part is a constant multiple of the other.
  std::optional<Expr> xi;
  /// Which part is the multiple: "y = xi*x" or "x = xi*y".
  std::string relation;
  std::string note;
};

/// d = 2 only: identically zero, or one part a constant multiple of the other.
TrivialityResult is_trivial_pair(const HydroOperator& op, const sym::ZeroPolicy& policy = {});

/// Formal parameter used by pencil_compatibility.
Symbol compatibility_parameter();

/// Checks the 1D operator P_x + lambda P_y; residual relations are suffixed by
/// the lambda power, e.g. "a5[lambda^2]".
ConditionReport pencil_compatibility(const HydroOperator& opx, const HydroOperator& opy,
                                     const CheckOptions& opt = {});

}  // namespace hydro
