#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydro/opcore.hpp"

namespace hydro::hamsys {

struct HamiltonianDensity {
  Expr h;
  /// Abstract functions the density refers to.
  std::vector<const sym::FunctionDef*> functions;
};

/// h(u1..un) as an abstract function. Named "h" unless the operator already
/// uses that name, in which case "H".
HamiltonianDensity abstract_density(const HydroOperator& op);

/// u_t + A u_x + B u_y = 0.
struct QuasilinearSystem {
  int n = 0;
  std::vector<Symbol> vars;
  Matrix A;
  Matrix B;
  std::string operator_id;
  Expr density;
  /// The generating operator, kept for the shape classifier.
  std::optional<HydroOperator> op;
};

/// Throws std::invalid_argument for d > 2 or when h has free variables
/// outside the operator's.
QuasilinearSystem generate_system(const HydroOperator& op, const Expr& h, std::string operator_id = "");

/// Formal parameters of the dispersion polynomial.
Symbol lambda_parameter();
Symbol mu_parameter();

/// det(E + lambda A + mu B) split by monomials in (lambda, mu).
ParamPolynomial dispersion(const QuasilinearSystem& sys);

/// Hydrodynamic reduction ansatz u = u(R1..Rm).
struct ReductionCandidate {
  int m = 0;
  std::vector<Symbol> R;
  std::vector<Expr> u;
  std::vector<Expr> lambda;
  std::vector<Expr> mu;
  std::optional<std::vector<Expr>> v;
  /// Abstract functions of R used by the expressions.
  std::vector<const sym::FunctionDef*> functions;

  /// Throws std::invalid_argument on size mismatches.
  void validate(int n) const;
};

/// Riemann invariant symbols R1..Rm.
std::vector<Symbol> riemann_invariants(int m);

class DegenerateCandidateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// d_j lambda^i (mu^j - mu^i) - d_j mu^i (lambda^j - lambda^i), i != j.
/// Relation "comm", indices (i, j).
ConditionReport commutativity_residual(const ReductionCandidate& c, const sym::ZeroPolicy& policy = {});

/// (E + lambda^i A + mu^i B) d_i u after u = u(R). Relation "reduction",
/// indices (i, row).
ConditionReport reduction_residual(const ReductionCandidate& c, const QuasilinearSystem& sys,
                                   const sym::ZeroPolicy& policy = {});

struct HodographReport {
  /// d_j v^i (lambda^j - lambda^i) - d_j lambda^i (v^j - v^i), relation "comm1", indices (i, j).
  ConditionReport comm1;
  /// v^i(R0) - x - lambda^i(R0) t - mu^i(R0) y.
  std::vector<sym::Number> values;
};

HodographReport hodograph_residual(const ReductionCandidate& c, const std::vector<sym::Number>& R0,
                                   const sym::Number& t, const sym::Number& x, const sym::Number& y,
                                   const sym::ZeroPolicy& policy = {});

enum class Shape {
  Trivial,
  Transport1D,
  Decoupled1D,
  Decoupled1,
  Decoupled2,
  Decoupled3,
  EulerLagrange,
  Unclassified
};

std::string to_string(Shape s);

struct ShapeResult {
  Shape shape = Shape::Unclassified;
  /// 1-based variables frozen to constants, in freezing order.
  std::vector<int> frozen;
  /// 1-based variables left after freezing.
  std::vector<int> remaining;
  /// Remaining variables in the order of the matched form.
  std::vector<int> roles;
  /// How the match was made.
  std::string note;
};

/// Expects a system generated with an abstract density.
ShapeResult shape_classify(const QuasilinearSystem& sys, const sym::ZeroPolicy& policy = {});

/// Density file: {"h": expr, "functions": [{"name", "args"}]} over the operator's variables.
HamiltonianDensity density_from_json(const nlohmann::json& j, const HydroOperator& op);
HamiltonianDensity load_density(const std::string& path, const HydroOperator& op);

/// Candidate file: {"m", "u", "lambda", "mu", "v"?, "functions"?}; expressions in R1..Rm.
ReductionCandidate candidate_from_json(const nlohmann::json& j);
ReductionCandidate load_candidate(const std::string& path);

nlohmann::json system_to_json(const QuasilinearSystem& sys);

}  // namespace hydro::hamsys
