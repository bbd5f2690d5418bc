#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydro/opcore.hpp"

namespace hydro {

/// Change of dependent variables u = phi(v) with an optional explicit inverse
/// v = psi(u). Construction verifies det J != 0 and, when given, the inverse.
class CoordinateChange {
 public:
  /// old_vars[i] = forward[i](new_vars); inverse[i] gives new_vars[i] in old_vars.
  CoordinateChange(std::vector<Symbol> old_vars, std::vector<Symbol> new_vars, std::vector<Expr> forward,
                   std::optional<std::vector<Expr>> inverse = std::nullopt, const sym::ZeroPolicy& policy = {});

  static CoordinateChange identity(const std::vector<Symbol>& vars);

  const std::vector<Symbol>& old_vars() const { return old_vars_; }
  const std::vector<Symbol>& new_vars() const { return new_vars_; }
  const std::vector<Expr>& forward() const { return forward_; }
  const std::optional<std::vector<Expr>>& inverse() const { return inverse_; }
  int n() const { return static_cast<int>(old_vars_.size()); }

  /// J^i_k = d phi^i / d v^k, in the new variables.
  const std::vector<std::vector<sym::Fraction>>& jacobian() const { return jac_; }
  /// (J^{-1})^i_k = d v^i / d u^k composed with phi.
  const std::vector<std::vector<sym::Fraction>>& inverse_jacobian() const { return inv_jac_; }
  Matrix jacobian_expr() const;
  Matrix inverse_jacobian_expr() const;

  /// Verdict of the inverse check (ProvenPass when no inverse was given).
  Verdict inverse_verdict() const { return inverse_verdict_; }

  /// The reverse change v = psi(u). Throws std::logic_error without an inverse.
  CoordinateChange reversed(const sym::ZeroPolicy& policy = {}) const;

  /// Expression in the old variables rewritten in the new ones.
  Expr pull(const Expr& e) const;

 private:
  std::vector<Symbol> old_vars_;
  std::vector<Symbol> new_vars_;
  std::vector<Expr> forward_;
  std::optional<std::vector<Expr>> inverse_;
  std::vector<std::vector<sym::Fraction>> jac_;
  std::vector<std::vector<sym::Fraction>> inv_jac_;
  Verdict inverse_verdict_ = Verdict::ProvenPass;
};

/// Raised for singular or inconsistent changes.
struct ChangeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// first then second: u = phi1(v), v = phi2(w) gives u = phi1(phi2(w)).
CoordinateChange compose(const CoordinateChange& first, const CoordinateChange& second,
                         const sym::ZeroPolicy& policy = {});

/// The operator in the new variables. Operator variables must be the change's
/// old variables (same names, any order).
HydroOperator pushforward(const HydroOperator& op, const CoordinateChange& c);

/// Linear change of the independent variables x' = L x: g'^b = sum_a L[b][a] g^a.
HydroOperator linear_axis_change(const HydroOperator& op, const std::vector<std::vector<mpq_class>>& L);

/// check_hamiltonian of the pushforward plus, when the change has an inverse,
/// "roundtrip-g" and "roundtrip-b" residuals of pushing back.
ConditionReport verify_invariance(const HydroOperator& op, const CoordinateChange& c, const CheckOptions& opt = {});

/// {"forward": {"u1": expr, ...}, "inverse": {"v1": expr, ...}}, optional
/// "variables" (new variable order), "constants" and "functions".
/// Old variables are taken from op_vars.
CoordinateChange change_from_json(const nlohmann::json& j, const std::vector<Symbol>& op_vars);
nlohmann::json change_to_json(const CoordinateChange& c);
CoordinateChange load_change(const std::filesystem::path& path, const std::vector<Symbol>& op_vars);

/// Rational changes with rational inverses used to exercise pushforward.
/// Forward expressions are in v1..vn, inverses in u1..un.
struct ChangeFixture {
  std::string name;
  int n;
  std::vector<std::string> forward;
  std::vector<std::string> inverse;
};

const std::vector<ChangeFixture>& fixture_changes();

/// Instantiates a fixture for operator variables named u1..un; new variables are v1..vn.
CoordinateChange make_change(const ChangeFixture& f, const std::vector<Symbol>& old_vars);

}  // namespace hydro
