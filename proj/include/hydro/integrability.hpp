#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hydro/opcore.hpp"

namespace hydro::integrability {

/// a = phi_x, b = phi_y, c = phi_t.
const std::array<Symbol, 3>& lagrangian_variables();
/// Formal differentials da, db, dc.
const std::array<Symbol, 3>& differentials();

using MultiIndex = std::array<unsigned, 3>;

/// Multi-indices with i + j + k = r, from da^r down to dc^r.
std::vector<MultiIndex> multi_indices(unsigned r);
/// "da^2*db", "1" for degree 0.
std::string monomial_name(const MultiIndex& m);

/// Homogeneous form in (da, db, dc); every multi-index of the degree is present.
struct Form {
  unsigned degree = 0;
  std::map<MultiIndex, Expr> coefficients;

  const Expr& coefficient(const MultiIndex& m) const { return coefficients.at(m); }
  bool is_zero() const;
  Expr to_expr() const;
};

/// Coefficient of da^i db^j dc^k is r!/(i!j!k!) d^r f / da^i db^j dc^k.
Form sym_diff(const Expr& f, unsigned r);

struct BorderedHessian {
  Expr H;
  Matrix M;
  /// M_a, M_b, M_c: entrywise derivatives of M (the corner stays 0).
  std::array<Matrix, 3> dM;
};

BorderedHessian bordered_hessian(const Expr& f);

/// det(da M_a + db M_b + dc M_c) as a quartic form.
Form det_dM(const Expr& f);

class DegenerateLagrangianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FktReport {
  Expr H;
  /// H d^4f - d^3f dH - 3 det(dM).
  Form residual;
  /// One residual per coefficient, relation "fourth", indices (i, j, k).
  ConditionReport checks;

  bool integrable() const { return checks.passed(); }
  /// First coefficient (in multi_indices order) that is not zero.
  std::optional<MultiIndex> first_nonzero() const;
};

/// Throws DegenerateLagrangianError when H vanishes identically.
FktReport fkt_residual(const Expr& f, const sym::ZeroPolicy& policy = {});

/// Lagrangian density file: {"f": expr} over a, b, c; optional "constants"
/// and "functions".
Expr lagrangian_from_json(const nlohmann::json& j);
Expr load_lagrangian(const std::string& path);

struct LegendreVars {
  Symbol rho;
  Symbol u;
  Symbol v;
  Symbol rho_tilde;
};

/// rho, u, v and rt.
LegendreVars default_legendre_vars();

class LegendreInverseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LegendreResult {
  /// h - rho h_rho in (rho_tilde, u, v).
  Expr h_tilde;
  /// h_tilde with (rho_tilde, u, v) -> (c, a, b).
  Expr f;
  /// "inverse" (h_rho at the inverse minus rho_tilde) and "eq_tilde" 1..3.
  ConditionReport checks;
};

/// Throws LegendreInverseError when h_rho(inverse, u, v) != rho_tilde.
LegendreResult legendre(const Expr& h, const Expr& inverse, const LegendreVars& vars = default_legendre_vars(),
                        const sym::ZeroPolicy& policy = {});

/// Legendre input file: {"h": expr in rho,u,v, "inverse": expr in rt,u,v}.
struct LegendreInput {
  Expr h;
  Expr inverse;
};
LegendreInput legendre_from_json(const nlohmann::json& j);
LegendreInput load_legendre(const std::string& path);

/// (f_a, f_b, f_c).
std::array<Expr, 3> euler_lagrange_fluxes(const Expr& f);

/// Formal second derivatives phi_xx, phi_xy, phi_xt, phi_yy, phi_yt, phi_tt.
const std::array<Symbol, 6>& second_derivative_symbols();
/// (f_a)_x + (f_b)_y + (f_c)_t with a, b, c still standing for the first derivatives.
Expr euler_lagrange_equation(const Expr& f);

}  // namespace hydro::integrability
