#include "hydro/integrability.hpp"

#include <fstream>

#include "hydro/operator_io.hpp"

namespace hydro::integrability {

using nlohmann::json;
using sym::Fraction;
using FMatrix = std::vector<std::vector<Fraction>>;

const std::array<Symbol, 3>& lagrangian_variables() {
  static const std::array<Symbol, 3> v{Symbol::variable("a"), Symbol::variable("b"), Symbol::variable("c")};
  return v;
}

const std::array<Symbol, 3>& differentials() {
  static const std::array<Symbol, 3> v{Symbol::constant("da"), Symbol::constant("db"), Symbol::constant("dc")};
  return v;
}

std::vector<MultiIndex> multi_indices(unsigned r) {
  std::vector<MultiIndex> out;
  for (unsigned i = r + 1; i-- > 0;)
    for (unsigned j = r - i + 1; j-- > 0;) out.push_back({i, j, r - i - j});
  return out;
}

std::string monomial_name(const MultiIndex& m) {
  static const char* names[] = {"da", "db", "dc"};
  std::string s;
  for (int k = 0; k < 3; ++k) {
    if (m[k] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[k];
    if (m[k] > 1) s += "^" + std::to_string(m[k]);
  }
  return s.empty() ? "1" : s;
}

bool Form::is_zero() const {
  for (const auto& [m, c] : coefficients)
    if (!sym::normalize(c).is_zero()) return false;
  return true;
}

Expr Form::to_expr() const {
  const auto& d = differentials();
  std::vector<Expr> terms;
  for (const auto& [m, c] : coefficients) {
    std::vector<Expr> fs{c};
    for (int k = 0; k < 3; ++k)
      if (m[k]) fs.push_back(sym::pow(Expr(d[k]), m[k]));
    terms.push_back(sym::product(fs));
  }
  return sym::sum(terms);
}

namespace {

Expr expr_of(const Fraction& f) { return sym::to_expr(sym::normalize(f)); }

/// Mixed partials of f, memoised by multi-index.
class Partials {
 public:
  explicit Partials(const Fraction& f) { memo_.emplace(MultiIndex{0, 0, 0}, f); }

  const Fraction& operator()(const MultiIndex& m) {
    if (auto it = memo_.find(m); it != memo_.end()) return it->second;
    int k = m[0] ? 0 : (m[1] ? 1 : 2);
    MultiIndex lower = m;
    --lower[k];
    Fraction v = (*this)(lower).derivative(lagrangian_variables()[k].id());
    return memo_.emplace(m, std::move(v)).first->second;
  }

 private:
  std::map<MultiIndex, Fraction> memo_;
};

MultiIndex unit(int k, unsigned times = 1) {
  MultiIndex m{0, 0, 0};
  m[k] = times;
  return m;
}

MultiIndex plus(MultiIndex a, const MultiIndex& b) {
  for (int k = 0; k < 3; ++k) a[k] += b[k];
  return a;
}

mpq_class multinomial(const MultiIndex& m) {
  auto fact = [](unsigned n) {
    mpz_class r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
  };
  return mpq_class(fact(m[0] + m[1] + m[2]), fact(m[0]) * fact(m[1]) * fact(m[2]));
}

Fraction differential_monomial(const MultiIndex& m) {
  Fraction out(mpq_class(1));
  for (int k = 0; k < 3; ++k) out *= Fraction::var(differentials()[k].id()).pow(m[k]);
  return out;
}

/// Fraction polynomial in da, db, dc for a symmetric differential.
Fraction sym_diff_poly(Partials& p, unsigned r) {
  Fraction out;
  for (const auto& m : multi_indices(r)) out += (p(m) * differential_monomial(m)).scaled(multinomial(m));
  return out;
}

Form to_form(const Fraction& poly, unsigned degree) {
  std::vector<Symbol> params(differentials().begin(), differentials().end());
  ParamPolynomial split = split_by_params(poly, params);
  Form out;
  out.degree = degree;
  for (const auto& m : multi_indices(degree)) out.coefficients[m] = Expr(0L);
  for (const auto& [exps, c] : split.coefficients) {
    MultiIndex m{exps[0], exps[1], exps[2]};
    if (m[0] + m[1] + m[2] != degree) throw std::logic_error("form is not homogeneous");
    out.coefficients[m] = expr_of(c);
  }
  return out;
}

FMatrix bordered(Partials& p) {
  FMatrix M(4, std::vector<Fraction>(4));
  for (int i = 0; i < 3; ++i) {
    M[0][i + 1] = M[i + 1][0] = p(unit(i));
    for (int j = 0; j < 3; ++j) M[i + 1][j + 1] = p(plus(unit(i), unit(j)));
  }
  return M;
}

FMatrix bordered_derivative(Partials& p, int x) {
  FMatrix D(4, std::vector<Fraction>(4));
  for (int i = 0; i < 3; ++i) {
    D[0][i + 1] = D[i + 1][0] = p(plus(unit(i), unit(x)));
    for (int j = 0; j < 3; ++j) D[i + 1][j + 1] = p(plus(plus(unit(i), unit(j)), unit(x)));
  }
  return D;
}

Fraction hessian_det(Partials& p) {
  FMatrix h(3, std::vector<Fraction>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[i][j] = p(plus(unit(i), unit(j)));
  return determinant(h);
}

Fraction det_dM_poly(Partials& p) {
  FMatrix m(4, std::vector<Fraction>(4));
  for (int x = 0; x < 3; ++x) {
    FMatrix D = bordered_derivative(p, x);
    Fraction dx = Fraction::var(differentials()[x].id());
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] += dx * D[i][j];
  }
  return determinant(m);
}

Matrix exprs(const FMatrix& m) {
  Matrix out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const auto& f : row) out.back().push_back(expr_of(f));
  }
  return out;
}

void check_variables(const Expr& f) {
  const auto& v = lagrangian_variables();
  for (Symbol s : sym::free_symbols(f))
    if (s.is_variable() && s != v[0] && s != v[1] && s != v[2])
      throw std::invalid_argument("Lagrangian depends on '" + s.name() + "'; only a, b, c are allowed");
}

}  // namespace

Form sym_diff(const Expr& f, unsigned r) {
  check_variables(f);
  Partials p(sym::to_fraction(f));
  Form out;
  out.degree = r;
  for (const auto& m : multi_indices(r)) out.coefficients[m] = expr_of(p(m).scaled(multinomial(m)));
  return out;
}

BorderedHessian bordered_hessian(const Expr& f) {
  check_variables(f);
  Partials p(sym::to_fraction(f));
  BorderedHessian out;
  out.H = expr_of(hessian_det(p));
  out.M = exprs(bordered(p));
  for (int x = 0; x < 3; ++x) out.dM[x] = exprs(bordered_derivative(p, x));
  return out;
}

Form det_dM(const Expr& f) {
  check_variables(f);
  Partials p(sym::to_fraction(f));
  return to_form(det_dM_poly(p), 4);
}

std::optional<MultiIndex> FktReport::first_nonzero() const {
  for (const auto& m : multi_indices(4))
    for (const auto& r : checks.residuals)
      if (r.indices == std::vector<int>{int(m[0]), int(m[1]), int(m[2])} && !(r.verdict == Verdict::ProvenPass ||
                                                                                r.verdict == Verdict::ProbablyPass))
        return m;
  return std::nullopt;
}

FktReport fkt_residual(const Expr& f, const sym::ZeroPolicy& policy) {
  check_variables(f);
  Partials p(sym::to_fraction(f));
  Fraction H = hessian_det(p);
  bool degenerate = H.is_zero();
  if (!degenerate) {
    try {
      degenerate = sym::is_zero(H, policy).zero();
    } catch (const sym::InconclusiveError&) {
    }
  }
  if (degenerate) throw DegenerateLagrangianError("Hessian determinant vanishes identically; the test is inapplicable");

  Fraction dH;
  for (int x = 0; x < 3; ++x) dH += H.derivative(lagrangian_variables()[x].id()) * Fraction::var(differentials()[x].id());
  Fraction cleared = H * sym_diff_poly(p, 4) - sym_diff_poly(p, 3) * dH - det_dM_poly(p).scaled(3);

  FktReport out;
  out.H = expr_of(H);
  out.residual = to_form(cleared, 4);
  std::vector<Symbol> params(differentials().begin(), differentials().end());
  ParamPolynomial split = split_by_params(cleared, params);
  for (const auto& m : multi_indices(4)) {
    auto it = split.coefficients.find({m[0], m[1], m[2]});
    Fraction c = it == split.coefficients.end() ? Fraction() : it->second;
    out.checks.add(make_residual("fourth", {int(m[0]), int(m[1]), int(m[2])}, c, policy));
  }
  return out;
}

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void add_extras(sym::Workspace& ws, const json& j) {
  if (j.contains("constants"))
    for (const auto& c : j["constants"]) ws.add_constant(c.get<std::string>());
  if (j.contains("functions"))
    for (const auto& f : j["functions"])
      ws.add_function(f.at("name").get<std::string>(), f.at("args").get<std::vector<std::string>>());
}

Expr parse_field(const sym::Workspace& ws, const json& j, const char* key) {
  try {
    return ws.parse(j.at(key).get<std::string>());
  } catch (const sym::ParseError& e) {
    throw InputError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

Expr lagrangian_from_json(const json& j) {
  try {
    sym::Workspace ws;
    for (Symbol s : lagrangian_variables()) ws.add_variable(s.name());
    add_extras(ws, j);
    return parse_field(ws, j, "f");
  } catch (const json::exception& e) {
    throw InputError(std::string("Lagrangian file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("Lagrangian file: ") + e.what());
  }
}

Expr load_lagrangian(const std::string& path) { return lagrangian_from_json(read_json(path)); }

LegendreVars default_legendre_vars() {
  return {Symbol::variable("rho"), Symbol::variable("u"), Symbol::variable("v"), Symbol::variable("rt")};
}

LegendreResult legendre(const Expr& h, const Expr& inverse, const LegendreVars& vars, const sym::ZeroPolicy& policy) {
  LegendreResult out;
  Fraction hf = sym::to_fraction(h);
  Expr h_rho = expr_of(hf.derivative(vars.rho.id()));
  std::map<Symbol, Expr> at{{vars.rho, inverse}};
  auto compose = [&](const Expr& e) { return sym::to_fraction(sym::substitute(e, at)); };

  Fraction inv_check = compose(h_rho) - Fraction::var(vars.rho_tilde.id());
  Residual ir = make_residual("inverse", {1}, inv_check, policy);
  bool ok = ir.verdict == Verdict::ProvenPass || ir.verdict == Verdict::ProbablyPass;
  out.checks.add(ir);
  if (!ok) throw LegendreInverseError("inverse does not satisfy h_rho(inverse, u, v) = rt: residual " + sym::print(ir.value));

  Fraction ht = compose(sym::sub(h, sym::mul(Expr(vars.rho), h_rho)));
  out.h_tilde = expr_of(ht);
  Fraction inv = sym::to_fraction(inverse);
  out.checks.add(make_residual("eq_tilde", {1}, ht.derivative(vars.rho_tilde.id()) + inv, policy));
  out.checks.add(make_residual("eq_tilde", {2}, ht.derivative(vars.u.id()) - compose(sym::differentiate(h, vars.u)), policy));
  out.checks.add(make_residual("eq_tilde", {3}, ht.derivative(vars.v.id()) - compose(sym::differentiate(h, vars.v)), policy));

  const auto& abc = lagrangian_variables();
  out.f = expr_of(sym::to_fraction(sym::substitute(out.h_tilde, {{vars.rho_tilde, Expr(abc[2])}, {vars.u, Expr(abc[0])}, {vars.v, Expr(abc[1])}})));
  return out;
}

LegendreInput legendre_from_json(const json& j) {
  try {
    LegendreVars v = default_legendre_vars();
    sym::Workspace hw;
    for (Symbol s : {v.rho, v.u, v.v}) hw.add_variable(s.name());
    sym::Workspace iw;
    for (Symbol s : {v.rho_tilde, v.u, v.v}) iw.add_variable(s.name());
    add_extras(hw, j);
    if (j.contains("constants"))
      for (const auto& c : j["constants"]) iw.add_constant(c.get<std::string>());
    return {parse_field(hw, j, "h"), parse_field(iw, j, "inverse")};
  } catch (const json::exception& e) {
    throw InputError(std::string("Legendre file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("Legendre file: ") + e.what());
  }
}

LegendreInput load_legendre(const std::string& path) { return legendre_from_json(read_json(path)); }

std::array<Expr, 3> euler_lagrange_fluxes(const Expr& f) {
  check_variables(f);
  const auto& v = lagrangian_variables();
  return {sym::differentiate(f, v[0]), sym::differentiate(f, v[1]), sym::differentiate(f, v[2])};
}

const std::array<Symbol, 6>& second_derivative_symbols() {
  static const std::array<Symbol, 6> s{Symbol::constant("phi_xx"), Symbol::constant("phi_xy"), Symbol::constant("phi_xt"),
                                       Symbol::constant("phi_yy"), Symbol::constant("phi_yt"), Symbol::constant("phi_tt")};
  return s;
}

Expr euler_lagrange_equation(const Expr& f) {
  check_variables(f);
  Partials p(sym::to_fraction(f));
  const auto& s = second_derivative_symbols();
  // Index of phi_{pq} in the symbol list for p <= q.
  static const int slot[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
  Fraction out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out += p(plus(unit(i), unit(j))) * Fraction::var(s[slot[i][j]].id());
  return expr_of(out);
}

}  // namespace hydro::integrability
