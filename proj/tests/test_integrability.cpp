#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "hydro/integrability.hpp"
#include "hydro/operator_io.hpp"
#include "support/random_expr.hpp"

using namespace hydro;
using namespace hydro::integrability;
using sym::Expr;

namespace {

Expr F(const std::string& s) { return lagrangian_from_json({{"f", s}}); }

bool same(const Expr& a, const Expr& b) { return sym::normalize(sym::sub(a, b)).is_zero(); }

sym::Workspace legendre_ws(bool tilde) {
  sym::Workspace ws;
  auto v = default_legendre_vars();
  ws.add_variable(tilde ? v.rho_tilde.name() : v.rho.name());
  ws.add_variable(v.u.name());
  ws.add_variable(v.v.name());
  return ws;
}

double number(const Expr& e, const sym::Point& p) { return sym::evaluate(e, p).real().to_double(); }

}  // namespace

TEST(SymDiff, MultiIndexOrderAndNames) {
  auto m = multi_indices(4);
  ASSERT_EQ(m.size(), 15u);
  EXPECT_EQ(monomial_name(m.front()), "da^4");
  EXPECT_EQ(monomial_name(m.back()), "dc^4");
  EXPECT_EQ(multi_indices(3).size(), 10u);
  EXPECT_EQ(monomial_name({1, 1, 1}), "da*db*dc");
}

TEST(SymDiff, HandExamples) {
  EXPECT_TRUE(sym_diff(F("a^2 + b^2 + c^2"), 3).is_zero());
  auto bf3 = sym_diff(F("a^2 + b^2 - 2*exp(c)"), 3);
  for (const auto& [m, c] : bf3.coefficients) {
    if (m == MultiIndex{0, 0, 3})
      EXPECT_TRUE(same(c, F("-2*exp(c)")));
    else
      EXPECT_TRUE(sym::normalize(c).is_zero()) << monomial_name(m);
  }
  EXPECT_TRUE(same(sym_diff(F("a^2 + b^2 - 2*exp(c)"), 4).coefficient({0, 0, 4}), F("-2*exp(c)")));
  auto abc = sym_diff(F("a*b*c"), 3);
  EXPECT_TRUE(same(abc.coefficient({1, 1, 1}), Expr(6L)));
  EXPECT_TRUE(same(abc.to_expr(), sym::mul(Expr(6L), sym::product({Expr(differentials()[0]), Expr(differentials()[1]),
                                                                   Expr(differentials()[2])}))));
}

TEST(SymDiff, MultinomialIdentityOnRandomDensities) {
  const auto& v = lagrangian_variables();
  hydro::testing::ExprGen gen(17, {v[0], v[1], v[2]});
  int cases = 0;
  for (int rep = 0; rep < 30; ++rep) {
    Expr f = gen(3);
    for (unsigned r : {3u, 4u}) {
      Form form;
      try {
        form = sym_diff(f, r);
      } catch (const std::domain_error&) {
        continue;
      }
      for (const auto& m : multi_indices(r)) {
        Expr raw = f;
        for (int k = 0; k < 3; ++k)
          for (unsigned t = 0; t < m[k]; ++t) raw = sym::differentiate(raw, v[k]);
        mpz_class fi = 1;
        for (int k = 0; k < 3; ++k)
          for (unsigned t = 2; t <= m[k]; ++t) fi *= t;
        mpz_class rf = 1;
        for (unsigned t = 2; t <= r; ++t) rf *= t;
        Expr scaled = sym::mul(form.coefficient(m), Expr(mpq_class(fi, rf)));
        EXPECT_TRUE(same(scaled, raw)) << sym::print(f) << " " << monomial_name(m);
        ++cases;
      }
    }
  }
  EXPECT_GE(cases, 300);
}

TEST(BorderedHessian, DerivativeBlocksMatchDisplay) {
  const auto& v = lagrangian_variables();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int rep = 0; rep < 10; ++rep) {
    // Random cubic in a, b, c.
    std::vector<Expr> terms;
    for (unsigned i = 0; i <= 3; ++i)
      for (unsigned j = 0; i + j <= 3; ++j)
        for (unsigned k = 0; i + j + k <= 3; ++k)
          terms.push_back(sym::product({Expr(static_cast<long>(coef(rng))), sym::pow(Expr(v[0]), i),
                                        sym::pow(Expr(v[1]), j), sym::pow(Expr(v[2]), k)}));
    Expr f = sym::sum(terms);
    auto bh = bordered_hessian(f);
    for (int x = 0; x < 3; ++x) {
      EXPECT_TRUE(sym::normalize(bh.dM[x][0][0]).is_zero());
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          EXPECT_TRUE(same(bh.dM[x][i][j], sym::differentiate(bh.M[i][j], v[x])));
          EXPECT_TRUE(same(bh.M[i][j], bh.M[j][i]));
        }
    }
  }
}

TEST(DetDM, HandExamples) {
  EXPECT_TRUE(det_dM(F("a^2 + b^2 + c^2")).is_zero());
  EXPECT_TRUE(det_dM(F("a^2 + b^2 - 2*exp(c)")).is_zero());
  EXPECT_TRUE(det_dM(F("3*a^2 - a*b + 5*b*c - c^2/2 + 7*a")).is_zero());
  EXPECT_FALSE(det_dM(F("a^3 + b^3 + c^3")).is_zero());
}

TEST(DetDM, AgreesWithNumericDeterminant) {
  // Independent route: numeric 4x4 determinant along a random direction.
  const auto& v = lagrangian_variables();
  const auto& dv = differentials();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.3, 1.7);
  for (const char* text : {"a^3*b + b^2*c^2 + a*c^3", "a^4 + b^2 + c^2", "a*b*c + exp(c) + a^2*b^2"}) {
    Expr f = F(text);
    auto bh = bordered_hessian(f);
    Expr form = det_dM(f).to_expr();
    for (int rep = 0; rep < 3; ++rep) {
      sym::Point p;
      double dir[3];
      for (int k = 0; k < 3; ++k) {
        p.values[v[k]] = mpq_class(U(rng));
        dir[k] = U(rng);
        p.values[dv[k]] = mpq_class(dir[k]);
      }
      double m[4][4];
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          m[i][j] = 0;
          for (int k = 0; k < 3; ++k) m[i][j] += dir[k] * number(bh.dM[k][i][j], p);
        }
      double det = 1;
      for (int c = 0; c < 4; ++c) {
        int piv = c;
        for (int r = c + 1; r < 4; ++r)
          if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (piv != c) {
          for (int k = 0; k < 4; ++k) std::swap(m[c][k], m[piv][k]);
          det = -det;
        }
        det *= m[c][c];
        if (m[c][c] == 0) break;
        for (int r = c + 1; r < 4; ++r) {
          double q = m[r][c] / m[c][c];
          for (int k = c; k < 4; ++k) m[r][k] -= q * m[c][k];
        }
      }
      double sym_value = number(form, p);
      EXPECT_NEAR(sym_value, det, 1e-9 * (1 + std::abs(det))) << text;
    }
  }
}

TEST(Fkt, BoyerFinleyIsIntegrable) {
  auto t0 = std::chrono::steady_clock::now();
  auto rep = fkt_residual(F("a^2 + b^2 - 2*exp(c)"));
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 5.0);
  EXPECT_TRUE(same(rep.H, F("-8*exp(c)")));
  ASSERT_EQ(rep.checks.residuals.size(), 15u);
  for (const auto& r : rep.checks.residuals) EXPECT_EQ(r.zero.kind, sym::ZeroKind::ProvenZero);
  EXPECT_TRUE(rep.integrable());
  EXPECT_FALSE(rep.first_nonzero().has_value());
}

TEST(Fkt, LinearWaveIsIntegrable) {
  auto rep = fkt_residual(F("a^2 + b^2 + c^2"));
  EXPECT_TRUE(rep.integrable());
  EXPECT_TRUE(rep.residual.is_zero());
}

TEST(Fkt, QuarticFailsWithHandCoefficient) {
  auto rep = fkt_residual(F("a^4 + b^2 + c^2"));
  EXPECT_FALSE(rep.integrable());
  EXPECT_TRUE(same(rep.H, F("48*a^2")));
  ASSERT_TRUE(rep.first_nonzero().has_value());
  EXPECT_EQ(*rep.first_nonzero(), (MultiIndex{4, 0, 0}));
  EXPECT_EQ(sym::print(rep.residual.coefficient({4, 0, 0})), "-1152*a^2");
  for (const auto& [m, c] : rep.residual.coefficients)
    if (m != MultiIndex{4, 0, 0}) EXPECT_TRUE(sym::normalize(c).is_zero()) << monomial_name(m);
}

TEST(Fkt, RelabelingPermutesCoefficients) {
  auto ra = fkt_residual(F("a^4 + b^2 + c^2"));
  auto rb = fkt_residual(F("b^4 + a^2 + c^2"));
  const auto& v = lagrangian_variables();
  for (const auto& m : multi_indices(4)) {
    Expr swapped = sym::substitute(rb.residual.coefficient({m[1], m[0], m[2]}), {{v[0], Expr(v[1])}, {v[1], Expr(v[0])}});
    EXPECT_TRUE(same(ra.residual.coefficient(m), swapped)) << monomial_name(m);
  }
}

TEST(Fkt, ClearedFormMatchesUnclearedNumerically) {
  const auto& v = lagrangian_variables();
  const auto& dv = differentials();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.4, 1.6);
  for (const char* text : {"a^4 + b^2 + c^2", "a^3*b + b^2*c^2 + a*c^3 + c^2", "a^2 + b^2 - 2*exp(c) + a*b*c"}) {
    Expr f = F(text);
    auto rep = fkt_residual(f);
    Expr d4 = sym_diff(f, 4).to_expr();
    Expr d3 = sym_diff(f, 3).to_expr();
    Expr det = det_dM(f).to_expr();
    Expr dH = sym::sum({sym::mul(sym::differentiate(rep.H, v[0]), Expr(dv[0])), sym::mul(sym::differentiate(rep.H, v[1]), Expr(dv[1])),
                        sym::mul(sym::differentiate(rep.H, v[2]), Expr(dv[2]))});
    for (int r = 0; r < 3; ++r) {
      sym::Point p;
      for (int k = 0; k < 3; ++k) {
        p.values[v[k]] = mpq_class(U(rng));
        p.values[dv[k]] = mpq_class(U(rng));
      }
      double H = number(rep.H, p);
      if (std::abs(H) < 1e-6) continue;
      double unc = number(d4, p) - number(d3, p) * number(dH, p) / H - 3.0 / H * number(det, p);
      double cleared = number(rep.residual.to_expr(), p) / H;
      EXPECT_NEAR(cleared, unc, 1e-8 * (1 + std::abs(unc))) << text;
    }
  }
}

TEST(Fkt, DegenerateLagrangianIsRejected) {
  EXPECT_THROW(fkt_residual(F("a^2 + b")), DegenerateLagrangianError);
  EXPECT_THROW(fkt_residual(F("(a + b + c)^2")), DegenerateLagrangianError);
}

TEST(Fkt, RejectsForeignVariables) {
  EXPECT_THROW(F("a + w"), InputError);
  EXPECT_THROW(lagrangian_from_json({{"g", "a"}}), InputError);
}

TEST(Legendre, GasLikeDensity) {
  auto hw = legendre_ws(false);
  auto iw = legendre_ws(true);
  auto res = legendre(hw.parse("rho*(u^2 + v^2)/2 + rho^2/2"), iw.parse("rt - (u^2 + v^2)/2"));
  EXPECT_TRUE(same(res.f, F("-(c - (a^2 + b^2)/2)^2/2")));
  EXPECT_EQ(res.checks.count("eq_tilde"), 3u);
  for (const auto& r : res.checks.residuals) EXPECT_EQ(r.zero.kind, sym::ZeroKind::ProvenZero) << r.relation;
}

TEST(Legendre, PureQuadratic) {
  auto res = legendre(legendre_ws(false).parse("rho^2/2"), legendre_ws(true).parse("rt"));
  EXPECT_TRUE(same(res.f, F("-c^2/2")));
  EXPECT_TRUE(res.checks.passed());
}

TEST(Legendre, WrongInverseIsRejected) {
  EXPECT_THROW(legendre(legendre_ws(false).parse("rho^2/2 + rho*u"), legendre_ws(true).parse("rt")), LegendreInverseError);
}

TEST(Legendre, FileFormat) {
  auto in = legendre_from_json({{"h", "rho*(u^2 + v^2)/2 + rho^2/2"}, {"inverse", "rt - (u^2 + v^2)/2"}});
  EXPECT_TRUE(legendre(in.h, in.inverse).checks.passed());
  EXPECT_THROW(legendre_from_json({{"h", "rt"}, {"inverse", "rt"}}), InputError);
}

TEST(EulerLagrange, Fluxes) {
  auto bf = euler_lagrange_fluxes(F("a^2 + b^2 - 2*exp(c)"));
  EXPECT_TRUE(same(bf[0], F("2*a")));
  EXPECT_TRUE(same(bf[1], F("2*b")));
  EXPECT_TRUE(same(bf[2], F("-2*exp(c)")));
  auto wave = euler_lagrange_fluxes(F("(a^2 + b^2 + c^2)/2"));
  EXPECT_TRUE(same(wave[0], F("a")));
  EXPECT_TRUE(same(wave[2], F("c")));
  for (const auto& e : euler_lagrange_fluxes(F("7/3"))) EXPECT_TRUE(sym::normalize(e).is_zero());
}

TEST(EulerLagrange, BoyerFinleyEquation) {
  // u_xx + u_yy = e^{u_t} u_tt, times 2.
  const auto& s = second_derivative_symbols();
  Expr eq = euler_lagrange_equation(F("a^2 + b^2 - 2*exp(c)"));
  Expr expected = sym::mul(Expr(2L), sym::sub(sym::add(Expr(s[0]), Expr(s[3])), sym::mul(F("exp(c)"), Expr(s[5]))));
  EXPECT_TRUE(same(eq, expected)) << sym::print(eq);
}
