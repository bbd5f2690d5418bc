#include <gtest/gtest.h>

#include "hydro/symexpr.hpp"

using namespace hydro::sym;

namespace {

struct SymexprTest : ::testing::Test {
  Workspace ws;
  Symbol u1, u2, u3;
  const FunctionDef* f = nullptr;
  const FunctionDef* q = nullptr;

  void SetUp() override {
    u1 = ws.add_variable("u1");
    u2 = ws.add_variable("u2");
    u3 = ws.add_variable("u3");
    f = ws.add_function("f", {"u2", "u3"});
    q = ws.add_function("q", {"u3"});
  }
  Expr P(const std::string& s) { return ws.parse(s); }
  bool same(const Expr& a, const Expr& b) { return normalize(a - b).is_zero(); }
};

TEST_F(SymexprTest, ParsesQuotient) {
  Expr e = P("1/u1");
  ASSERT_EQ(e.op(), Op::Div);
  EXPECT_TRUE(e.kids()[0].is_one());
  EXPECT_EQ(e.kids()[1], Expr(u1));
}

TEST_F(SymexprTest, ParsesNegatedSquare) {
  Expr e = P("-(u3*u1 - u2)^2");
  ASSERT_EQ(e.op(), Op::Neg);
  ASSERT_EQ(e.kids()[0].op(), Op::Pow);
  EXPECT_EQ(e.kids()[0].exponent(), 2);
  EXPECT_EQ(e.kids()[0].kids()[0], sub(mul(Expr(u3), Expr(u1)), Expr(u2)));
  EXPECT_EQ(print(e), "-(u3*u1 - u2)^2");
}

TEST_F(SymexprTest, RejectsStructuralOperatorSymbols) {
  EXPECT_THROW(P("u2*dy"), ParseError);
  EXPECT_THROW(P("dx"), ParseError);
}

TEST_F(SymexprTest, ReportsOffsetsAndKnownNames) {
  try {
    P("u1 + )");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  try {
    P("u1*zz");
    FAIL();
  } catch (const UnknownIdentifierError& e) {
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_NE(std::string(e.what()).find("u1, u2, u3"), std::string::npos);
  }
  EXPECT_THROW(P("u1^2^3"), ParseError);
  EXPECT_THROW(P("u1^u2"), ParseError);
  EXPECT_THROW(P(""), ParseError);
  EXPECT_THROW(P("f(u1)"), ParseError);
}

TEST_F(SymexprTest, RationalLiteralsAreReduced) {
  Expr e = P("6/4");
  ASSERT_TRUE(e.is_num());
  EXPECT_EQ(e.num(), mpq_class(3, 2));
  EXPECT_EQ(P("-3").num(), -3);
}

TEST_F(SymexprTest, PowersFlatten) {
  Expr e = pow(pow(Expr(u1), 2), 3);
  EXPECT_EQ(e.exponent(), 6);
  EXPECT_EQ(P("(u1^2)^3"), e);
}

TEST_F(SymexprTest, DerivativeOfReciprocal) {
  Expr d = differentiate(P("1/u1"), u1);
  EXPECT_TRUE(same(d, P("-1/u1^2")));
}

TEST_F(SymexprTest, AbstractFunctionDerivatives) {
  Expr d = differentiate(P("f(u2,u3)"), u2);
  ASSERT_EQ(d.op(), Op::Apply);
  EXPECT_EQ(d.multi_index(), (std::vector<unsigned>{1, 0}));
  EXPECT_EQ(print(d), "f_2(u2,u3)");
  EXPECT_TRUE(differentiate(P("f"), u1).is_zero());
  Expr d2 = differentiate(differentiate(P("f"), u2), u3);
  EXPECT_EQ(print(d2), "f_23(u2,u3)");
  EXPECT_EQ(P("f_23"), d2);
}

TEST_F(SymexprTest, PrimeNotation) {
  Expr d = differentiate(P("q(u3)*u3"), u3);
  EXPECT_TRUE(same(d, P("q'(u3)*u3 + q(u3)")));
  EXPECT_EQ(print(differentiate(d, u3)).find("q''(u3)") != std::string::npos, true);
  EXPECT_EQ(P("q''"), apply(q, {Expr(u3)}, {2}));
}

TEST_F(SymexprTest, NormalizeCancelsFactors) {
  RationalForm r = normalize(P("(u1^2 - u2^2)/(u1 - u2)"));
  EXPECT_TRUE(r.den.is_one());
  EXPECT_EQ(r.num, normalize(P("u1 + u2")).num);
  EXPECT_TRUE(normalize(P("u1/u1 - 1")).is_zero());
  EXPECT_TRUE(normalize(P("exp(u1)*exp(u1) - exp(u1)^2")).is_zero());
}

TEST_F(SymexprTest, NormalizedDenominatorIsMonic) {
  RationalForm r = normalize(P("u1/(3*u2 - 6*u3)"));
  EXPECT_EQ(r.den.lead().c, 1);
  EXPECT_TRUE(gcd(r.num, r.den).is_one());
}

TEST_F(SymexprTest, DivisionByIdenticallyZero) { EXPECT_THROW(normalize(P("1/(u1 - u1)")), std::domain_error); }

TEST_F(SymexprTest, ZeroTestVerdicts) {
  EXPECT_EQ(is_zero(P("u1*u2 - u2*u1")).kind, ZeroKind::ProvenZero);
  EXPECT_EQ(is_zero(P("u1*u2 - u2")).kind, ZeroKind::ProvenNonzero);
  ZeroVerdict v = is_zero(P("exp(2*u1) - exp(u1)^2"));
  EXPECT_EQ(v.kind, ZeroKind::ProbablyZero);
  EXPECT_EQ(v.samples, 20u);
  ZeroVerdict w = is_zero(P("exp(2*u1) - exp(u1)"));
  EXPECT_EQ(w.kind, ZeroKind::ProbablyNonzero);
  EXPECT_EQ(w.witness.count("u1"), 1u);
  EXPECT_EQ(is_zero(P("f_2*u1 - u1*f_2")).kind, ZeroKind::ProvenZero);
}

TEST_F(SymexprTest, ZeroTestGivesUpOnSingularEverywhere) {
  EXPECT_THROW(is_zero(P("exp(u1)/(exp(2*u1) - exp(u1)^2)")), InconclusiveError);
}

TEST_F(SymexprTest, Evaluation) {
  Point p;
  p.values[u1] = mpq_class(2);
  Number n = evaluate(P("1/u1"), p);
  ASSERT_TRUE(n.is_exact());
  EXPECT_EQ(n.exact(), mpq_class(1, 2));

  Point q;
  q.values[u1] = mpq_class(1);
  q.values[u2] = mpq_class(3);
  q.values[u3] = mpq_class(3);
  EXPECT_TRUE(evaluate(P("u3*u1 - u2"), q).is_zero());
  EXPECT_THROW(evaluate(P("1/(u3*u1 - u2)"), q), SingularityError);

  Point r;
  r.precision = 64;
  Number e = evaluate(P("exp(1)"), r);
  EXPECT_FALSE(e.is_exact());
  EXPECT_EQ(e.real().precision(), 64u);
  EXPECT_EQ(e.str(10).substr(0, 11), "2.718281828");
}

TEST_F(SymexprTest, Substitution) {
  Symbol v1 = ws.add_variable("v1");
  Symbol v3 = ws.add_variable("v3");
  const FunctionDef* phi = ws.add_function("phi", {"v3"});
  Expr e = substitute(P("1/u1"), {{u1, add(Expr(v1), apply(phi))}});
  EXPECT_EQ(print(e), "1/(v1 + phi(v3))");
  Expr g = P("u2*f + u1^2");
  EXPECT_EQ(substitute(g, {}), g);
  EXPECT_EQ(substitute(g, {{u2, Expr(u2)}}), g);
  (void)v3;
}

TEST_F(SymexprTest, PrintRoundTrips) {
  for (const char* s : {"u1 - (u2 - u3)", "-u1*u2", "u1/(u2*u3)", "(-u1)^2", "-u1^2", "u1^(-2)", "1/2*u1",
                        "u1*(2/3)", "u1 + (-3)", "f_3(u2,u3)/u1", "-(u2 + u1)", "exp(-u1)*ln(u2)", "sqrt(u1 + 1)",
                        "q'(u3 + 1)", "u1 - -1/2"}) {
    Expr e = P(s);
    EXPECT_EQ(P(print(e)), e) << s << " -> " << print(e);
  }
}

TEST_F(SymexprTest, MixedPartialsCommute) {
  Expr e = P("f*q/(u1*u2 - u3) + exp(u2*u3)");
  Expr a = differentiate(differentiate(e, u2), u3);
  Expr b = differentiate(differentiate(e, u3), u2);
  EXPECT_TRUE(same(a, b));
  Fraction fe = to_fraction(e);
  EXPECT_TRUE((fe.derivative(u2.id()).derivative(u3.id()) - fe.derivative(u3.id()).derivative(u2.id())).is_zero());
}

TEST_F(SymexprTest, FractionDerivativeMatchesExprDerivative) {
  Expr e = P("(u1^2 + f)/(u1*u2 - u3)^2 + sqrt(u1)*ln(u2)");
  for (Symbol v : {u1, u2, u3}) {
    Fraction a = to_fraction(e).derivative(v.id());
    Fraction b = to_fraction(differentiate(e, v));
    EXPECT_TRUE((a - b).is_zero()) << v.name();
  }
}

}  // namespace
