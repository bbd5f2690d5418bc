#include <gtest/gtest.h>

#include "hydro/symexpr.hpp"
#include "support/random_expr.hpp"

using namespace hydro::sym;
using hydro::testing::ExprGen;

namespace {

constexpr int kCases = 1000;

struct Corpus {
  Workspace ws;
  Symbol u1, u2, u3;
  const FunctionDef* f;
  const FunctionDef* q;
  Corpus() {
    u1 = ws.add_variable("u1");
    u2 = ws.add_variable("u2");
    u3 = ws.add_variable("u3");
    f = ws.add_function("f", {"u2", "u3"});
    q = ws.add_function("q", {"u3"});
  }
};

Corpus& corpus() {
  static Corpus c;
  return c;
}

// Draws an expression that normalizes (no division by an identically zero term).
Expr draw(ExprGen& g, int depth) {
  while (true) {
    Expr e = g(depth);
    try {
      to_fraction(e);
      return e;
    } catch (const std::domain_error&) {
    }
  }
}

bool zero(const Expr& e) { return normalize(e).is_zero(); }

TEST(SymexprProperties, DifferentiationIsLinear) {
  auto& c = corpus();
  ExprGen g(11, {c.u1, c.u2, c.u3}, {c.f, c.q});
  for (int i = 0; i < kCases; ++i) {
    Expr a = draw(g, 3);
    Expr b = draw(g, 3);
    Symbol v = std::vector<Symbol>{c.u1, c.u2, c.u3}[i % 3];
    Expr lhs = differentiate(add(a, b), v);
    ASSERT_TRUE(zero(sub(sub(lhs, differentiate(a, v)), differentiate(b, v)))) << print(a) << " | " << print(b);
  }
}

TEST(SymexprProperties, LeibnizRule) {
  auto& c = corpus();
  ExprGen g(12, {c.u1, c.u2, c.u3}, {c.f, c.q});
  for (int i = 0; i < kCases; ++i) {
    Expr a = draw(g, 3);
    Expr b = draw(g, 3);
    Symbol v = std::vector<Symbol>{c.u1, c.u2, c.u3}[i % 3];
    Expr lhs = differentiate(mul(a, b), v);
    Expr rhs = add(mul(a, differentiate(b, v)), mul(b, differentiate(a, v)));
    ASSERT_TRUE(zero(sub(lhs, rhs))) << print(a) << " | " << print(b);
  }
}

TEST(SymexprProperties, MixedPartialsCommute) {
  auto& c = corpus();
  ExprGen g(13, {c.u1, c.u2, c.u3}, {c.f, c.q});
  for (int i = 0; i < kCases; ++i) {
    Expr e = draw(g, 3);
    Symbol a = std::vector<Symbol>{c.u1, c.u2, c.u3}[i % 3];
    Symbol b = std::vector<Symbol>{c.u2, c.u3, c.u1}[i % 3];
    ASSERT_TRUE(zero(sub(differentiate(differentiate(e, a), b), differentiate(differentiate(e, b), a)))) << print(e);
  }
}

TEST(SymexprProperties, NormalizeIsIdempotent) {
  auto& c = corpus();
  ExprGen g(14, {c.u1, c.u2, c.u3}, {c.f, c.q});
  for (int i = 0; i < kCases; ++i) {
    Expr e = draw(g, 4);
    RationalForm once = normalize(e);
    ASSERT_EQ(normalize(to_expr(once)), once) << print(e);
  }
}

TEST(SymexprProperties, ParsePrintRoundTrip) {
  auto& c = corpus();
  ExprGen g(15, {c.u1, c.u2, c.u3}, {c.f, c.q}, true);
  for (int i = 0; i < kCases; ++i) {
    Expr e = g(4);
    std::string text = print(e);
    ASSERT_EQ(c.ws.parse(text), e) << text;
  }
}

TEST(SymexprProperties, EvaluationAgreesWithNormalForm) {
  auto& c = corpus();
  ExprGen g(16, {c.u1, c.u2, c.u3});
  int checked = 0;
  for (int i = 0; checked < kCases; ++i) {
    Expr e = draw(g, 3);
    Point p;
    for (Symbol s : {c.u1, c.u2, c.u3}) {
      mpq_class v(g.uniform(-40, 40), g.uniform(1, 7));
      v.canonicalize();
      p.values[s] = v;
    }
    try {
      Number direct = evaluate(e, p);
      Number canon = evaluate(to_expr(normalize(e)), p);
      ASSERT_TRUE(direct.is_exact() && canon.is_exact());
      ASSERT_EQ(direct.exact(), canon.exact()) << print(e);
      ++checked;
    } catch (const SingularityError&) {
    }
  }
}

TEST(SymexprProperties, GcdDividesBothAndKeepsCommonFactor) {
  auto& c = corpus();
  ExprGen g(17, {c.u1, c.u2, c.u3});
  auto poly = [&](int depth) {
    while (true) {
      try {
        Fraction f = to_fraction(g(depth));
        if (!f.is_zero()) return f.numerator();
      } catch (const std::domain_error&) {
      }
    }
  };
  for (int i = 0; i < 300; ++i) {
    Poly a = poly(2), b = poly(2), k = poly(1);
    if (k.is_constant()) continue;
    Poly d = gcd(a * k, b * k);
    ASSERT_TRUE((a * k).divide_exact(d, nullptr));
    ASSERT_TRUE((b * k).divide_exact(d, nullptr));
    ASSERT_TRUE(d.divide_exact(k.numeric_primitive(), nullptr)) << d.debug_string() << " vs " << k.debug_string();
  }
}

}  // namespace
