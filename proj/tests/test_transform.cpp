#include <gtest/gtest.h>

#include <random>

#include "hydro/catalog.hpp"
#include "hydro/transform.hpp"

using namespace hydro;
using sym::Expr;
using sym::ZeroKind;

namespace {

std::vector<Symbol> vars(const std::string& stem, int n) {
  std::vector<Symbol> out;
  for (int i = 1; i <= n; ++i) out.push_back(Symbol::variable(stem + std::to_string(i)));
  return out;
}

CoordinateChange change(int n, std::vector<std::string> fwd, std::optional<std::vector<std::string>> inv = {},
                        const std::string& from = "u", const std::string& to = "v") {
  sym::Workspace fw;
  sym::Workspace bw;
  for (int i = 1; i <= n; ++i) {
    fw.add_variable(to + std::to_string(i));
    bw.add_variable(from + std::to_string(i));
  }
  std::vector<Expr> f;
  for (const auto& t : fwd) f.push_back(fw.parse(t));
  std::optional<std::vector<Expr>> b;
  if (inv) {
    b.emplace();
    for (const auto& t : *inv) b->push_back(bw.parse(t));
  }
  return CoordinateChange(bw.variables(), fw.variables(), f, b);
}

bool same(const Expr& a, const Expr& b) { return sym::normalize(sym::minus(a, b)).is_zero(); }

bool same_operator(const HydroOperator& x, const HydroOperator& y) {
  for (int a = 0; a < x.d; ++a)
    for (int i = 0; i < x.n; ++i)
      for (int j = 0; j < x.n; ++j) {
        if (!same(x.g[a][i][j], y.g[a][i][j])) return false;
        for (int k = 0; k < x.n; ++k)
          if (!same(x.b[a][i][j][k], y.b[a][i][j][k])) return false;
      }
  return true;
}

// Rename the variables of an operator (u -> v) without changing coefficients.
HydroOperator renamed(const HydroOperator& op, const std::vector<Symbol>& to) {
  std::map<Symbol, Expr> m;
  for (int i = 0; i < op.n; ++i) m.emplace(op.vars[i], Expr(to[i]));
  HydroOperator out = op;
  out.vars = to;
  for (auto& mat : out.g)
    for (auto& row : mat)
      for (auto& e : row) e = sym::substitute(e, m);
  for (auto& t : out.b)
    for (auto& mat : t)
      for (auto& row : mat)
        for (auto& e : row) e = sym::substitute(e, m);
  return out;
}

TEST(Transform, IdentityLeavesOperator) {
  HydroOperator op = catalog::instantiate("P_gas");
  HydroOperator pushed = pushforward(op, CoordinateChange::identity(op.vars));
  EXPECT_TRUE(same_operator(op, pushed));
}

TEST(Transform, JacobianAndInverse) {
  CoordinateChange c = change(2, {"v1 + v2^2", "v2"}, std::vector<std::string>{"u1 - u2^2", "u2"});
  Matrix J = c.jacobian_expr();
  EXPECT_EQ(sym::print(J[0][1]), "2*v2");
  Matrix A = c.inverse_jacobian_expr();
  EXPECT_EQ(sym::print(A[0][1]), "-2*v2");
  EXPECT_EQ(c.inverse_verdict(), Verdict::ProvenPass);
}

TEST(Transform, ScalarScaling) {
  HydroOperator op = HydroOperator::zero(1, vars("u", 1));
  op.g[0][0][0] = Expr(1L);
  HydroOperator pushed = pushforward(op, change(1, {"2*v1"}, std::vector<std::string>{"u1/2"}));
  EXPECT_EQ(sym::print(pushed.g[0][0][0]), "1/4");
  EXPECT_TRUE(pushed.b[0][0][0][0].is_zero());
}

TEST(Transform, StabilizerOfRankZero) {
  HydroOperator op = catalog::instantiate("T2.3/rank0");
  CoordinateChange c = change(3, {"v1 + v3", "v2", "v3"}, std::vector<std::string>{"u1 - u3", "u2", "u3"});
  HydroOperator pushed = pushforward(op, c);
  for (const auto& row : pushed.g[0])
    for (const auto& e : row) EXPECT_TRUE(e.is_zero());
  EXPECT_TRUE(same_operator(pushed, renamed(op, c.new_vars())));
  EXPECT_TRUE(verify_invariance(op, c).passed());
}

TEST(Transform, OutsideStabilizerChangesForm) {
  // d1phi1*d2phi2 - d2phi1*d1phi2 = 2 differs from (phi3)' = 1.
  HydroOperator op = catalog::instantiate("T2.3/rank0");
  CoordinateChange c = change(3, {"2*v1", "v2", "v3"}, std::vector<std::string>{"u1/2", "u2", "u3"});
  HydroOperator pushed = pushforward(op, c);
  EXPECT_EQ(sym::print(pushed.b[0][0][1][2]), "1/2");
  EXPECT_TRUE(check_hamiltonian(pushed).passed());
}

TEST(Transform, RoundTripTwoComponent) {
  HydroOperator op = catalog::instantiate("T2.2/1");
  CoordinateChange c = change(2, {"v1 + v2^2", "v2"}, std::vector<std::string>{"u1 - u2^2", "u2"});
  ConditionReport r = verify_invariance(op, c);
  EXPECT_EQ(r.overall, Verdict::ProvenPass);
  EXPECT_EQ(r.count("roundtrip-g"), 4u);
  EXPECT_EQ(r.count("roundtrip-b"), 8u);
}

TEST(Transform, CubicReductionReadBackwards) {
  HydroOperator op = catalog::instantiate("T2.4", catalog::Params{{{"epsilon", 1}}, {}});
  CoordinateChange c = change(2, {"v1", "v2^3"});
  HydroOperator pushed = pushforward(op, c);
  EXPECT_EQ(sym::print(pushed.g[1][0][0]), "v2^3");
  EXPECT_TRUE(verify_invariance(op, c).passed());
}

TEST(Transform, DegenerateChangeRejected) {
  EXPECT_THROW(change(2, {"v1", "v1"}), ChangeError);
  EXPECT_THROW(change(2, {"v1 + v2", "v2"}, std::vector<std::string>{"u1", "u2"}), ChangeError);
  EXPECT_THROW(change(2, {"v1 + u2", "v2"}), sym::UnknownIdentifierError);
}

TEST(Transform, AbstractFunctionChange) {
  // u1 = v1 + phi(v3) preserves the last rank-1 form up to the phi' terms.
  HydroOperator op = catalog::instantiate("T2.3/rank1/4");
  nlohmann::json j = {{"forward", {{"u1", "v1 + phi"}, {"u2", "v2"}, {"u3", "v3"}}},
                      {"inverse", {{"v1", "u1 - phi(u3)"}, {"v2", "u2"}, {"v3", "u3"}}},
                      {"functions", {{{"name", "phi"}, {"args", {"v3"}}}}}};
  CoordinateChange c = change_from_json(j, op.vars);
  ConditionReport r = verify_invariance(op, c);
  EXPECT_EQ(r.overall, Verdict::ProvenPass);
  HydroOperator pushed = pushforward(op, c);
  EXPECT_EQ(pushed.functions.size(), 1u);
}

TEST(Transform, HamiltonianPreservedOnCatalog) {
  int checked = 0;
  for (const auto& fx : fixture_changes())
    for (const auto& e : catalog::list_entries()) {
      if (e.n != fx.n) continue;
      HydroOperator op = catalog::instantiate(e.id);
      ConditionReport r = verify_invariance(op, make_change(fx, op.vars));
      EXPECT_EQ(r.overall, Verdict::ProvenPass) << e.id << " under " << fx.name;
      ++checked;
    }
  EXPECT_EQ(fixture_changes().size(), 10u);
  EXPECT_GT(checked, 200);
}

// Random triangular change in n = 3 with rational coefficients.
std::vector<std::string> random_triangular(std::mt19937_64& rng, const std::string& v) {
  auto c = [&] { return "(" + std::to_string(std::uniform_int_distribution<int>(-3, 3)(rng)) + ")"; };
  auto nz = [&] {
    int x = 0;
    while (x == 0) x = std::uniform_int_distribution<int>(-3, 3)(rng);
    return "(" + std::to_string(x) + ")";
  };
  return {v + "1 + " + c() + "*" + v + "2*" + v + "3 + " + c() + "*" + v + "3^2",
          nz() + "*" + v + "2 + " + c() + "*" + v + "3^2",
          nz() + "*" + v + "3 + " + c()};
}

TEST(Transform, Functoriality) {
  std::mt19937_64 rng(11);
  HydroOperator op = catalog::instantiate("T2.7/rank2_P_5");
  for (int t = 0; t < 4; ++t) {
    CoordinateChange c1 = change(3, random_triangular(rng, "v"), {}, "u", "v");
    CoordinateChange c2 = change(3, random_triangular(rng, "w"), {}, "v", "w");
    HydroOperator two_step = pushforward(pushforward(op, c1), c2);
    HydroOperator one_step = pushforward(op, compose(c1, c2));
    EXPECT_TRUE(same_operator(two_step, one_step)) << t;
    EXPECT_TRUE(check_hamiltonian(one_step).passed()) << t;
  }
}

TEST(Transform, ComposedInverse) {
  CoordinateChange c1 = change(2, {"v1 + v2^2", "v2"}, std::vector<std::string>{"u1 - u2^2", "u2"}, "u", "v");
  CoordinateChange c2 = change(2, {"2*w1", "w2 + 1"}, std::vector<std::string>{"v1/2", "v2 - 1"}, "v", "w");
  CoordinateChange c = compose(c1, c2);
  ASSERT_TRUE(c.inverse().has_value());
  EXPECT_EQ(c.inverse_verdict(), Verdict::ProvenPass);
}

TEST(Transform, LinearChangeKeepsZeroConnection) {
  std::mt19937_64 rng(5);
  auto r = [&] { return std::to_string(std::uniform_int_distribution<int>(-4, 4)(rng)); };
  for (int t = 0; t < 20; ++t) {
    HydroOperator op = HydroOperator::zero(2, vars("u", 3));
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) op.g[a][i][j] = op.g[a][j][i] = Expr(std::stol(r()));
    std::vector<std::string> fwd{"v1 + " + r() + "*v2", "v2 + " + r() + "*v3", "v3 + " + r() + "*v1"};
    CoordinateChange c = [&] {
      while (true) {
        try {
          return change(3, fwd);
        } catch (const ChangeError&) {
          fwd[2] = "v3 + " + r() + "*v1";
        }
      }
    }();
    HydroOperator pushed = pushforward(op, c);
    for (const auto& t3 : pushed.b)
      for (const auto& m : t3)
        for (const auto& row : m)
          for (const auto& e : row) EXPECT_TRUE(e.is_zero());
  }
}

TEST(Transform, LinearAxisChange) {
  HydroOperator op = catalog::instantiate("T2.7/rank2_P_6");
  HydroOperator mixed = linear_axis_change(op, {{1, 0}, {mpq_class(-1, 2), 1}});
  EXPECT_TRUE(check_hamiltonian(mixed).passed());
  EXPECT_THROW(linear_axis_change(op, {{1, 2}, {2, 4}}), std::invalid_argument);
  HydroOperator swapped = linear_axis_change(op, {{0, 1}, {1, 0}});
  EXPECT_TRUE(same(swapped.g[0][0][1], op.g[1][0][1]));
}

TEST(Transform, ChangeJsonRoundTrip) {
  CoordinateChange c = change(2, {"v1 + v2^2", "v2"}, std::vector<std::string>{"u1 - u2^2", "u2"});
  nlohmann::json j = change_to_json(c);
  EXPECT_EQ(j["forward"]["u1"], "v1 + v2^2");
  CoordinateChange back = change_from_json(j, c.old_vars());
  EXPECT_EQ(back.forward()[0], c.forward()[0]);
  EXPECT_THROW(change_from_json({{"forward", {{"u1", "v1"}}}}, c.old_vars()), InputError);
}

}  // namespace
