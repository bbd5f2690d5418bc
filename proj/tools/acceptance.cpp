// Acceptance run: one line per criterion, exit 0 only if all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "hydro/catalog.hpp"
#include "hydro/hamsys.hpp"
#include "hydro/integrability.hpp"
#include "hydro/mutation.hpp"
#include "hydro/transform.hpp"
#include "support/random_expr.hpp"

using namespace hydro;
using sym::Expr;
using sym::ZeroKind;

namespace {

// Pinned budgets and thresholds.
constexpr double kCatalogSeconds = 60.0;
constexpr double kFktSeconds = 5.0;
constexpr int kRandomSpecializations = 3;
constexpr std::size_t kExpectedEntries = 32;
constexpr int kMutationPercent = 95;
constexpr std::size_t kFixtureChanges = 10;
constexpr int kPropertyCases = 1000;
constexpr std::uint64_t kSeed = 20240917;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

bool all_proven_zero(const ConditionReport& r) {
  for (const auto& x : r.residuals)
    if (x.zero.kind != ZeroKind::ProvenZero) return false;
  return true;
}

bool same(const Expr& a, const Expr& b) { return sym::normalize(sym::sub(a, b)).is_zero(); }

struct Line {
  bool pass;
  std::string detail;
};

Line catalog_soundness() {
  auto start = Clock::now();
  const auto& entries = catalog::list_entries();
  std::mt19937_64 rng(kSeed);
  std::size_t runs = 0;
  std::vector<std::string> bad;
  for (const auto& e : entries) {
    std::vector<catalog::Params> params{catalog::default_params(e)};
    for (int k = 0; k < kRandomSpecializations; ++k) params.push_back(catalog::random_params(e, rng));
    for (std::size_t k = 0; k < params.size(); ++k) {
      ++runs;
      if (!all_proven_zero(check_hamiltonian(catalog::instantiate(e.id, params[k]))))
        bad.push_back(e.id + (k ? "#" + std::to_string(k) : ""));
    }
  }
  double t = since(start);
  std::ostringstream s;
  s << entries.size() << " entries, " << runs << " instances, " << bad.size() << " not ProvenZero, " << t << " s";
  for (const auto& b : bad) s << " " << b;
  return {entries.size() == kExpectedEntries && bad.empty() && t < kCatalogSeconds, s.str()};
}

Line degeneracy_and_rank() {
  int checked = 0;
  std::vector<std::string> bad;
  for (const auto& e : catalog::list_entries()) {
    if (e.d != 2) continue;
    ++checked;
    HydroOperator op = catalog::instantiate(e.id);
    auto rank = generic_rank(op);
    if (!pencil_determinant(op).empty() || rank.rank != e.rank_label || rank.verdict != Verdict::ProvenPass)
      bad.push_back(e.id);
  }
  std::ostringstream s;
  s << checked << " 2D entries, " << bad.size() << " mismatches";
  for (const auto& b : bad) s << " " << b;
  return {checked > 0 && bad.empty(), s.str()};
}

Line mutation_sensitivity() {
  int total = 0;
  int caught = 0;
  std::vector<std::string> survivors;
  for (const auto& e : catalog::list_entries()) {
    HydroOperator op = catalog::instantiate(e.id);
    for (const auto& m : mutation_set(op)) {
      ++total;
      auto r = check_hamiltonian(apply_mutation(op, m));
      bool hit = false;
      for (const auto& x : r.residuals) hit = hit || x.zero.kind == ZeroKind::ProvenNonzero;
      if (hit)
        ++caught;
      else
        survivors.push_back(e.id + " " + m.describe());
    }
  }
  for (const auto& s : survivors) std::cerr << "  surviving mutant: " << s << "\n";
  std::ostringstream s;
  s << caught << "/" << total << " mutants caught, " << survivors.size() << " survivors logged";
  return {total > 0 && caught * 100 >= total * kMutationPercent, s.str()};
}

Line compatibility() {
  int checked = 0;
  std::vector<std::string> bad;
  for (const auto& e : catalog::list_entries()) {
    if (e.d != 2) continue;
    ++checked;
    HydroOperator op = catalog::instantiate(e.id);
    if (!all_proven_zero(pencil_compatibility(op.axis(0), op.axis(1)))) bad.push_back(e.id);
  }
  std::ostringstream s;
  s << checked << " 2D entries, " << bad.size() << " incompatible";
  for (const auto& b : bad) s << " " << b;
  return {checked > 0 && bad.empty(), s.str()};
}

Line gas_pipeline() {
  HydroOperator op = catalog::instantiate("P_gas");
  sym::Workspace ws = op.workspace();
  ws.add_function("k", {"u1"});
  auto P = [&](const std::string& t) { return ws.parse(t); };
  auto sys = hamsys::generate_system(op, P("u1*(u2^2 + u3^2)/2 + k"), "P_gas");
  // c^2 = rho k_rhorho, entered as c^2/rho.
  Expr c2 = P("u1*k_11");
  Expr c2r = sym::div(c2, P("u1"));
  const Expr z(0L);
  const Matrix A{{P("u2"), P("u1"), z}, {c2r, P("u2"), z}, {z, z, P("u2")}};
  const Matrix B{{P("u3"), z, P("u1")}, {z, P("u3"), z}, {c2r, z, P("u3")}};
  int mismatched = 0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) mismatched += !same(sys.A[i][k], A[i][k]) + !same(sys.B[i][k], B[i][k]);
  Expr lam(hamsys::lambda_parameter());
  Expr mu(hamsys::mu_parameter());
  Expr w = sym::sum({Expr(1L), sym::mul(lam, P("u2")), sym::mul(mu, P("u3"))});
  Expr product = sym::mul(w, sym::sub(sym::pow(w, 2), sym::mul(c2, sym::add(sym::pow(lam, 2), sym::pow(mu, 2)))));
  bool factors = same(hamsys::dispersion(sys).to_expr(), product);
  std::ostringstream s;
  s << mismatched << " of 18 A/B entries differ; dispersion " << (factors ? "equals" : "differs from")
    << " w(w^2 - c^2(lambda^2 + mu^2))";
  return {mismatched == 0 && factors, s.str()};
}

Line fkt_examples() {
  sym::Workspace ws;
  for (Symbol v : integrability::lagrangian_variables()) ws.add_variable(v.name());
  struct Case {
    std::string f;
    bool integrable;
  };
  bool ok = true;
  std::ostringstream s;
  for (const Case& c : {Case{"a^2 + b^2 - 2*exp(c)", true}, Case{"a^2 + b^2 + c^2", true}, Case{"a^4 + b^2 + c^2", false}}) {
    auto start = Clock::now();
    auto rep = integrability::fkt_residual(ws.parse(c.f));
    double t = since(start);
    bool good = t < kFktSeconds;
    if (c.integrable) {
      good = good && all_proven_zero(rep.checks) && rep.integrable();
    } else {
      auto first = rep.first_nonzero();
      good = good && first && *first == integrability::MultiIndex{4, 0, 0} &&
             same(rep.residual.coefficient(*first), ws.parse("-1152*a^2")) && rep.checks.overall == Verdict::Fail;
    }
    ok = ok && good;
    s << "[" << c.f << ": " << (good ? "ok" : "wrong") << ", " << t << " s] ";
  }
  return {ok, s.str()};
}

Line transform_invariance() {
  int checked = 0;
  std::vector<std::string> bad;
  for (const auto& fx : fixture_changes())
    for (const auto& e : catalog::list_entries()) {
      if (e.n != fx.n) continue;
      HydroOperator op = catalog::instantiate(e.id);
      ++checked;
      if (!all_proven_zero(verify_invariance(op, make_change(fx, op.vars)))) bad.push_back(e.id + " under " + fx.name);
    }
  std::ostringstream s;
  s << fixture_changes().size() << " changes, " << checked << " operator/change pairs, " << bad.size() << " failures";
  for (const auto& b : bad) s << "; " << b;
  return {fixture_changes().size() == kFixtureChanges && checked > 0 && bad.empty(), s.str()};
}

Line theorem_shapes() {
  using hamsys::Shape;
  // Buckets allowed by the theorem per rank, and the bucket each entry reaches.
  const std::set<Shape> rank2{Shape::Decoupled1D, Shape::Decoupled1, Shape::Decoupled2, Shape::Decoupled3,
                              Shape::EulerLagrange};
  const std::vector<std::pair<std::string, Shape>> table{
      {"T2.5/rank0_P/1", Shape::Trivial},          {"T2.5/rank0_P/2", Shape::Trivial},
      {"T2.6/rank1_P_1/1", Shape::Transport1D},    {"T2.6/rank1_P_1/2", Shape::Transport1D},
      {"T2.6/rank1_P_2/1", Shape::Transport1D},    {"T2.6/rank1_P_2/2", Shape::Transport1D},
      {"T2.7/rank2_P_1/1", Shape::Decoupled3},     {"T2.7/rank2_P_4/2", Shape::Decoupled3},
      {"T2.7/rank2_P_1/2", Shape::EulerLagrange},  {"T2.7/rank2_P_4/1", Shape::EulerLagrange},
      {"T2.7/rank2_P_3/2", Shape::EulerLagrange},  {"P_gas", Shape::EulerLagrange},
      {"T2.7/rank2_P_2/1", Shape::Decoupled1},     {"T2.7/rank2_P_2/2", Shape::Decoupled2},
      {"T2.7/rank2_P_3/1", Shape::Decoupled2},     {"T2.7/rank2_P_5", Shape::Decoupled1},
      {"T2.7/rank2_P_6", Shape::Decoupled1},
  };
  int agree = 0;
  std::ostringstream s;
  for (const auto& [id, expected] : table) {
    const auto& e = catalog::find_entry(id);
    HydroOperator op = catalog::instantiate(id);
    auto r = hamsys::shape_classify(hamsys::generate_system(op, hamsys::abstract_density(op).h, id));
    bool allowed = e.rank_label == 0   ? r.shape == Shape::Trivial
                   : e.rank_label == 1 ? r.shape == Shape::Transport1D
                                       : rank2.count(r.shape) > 0;
    if (allowed && r.shape == expected)
      ++agree;
    else
      s << id << " gave " << hamsys::to_string(r.shape) << "; ";
  }
  s << agree << "/" << table.size() << " agree";
  return {agree == static_cast<int>(table.size()), s.str()};
}

Line property_suites() {
  sym::Workspace ws;
  Symbol u1 = ws.add_variable("u1");
  Symbol u2 = ws.add_variable("u2");
  Symbol u3 = ws.add_variable("u3");
  const sym::FunctionDef* f = ws.add_function("f", {"u2", "u3"});
  const sym::FunctionDef* q = ws.add_function("q", {"u3"});
  const std::vector<Symbol> vars{u1, u2, u3};
  auto zero = [](const Expr& e) { return sym::normalize(e).is_zero(); };
  auto draw = [](hydro::testing::ExprGen& g, int depth) {
    while (true) {
      Expr e = g(depth);
      try {
        sym::to_fraction(e);
        return e;
      } catch (const std::domain_error&) {
      }
    }
  };
  struct Suite {
    std::string name;
    std::function<bool(hydro::testing::ExprGen&, int)> holds;
    bool transcendental = false;
  };
  std::vector<Suite> suites{
      {"linearity",
       [&](auto& g, int i) {
         Expr a = draw(g, 3), b = draw(g, 3);
         Symbol v = vars[i % 3];
         return zero(sym::sub(sym::sub(sym::differentiate(sym::add(a, b), v), sym::differentiate(a, v)),
                              sym::differentiate(b, v)));
       }},
      {"leibniz",
       [&](auto& g, int i) {
         Expr a = draw(g, 3), b = draw(g, 3);
         Symbol v = vars[i % 3];
         Expr rhs = sym::add(sym::mul(a, sym::differentiate(b, v)), sym::mul(b, sym::differentiate(a, v)));
         return zero(sym::sub(sym::differentiate(sym::mul(a, b), v), rhs));
       }},
      {"clairaut",
       [&](auto& g, int i) {
         Expr e = draw(g, 3);
         Symbol a = vars[i % 3], b = vars[(i + 1) % 3];
         return zero(sym::sub(sym::differentiate(sym::differentiate(e, a), b),
                              sym::differentiate(sym::differentiate(e, b), a)));
       }},
      {"idempotence",
       [&](auto& g, int) {
         auto once = sym::normalize(draw(g, 4));
         return sym::normalize(sym::to_expr(once)) == once;
       }},
      {"round-trip", [&](auto& g, int) {
         Expr e = g(4);
         return ws.parse(sym::print(e)) == e;
       }, true}};
  bool ok = true;
  std::ostringstream s;
  std::uint64_t seed = kSeed;
  for (const auto& suite : suites) {
    hydro::testing::ExprGen g(seed++, vars, {f, q}, suite.transcendental);
    int failures = 0;
    for (int i = 0; i < kPropertyCases; ++i) {
      try {
        failures += !suite.holds(g, i);
      } catch (const std::exception&) {
        ++failures;
      }
    }
    ok = ok && failures == 0;
    s << suite.name << " " << kPropertyCases - failures << "/" << kPropertyCases << " ";
  }
  return {ok, s.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Line()>>> criteria{
      {"catalog soundness", catalog_soundness},   {"degeneracy and rank", degeneracy_and_rank},
      {"mutation sensitivity", mutation_sensitivity}, {"pencil compatibility", compatibility},
      {"gas-dynamics pipeline", gas_pipeline},    {"FKT examples", fkt_examples},
      {"transform invariance", transform_invariance}, {"reduction shapes", theorem_shapes},
      {"property suites", property_suites},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line l;
    try {
      l = criteria[i].second();
    } catch (const std::exception& e) {
      l = {false, std::string("exception: ") + e.what()};
    }
    failed += !l.pass;
    std::cout << (l.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << l.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
