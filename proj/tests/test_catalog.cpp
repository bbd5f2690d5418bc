#include <gtest/gtest.h>

#include <set>

#include "hydro/catalog.hpp"
#include "hydro/mutation.hpp"

using namespace hydro;
using namespace hydro::catalog;
using sym::ZeroKind;

namespace {

std::map<std::string, int> count_by_prefix() {
  std::map<std::string, int> out;
  for (const auto& e : list_entries()) {
    std::string key = e.id.substr(0, e.id.find('/'));
    ++out[key];
  }
  return out;
}

bool all_residuals_proven_zero(const ConditionReport& r) {
  for (const auto& x : r.residuals)
    if (x.zero.kind != ZeroKind::ProvenZero) return false;
  return true;
}

TEST(Catalog, EnumeratesEveryDisplayedForm) {
  EXPECT_EQ(list_entries().size(), 32u);
  auto c = count_by_prefix();
  EXPECT_EQ(c["T2.2"], 2);
  EXPECT_EQ(c["T2.3"], 8);
  EXPECT_EQ(c["T2.4"], 1);
  EXPECT_EQ(c["T2.5"], 2);
  EXPECT_EQ(c["T2.6"], 4);
  EXPECT_EQ(c["T2.7"], 10);
  EXPECT_EQ(c["P_gas"], 1);
  EXPECT_EQ(c["A"], 4);
  std::set<std::string> ids;
  for (const auto& e : list_entries()) EXPECT_TRUE(ids.insert(e.id).second) << e.id;
}

TEST(Catalog, RankZeroHasNoMetric) {
  HydroOperator op = instantiate("T2.3/rank0");
  for (const auto& row : op.g[0])
    for (const auto& x : row) EXPECT_TRUE(x.is_zero());
}

TEST(Catalog, KappaSlot) {
  const CatalogEntry& e = find_entry("T2.7/rank2_P_6");
  ASSERT_NE(e.slot("kappa"), nullptr);
  EXPECT_EQ(e.slot("kappa")->kind, SlotKind::Constant);
}

TEST(Catalog, InstantiateTwoComponentForm) {
  HydroOperator op = instantiate("T2.4", Params{{{"epsilon", 1}}, {}});
  EXPECT_EQ(sym::print(op.g[1][0][0]), "u2");
  EXPECT_EQ(sym::print(op.b[1][0][0][1]), "1/2");
  EXPECT_EQ(sym::print(op.b[0][0][1][1]), "-1/u1");
  EXPECT_EQ(sym::print(op.b[1][0][1][1]), "-u2/u1");
  EXPECT_TRUE(op.constants.empty());
}

TEST(Catalog, InstantiateKeepsAbstractFunctions) {
  HydroOperator op = instantiate("T2.6/rank1_P_1/2", Params{});
  ASSERT_EQ(op.functions.size(), 2u);
  EXPECT_EQ(sym::print(op.g[1][0][0]), "f(u2,u3)");
  EXPECT_EQ(sym::print(op.b[0][0][2][2]), "-1/u1");
  EXPECT_TRUE(check_hamiltonian(op).passed());
}

TEST(Catalog, InstantiateRejectsBadParameters) {
  EXPECT_THROW(instantiate("T2.4", Params{}), InputError);
  EXPECT_THROW(instantiate("T2.4", Params{{{"epsilon", 2}}, {}}), InputError);
  EXPECT_THROW(instantiate("T2.4", Params{{{"epsilon", 1}, {"kappa", 1}}, {}}), InputError);
  EXPECT_THROW(instantiate("T2.4", Params{{{"epsilon", 1}}, {{"f", "u2"}}}), InputError);
  EXPECT_THROW(instantiate("T2.6/rank1_P_1/2", Params{{}, {{"f", "u1"}}}), InputError);
  EXPECT_THROW(instantiate("no/such/entry"), InputError);
}

TEST(Catalog, ZeroSlotsGiveTrivialPair) {
  Params p{{{"epsilon", 0}}, {{"p", "0"}, {"q", "0"}, {"r", "0"}}};
  HydroOperator op = instantiate("T2.7/rank2_P_2/1", p);
  EXPECT_TRUE(check_hamiltonian(op).passed());
  EXPECT_TRUE(is_trivial_pair(op).trivial);
  p.functions["q"] = "u3";
  EXPECT_FALSE(is_trivial_pair(instantiate("T2.7/rank2_P_2/1", p)).trivial);
}

TEST(Catalog, VerifyAllDefaults) {
  Summary s = verify_all();
  EXPECT_EQ(s.entries.size(), 32u);
  for (const auto& f : s.failures) ADD_FAILURE() << f;
  for (const auto& e : s.entries) EXPECT_TRUE(all_residuals_proven_zero(e.hamiltonian)) << e.id;
}

TEST(Catalog, RankFiveEntry) {
  EntryReport r = verify_entry("T2.7/rank2_P_5", Params{});
  EXPECT_EQ(r.rank.rank, 2);
  EXPECT_TRUE(r.degeneracy.degenerate);
  ASSERT_TRUE(r.triviality.has_value());
  EXPECT_FALSE(r.triviality->trivial);
}

TEST(Catalog, GasHasDensityPoles) {
  HydroOperator op = instantiate("P_gas");
  EXPECT_EQ(sym::print(op.b[0][1][2][2]), "-1/u1");
  EXPECT_TRUE(verify_entry("P_gas", Params{}).passed());
}

TEST(Catalog, EpsilonBothValues) {
  for (const auto& e : list_entries()) {
    if (!e.slot("epsilon")) continue;
    for (int eps : {0, 1}) {
      Params p = default_params(e);
      p.constants["epsilon"] = eps;
      EXPECT_TRUE(check_hamiltonian(instantiate(e, p)).passed()) << e.id << " epsilon=" << eps;
    }
  }
}

TEST(Catalog, KappaZeroAndNonzero) {
  for (const char* id : {"T2.7/rank2_P_6", "A/rk2_2D_2"})
    for (int k : {0, 2, -3}) {
      Params p{{{"kappa", k}}, {}};
      EXPECT_TRUE(check_hamiltonian(instantiate(id, p)).passed()) << id << " kappa=" << k;
    }
}

TEST(Catalog, FixedConcreteSpecialization) {
  for (const auto& e : list_entries()) {
    Params p = default_params(e);
    for (const auto& s : e.slots) {
      if (s.kind != SlotKind::Function) continue;
      if (s.name == "f") p.functions[s.name] = "u2 + u3";
      else if (s.name == "h") p.functions[s.name] = "u2*u3";
      else if (s.args.size() == 1) p.functions[s.name] = "u3";
      else p.functions[s.name] = "u2 + 2*u3 + 1";
    }
    HydroOperator op = instantiate(e, p);
    EXPECT_TRUE(op.functions.empty()) << e.id;
    EXPECT_TRUE(all_residuals_proven_zero(check_hamiltonian(op))) << e.id;
  }
}

TEST(Catalog, RandomSpecializations) {
  std::mt19937_64 rng(31);
  for (const auto& e : list_entries())
    for (int t = 0; t < 3; ++t) {
      Params p = random_params(e, rng);
      EXPECT_TRUE(all_residuals_proven_zero(check_hamiltonian(instantiate(e, p)))) << e.id << " trial " << t;
    }
}

TEST(Catalog, RankLabelsAndDegeneracy) {
  for (const auto& e : list_entries()) {
    HydroOperator op = instantiate(e.id);
    EXPECT_TRUE(pencil_determinant(op).empty()) << e.id;
    EXPECT_EQ(generic_rank(op).rank, e.rank_label) << e.id;
  }
}

TEST(Catalog, CompatibilityOfParts) {
  for (const auto& e : list_entries()) {
    if (e.d != 2) continue;
    HydroOperator op = instantiate(e.id);
    ConditionReport r = pencil_compatibility(op.axis(0), op.axis(1));
    EXPECT_EQ(r.overall, Verdict::ProvenPass) << e.id;
  }
}

TEST(Catalog, VerbatimSixthFormIsFlagged) {
  HydroOperator op = instantiate("T2.7/rank2_P_6/verbatim", Params{{{"kappa", 2}}, {}});
  ConditionReport r = check_skew(op);
  bool at_11 = false;
  for (const auto& x : r.residuals)
    if (x.zero.kind == ZeroKind::ProvenNonzero && x.indices[1] == x.indices[2]) at_11 = true;
  EXPECT_TRUE(at_11);
  EXPECT_EQ(check_hamiltonian(op).overall, Verdict::Fail);
}

TEST(Catalog, SecondGeneralRankTwoMember) {
  EXPECT_TRUE(check_hamiltonian(instantiate("A/rk2_2D_1/2", Params{})).passed());
  EXPECT_EQ(list_entries().end(), std::find_if(list_entries().begin(), list_entries().end(),
                                               [](const CatalogEntry& e) { return e.id == "A/rk2_2D_1/2"; }));
}

TEST(Catalog, ExportSerializesAbstractSlots) {
  nlohmann::json j = export_entry("T2.6/rank1_P_1/2", Params{});
  ASSERT_EQ(j["functions"].size(), 2u);
  EXPECT_EQ(j["functions"][0]["args"], (std::vector<std::string>{"u2", "u3"}));
  HydroOperator back = operator_from_json(j);
  EXPECT_TRUE(check_hamiltonian(back).passed());
}

TEST(Mutations, MostMutantsAreCaught) {
  int total = 0;
  int caught = 0;
  for (const auto& e : list_entries()) {
    HydroOperator op = instantiate(e.id);
    for (const auto& m : mutation_set(op)) {
      ++total;
      ConditionReport r = check_hamiltonian(apply_mutation(op, m));
      bool hit = false;
      for (const auto& x : r.residuals)
        if (x.zero.kind == ZeroKind::ProvenNonzero) hit = true;
      if (hit)
        ++caught;
      else
        std::cout << "survivor: " << e.id << " " << m.describe() << "\n";
    }
  }
  std::cout << caught << "/" << total << " mutants caught\n";
  EXPECT_GT(total, 0);
  EXPECT_GE(caught * 100, total * 95);
}

}  // namespace
