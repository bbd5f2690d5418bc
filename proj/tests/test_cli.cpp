#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hydro/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = hydro::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(HYDRO_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST(Cli, CheckGasPasses) {
  auto r = run({"check", data("gas.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("a7"), std::string::npos);
}

TEST(Cli, FktQuarticFailsOnFirstCoefficient) {
  auto r = run({"fkt", data("quartic.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("first nonzero coefficient da^4: -1152*a^2"), std::string::npos) << r.out;
}

TEST(Cli, FktBoyerFinleyAndWavePass) {
  EXPECT_EQ(run({"fkt", data("boyer_finley.json")}).code, 0);
  EXPECT_EQ(run({"fkt", data("wave.json")}).code, 0);
}

TEST(Cli, FktDegenerateIsInapplicable) {
  auto f = temp_file("hydro_cli_degenerate.json", R"({"f": "a + b*c"})");
  auto r = run({"fkt", f});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("inapplicable"), std::string::npos);
}

TEST(Cli, CatalogVerifyAllHasOneRowPerEntry) {
  auto r = run({"--format", "json", "catalog", "verify", "--all"});
  EXPECT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["result"]["count"], 32);
  EXPECT_EQ(j["verdict"], "ProvenPass");
}

TEST(Cli, CatalogVerifyRandomUsesSeed) {
  auto a = run({"--format", "json", "--seed", "7", "catalog", "verify", "T2.7/rank2_P_6", "--random", "2"});
  auto b = run({"--format", "json", "--seed", "7", "catalog", "verify", "T2.7/rank2_P_6", "--random", "2"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["result"]["count"], 3);
}

TEST(Cli, CatalogExportRoundTripsThroughCheck) {
  auto out = (std::filesystem::temp_directory_path() / "hydro_cli_p6.json").string();
  auto r = run({"catalog", "export", "T2.7/rank2_P_6", "--param", "kappa=3/2", "-o", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"check", out}).code, 0);
  EXPECT_EQ(run({"catalog", "export", "T2.7/rank2_P_6", "--param", "nope=1"}).code, 3);
  EXPECT_EQ(run({"catalog", "export", "no-such-entry"}).code, 3);
}

TEST(Cli, JsonIsDeterministic) {
  std::vector<std::string> args{"--format", "json", "pencil", data("gas.json")};
  auto a = run(args);
  auto b = run(args);
  EXPECT_EQ(a.out, b.out);
  auto j = json::parse(a.out);
  for (const char* key : {"command", "inputs", "verdict", "exit_code", "result"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_FALSE(j.contains("seconds"));
  EXPECT_EQ(j["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(j["result"]["rank"], 2);
  EXPECT_EQ(j["result"]["degenerate"], true);
}

TEST(Cli, TimingOnlyWhenAsked) {
  auto j = json::parse(run({"--format", "json", "--timing", "fkt", data("wave.json")}).out);
  EXPECT_TRUE(j.contains("seconds"));
}

TEST(Cli, TransformWritesOperator) {
  auto out = (std::filesystem::temp_directory_path() / "hydro_cli_pushed.json").string();
  auto r = run({"transform", data("gas.json"), data("shear_change.json"), "-o", out});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_EQ(run({"check", out}).code, 0);
}

TEST(Cli, SystemAndDispersion) {
  auto r = run({"--format", "json", "system", data("gas.json"), data("gas_density.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["result"]["A"][0][0], "u2");
  EXPECT_EQ(j["result"]["B"][0][2], "u1");
  auto abs = json::parse(run({"--format", "json", "system", data("gas.json")}).out);
  EXPECT_EQ(abs["result"]["shape"]["shape"], "euler-lagrange-reducible");
  auto d = json::parse(run({"--format", "json", "dispersion", data("gas.json"), data("gas_density.json")}).out);
  EXPECT_EQ(d["result"]["coefficients"]["1"], "1");
}

TEST(Cli, Reduction) {
  EXPECT_EQ(run({"reduction", data("gas.json"), data("gas_density.json"), data("constant_state.json")}).code, 0);
  auto bad = temp_file("hydro_cli_cand.json", R"({"m": 1, "u": ["R1", "0", "0"], "lambda": ["0"], "mu": ["0"]})");
  EXPECT_EQ(run({"reduction", data("gas.json"), data("gas_density.json"), bad}).code, 1);
  auto twin = temp_file("hydro_cli_twin.json",
                        R"({"m": 2, "u": ["1", "0", "0"], "lambda": ["1", "1"], "mu": ["0", "0"]})");
  EXPECT_EQ(run({"reduction", data("gas.json"), data("gas_density.json"), twin}).code, 3);
}

TEST(Cli, Legendre) {
  auto r = run({"--format", "json", "legendre", data("gas_legendre.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  auto wrong = temp_file("hydro_cli_leg.json", R"({"h": "rho^2/2", "inverse": "2*rt"})");
  EXPECT_EQ(run({"legendre", wrong}).code, 1);
}

TEST(Cli, InputErrorsExitThree) {
  EXPECT_EQ(run({"check", "/nonexistent/op.json"}).code, 3);
  EXPECT_EQ(run({"--bogus", "check", data("gas.json")}).code, 3);
  EXPECT_EQ(run({}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  EXPECT_EQ(run({"--format", "xml", "check", data("gas.json")}).code, 3);
  auto broken = temp_file("hydro_cli_broken.json", "{ not json");
  EXPECT_EQ(run({"check", broken}).code, 3);
  auto badexpr = temp_file("hydro_cli_badexpr.json", R"({"f": "a +* b"})");
  EXPECT_EQ(run({"fkt", badexpr}).code, 3);
}

TEST(Cli, HelpExitsZero) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("reduction"), std::string::npos);
}

TEST(Cli, ProbabilisticOnlyExitsTwo) {
  auto change = temp_file("hydro_cli_sqrt.json", R"J({
    "variables": ["v1", "v2", "v3"],
    "forward": {"u1": "v1^2", "u2": "v2", "u3": "v3"},
    "inverse": {"v1": "sqrt(u1)", "v2": "u2", "v3": "u3"}})J");
  auto r = run({"transform", data("gas.json"), change});
  EXPECT_EQ(r.code, 2) << r.out;
}

TEST(Cli, ResidualTruncationKeepsDigest) {
  auto f = temp_file("hydro_cli_big.json", R"J({"f": "a^6 + b^5*c + c^4 + a*b*c^3 + exp(a*b)"})J");
  auto r = run({"--format", "json", "--max-nodes", "5", "fkt", f});
  EXPECT_EQ(r.code, 1);
  auto j = json::parse(r.out);
  EXPECT_NE(j["result"]["H"].get<std::string>().find("sha256"), std::string::npos);
}
