#include "hydro/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "hydro/catalog.hpp"
#include "hydro/hamsys.hpp"
#include "hydro/integrability.hpp"
#include "hydro/operator_io.hpp"
#include "hydro/transform.hpp"

namespace hydro::cli {

using nlohmann::json;

namespace {

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return s.str();
}

struct Settings {
  std::string format = "text";
  unsigned samples = 20;
  std::uint64_t seed = 20240917;
  unsigned precision = 64;
  std::size_t max_nodes = 200;
  std::size_t max_residuals = 20;
  bool timing = false;
  bool color = false;

  sym::ZeroPolicy policy() const {
    sym::ZeroPolicy p;
    p.samples = samples;
    p.seed = seed;
    p.precision = precision;
    return p;
  }
  CheckOptions check_options() const {
    CheckOptions o;
    o.policy = policy();
    return o;
  }
};

/// What a command hands back for printing.
struct Outcome {
  Verdict verdict = Verdict::ProvenPass;
  json result = json::object();
  std::vector<std::string> lines;
};

class Session {
 public:
  explicit Session(const Settings& s) : s_(s) {}

  /// Reads a file and records its digest.
  std::string input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    inputs_.push_back({{"path", path}, {"sha256", sha256_hex(buf.str())}});
    return path;
  }

  const json& inputs() const { return inputs_; }
  const Settings& settings() const { return s_; }

  /// Bounded pretty-print; large values keep a digest of the full form.
  json expr(const Expr& e) const {
    std::string full = sym::print(e);
    std::size_t nodes = sym::node_count(e);
    if (nodes <= s_.max_nodes) return full;
    std::string head = full.substr(0, 160);
    return head + "... [" + std::to_string(nodes) + " nodes, sha256 " + sha256_hex(full).substr(0, 16) + "]";
  }

  json residual(const Residual& r) const {
    json j{{"relation", r.relation}, {"indices", r.indices}, {"verdict", to_string(r.verdict)},
           {"zero", sym::to_string(r.zero.kind)}, {"value", expr(r.value)}};
    if (!r.zero.witness.empty()) j["witness"] = r.zero.witness;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
  }

  /// Per-relation verdicts plus the residuals that are not ProvenZero.
  json report(const ConditionReport& rep, std::vector<std::string>& lines, const std::string& indent = "") const {
    json rel = json::object();
    for (const auto& [name, v] : rep.by_relation()) {
      rel[name] = {{"count", rep.count(name)}, {"verdict", to_string(v)}};
      lines.push_back(indent + pad(name, 14) + paint(v) + "  (" + std::to_string(rep.count(name)) + " residuals)");
    }
    json bad = json::array();
    std::size_t shown = 0;
    for (const auto& r : rep.residuals) {
      if (r.zero.kind == sym::ZeroKind::ProvenZero && r.verdict == Verdict::ProvenPass) continue;
      if (shown++ >= s_.max_residuals) continue;
      bad.push_back(residual(r));
      std::string idx;
      for (int i : r.indices) idx += (idx.empty() ? "" : ",") + std::to_string(i);
      lines.push_back(indent + "  " + r.relation + "[" + idx + "] " + sym::to_string(r.zero.kind) + ": " +
                      bad.back()["value"].get<std::string>());
    }
    if (shown > s_.max_residuals)
      lines.push_back(indent + "  ... " + std::to_string(shown - s_.max_residuals) + " more");
    return {{"overall", to_string(rep.overall)}, {"relations", rel}, {"residuals", bad}, {"not_proven_zero", shown}};
  }

  std::string paint(Verdict v) const {
    std::string t = to_string(v);
    if (!s_.color) return t;
    const char* code = v == Verdict::ProvenPass ? "32" : v == Verdict::Fail ? "31" : "33";
    return std::string("\033[") + code + "m" + t + "\033[0m";
  }

  static std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  }

 private:
  const Settings& s_;
  json inputs_ = json::array();
};

Verdict verdict_max(std::initializer_list<Verdict> vs) {
  Verdict out = Verdict::ProvenPass;
  for (Verdict v : vs) out = combine(out, v);
  return out;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::ProvenPass: return Pass;
    case Verdict::Fail: return Failed;
    default: return Inconclusive;
  }
}

json matrix_json(const Session& s, const Matrix& m) {
  json out = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& e : row) r.push_back(s.expr(e));
    out.push_back(r);
  }
  return out;
}

void matrix_lines(const std::string& name, const json& m, std::vector<std::string>& lines) {
  lines.push_back(name + " =");
  for (const auto& row : m) {
    std::string line = "  [";
    for (std::size_t k = 0; k < row.size(); ++k) line += (k ? ", " : "") + row[k].get<std::string>();
    lines.push_back(line + "]");
  }
}

sym::Number parse_number(const std::string& text) {
  sym::Workspace ws;
  try {
    return sym::evaluate(ws.parse(text), sym::Point{});
  } catch (const std::exception& e) {
    throw InputError("not a number: '" + text + "'");
  }
}

std::vector<sym::Number> parse_numbers(const std::string& list) {
  std::vector<sym::Number> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  return out;
}

catalog::Params parse_params(const catalog::CatalogEntry& e, const std::vector<std::string>& assignments) {
  catalog::Params p = catalog::default_params(e);
  for (const auto& a : assignments) {
    auto eq = a.find('=');
    if (eq == std::string::npos) throw InputError("parameter '" + a + "' must look like name=value");
    std::string name = a.substr(0, eq);
    std::string value = a.substr(eq + 1);
    const catalog::Slot* slot = e.slot(name);
    if (!slot) throw InputError("entry " + e.id + " has no slot '" + name + "'");
    if (slot->kind == catalog::SlotKind::Function) {
      p.functions[name] = value;
    } else {
      sym::Number v = parse_number(value);
      if (!v.is_exact()) throw InputError("slot '" + name + "' needs a rational value");
      p.constants[name] = v.exact();
    }
  }
  return p;
}

// ---- commands ----

Outcome cmd_check(Session& s, const std::string& path) {
  HydroOperator op = load_operator(s.input(path));
  Outcome o;
  auto rep = check_hamiltonian(op, s.settings().check_options());
  o.lines.push_back("operator: d=" + std::to_string(op.d) + ", n=" + std::to_string(op.n));
  o.result = {{"d", op.d}, {"n", op.n}, {"hamiltonian", s.report(rep, o.lines)}};
  o.verdict = rep.overall;
  return o;
}

Outcome cmd_pencil(Session& s, const std::string& path) {
  HydroOperator op = load_operator(s.input(path));
  auto policy = s.settings().policy();
  Outcome o;
  ParamPolynomial det = pencil_determinant(op);
  json coeffs = json::object();
  for (const auto& [exps, c] : det.coefficients) coeffs[det.monomial_string(exps)] = s.expr(det.coefficient_expr(exps));
  auto deg = is_degenerate(op, policy);
  auto rank = generic_rank(op, policy);
  o.result = {{"determinant", coeffs},
              {"degenerate", deg.degenerate},
              {"degeneracy_verdict", to_string(deg.verdict)},
              {"rank", rank.rank},
              {"rank_verdict", to_string(rank.verdict)}};
  if (deg.certificate) o.result["certificate"] = *deg.certificate;
  o.lines.push_back("pencil determinant: " + (coeffs.empty() ? std::string("0") : s.expr(det.to_expr()).get<std::string>()));
  o.lines.push_back(std::string("degenerate: ") + (deg.degenerate ? "yes" : "no") +
                    (deg.certificate ? " (" + *deg.certificate + ")" : ""));
  o.lines.push_back("generic rank: " + std::to_string(rank.rank));
  o.verdict = verdict_max({deg.verdict, rank.verdict});
  if (op.d == 2) {
    auto triv = is_trivial_pair(op, policy);
    o.result["trivial"] = {{"trivial", triv.trivial}, {"relation", triv.relation}, {"note", triv.note}};
    if (triv.xi) o.result["trivial"]["xi"] = s.expr(*triv.xi);
    o.lines.push_back(std::string("trivial pair: ") + (triv.trivial ? "yes" : "no") + (triv.note.empty() ? "" : " (" + triv.note + ")"));
    o.lines.push_back("compatibility of P_x + lambda P_y:");
    auto comp = pencil_compatibility(op.axis(0), op.axis(1), s.settings().check_options());
    o.result["compatibility"] = s.report(comp, o.lines, "  ");
    o.verdict = verdict_max({o.verdict, triv.verdict, comp.overall});
  }
  return o;
}

Outcome cmd_transform(Session& s, const std::string& op_path, const std::string& change_path, const std::string& output) {
  HydroOperator op = load_operator(s.input(op_path));
  CoordinateChange c = load_change(s.input(change_path), op.vars);
  Outcome o;
  HydroOperator pushed = pushforward(op, c);
  auto rep = verify_invariance(op, c, s.settings().check_options());
  json pj = operator_to_json(pushed);
  o.lines.push_back("pushed-forward operator over " + std::to_string(pushed.n) + " variables");
  for (const auto& row : operator_to_matrix(pushed)) {
    std::string line = "  [";
    for (std::size_t k = 0; k < row.size(); ++k) line += (k ? ", " : "") + row[k];
    o.lines.push_back(line + "]");
  }
  o.result = {{"operator", pj}, {"checks", s.report(rep, o.lines)}};
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw InputError("cannot write " + output);
    out << pj.dump(2) << "\n";
    o.lines.push_back("written to " + output);
  }
  o.verdict = rep.overall;
  return o;
}

Outcome cmd_catalog_list(Session&) {
  Outcome o;
  json entries = json::array();
  o.lines.push_back(Session::pad("id", 22) + Session::pad("source", 17) + "d  n  rank  slots");
  for (const auto& e : catalog::list_entries()) {
    json slots = json::array();
    std::string names;
    for (const auto& sl : e.slots) {
      slots.push_back({{"name", sl.name}, {"kind", catalog::to_string(sl.kind)}, {"args", sl.args}});
      names += (names.empty() ? "" : ",") + sl.name;
    }
    entries.push_back({{"id", e.id}, {"source", e.source}, {"d", e.d}, {"n", e.n}, {"rank", e.rank_label}, {"slots", slots}});
    o.lines.push_back(Session::pad(e.id, 22) + Session::pad(e.source, 17) + std::to_string(e.d) + "  " +
                      std::to_string(e.n) + "  " + Session::pad(std::to_string(e.rank_label), 6) + names);
  }
  o.result = {{"entries", entries}, {"count", entries.size()}};
  return o;
}

Outcome cmd_catalog_verify(Session& s, bool all, const std::vector<std::string>& ids, unsigned random) {
  if (!all && ids.empty()) throw InputError("catalog verify needs --all or entry ids");
  std::vector<const catalog::CatalogEntry*> entries;
  if (all)
    for (const auto& e : catalog::list_entries()) entries.push_back(&e);
  for (const auto& id : ids) entries.push_back(&catalog::find_entry(id));
  Outcome o;
  std::mt19937_64 rng(s.settings().seed);
  json rows = json::array();
  o.lines.push_back(Session::pad("id", 30) + Session::pad("hamiltonian", 14) + Session::pad("degenerate", 12) +
                    Session::pad("rank", 8) + Session::pad("trivial", 9) + "status");
  for (const auto* e : entries) {
    std::vector<std::pair<std::string, catalog::Params>> runs{{"default", catalog::default_params(*e)}};
    for (unsigned k = 0; k < random; ++k) runs.emplace_back("random" + std::to_string(k + 1), catalog::random_params(*e, rng));
    for (const auto& [label, params] : runs) {
      auto r = catalog::verify_entry(*e, params, s.settings().check_options());
      Verdict v = r.passed() ? verdict_max({r.hamiltonian.overall, r.degeneracy.verdict, r.rank.verdict}) : Verdict::Fail;
      o.verdict = combine(o.verdict, v);
      std::string id = e->id + (label == "default" ? "" : " (" + label + ")");
      std::string trivial = r.triviality ? (r.triviality->trivial ? "yes" : "no") : "-";
      json row{{"id", e->id},
               {"params", label},
               {"hamiltonian", to_string(r.hamiltonian.overall)},
               {"residuals", r.hamiltonian.residuals.size()},
               {"degenerate", r.degeneracy.degenerate},
               {"rank", r.rank.rank},
               {"rank_label", r.rank_label},
               {"trivial", trivial},
               {"status", to_string(v)},
               {"problems", r.problems()}};
      rows.push_back(row);
      o.lines.push_back(Session::pad(id, 30) + Session::pad(s.paint(r.hamiltonian.overall), 14 + (s.settings().color ? 9 : 0)) +
                        Session::pad(r.degeneracy.degenerate ? "yes" : "no", 12) +
                        Session::pad(std::to_string(r.rank.rank) + "/" + std::to_string(r.rank_label), 8) +
                        Session::pad(trivial, 9) + s.paint(v));
      for (const auto& p : r.problems()) o.lines.push_back("    " + p);
    }
  }
  o.result = {{"rows", rows}, {"count", rows.size()}};
  o.lines.push_back(std::to_string(rows.size()) + " rows");
  return o;
}

Outcome cmd_catalog_export(Session&, const std::string& id, const std::vector<std::string>& params, const std::string& output) {
  const auto& e = catalog::find_entry(id);
  json j = catalog::export_entry(id, parse_params(e, params));
  Outcome o;
  o.result = {{"id", id}, {"operator", j}};
  if (!output.empty()) {
    std::ofstream out(output);
    if (!out) throw InputError("cannot write " + output);
    out << j.dump(2) << "\n";
    o.lines.push_back("written to " + output);
  } else {
    o.lines.push_back(j.dump(2));
  }
  return o;
}

struct SystemInput {
  HydroOperator op;
  hamsys::HamiltonianDensity density;
  bool abstract = false;
};

SystemInput system_input(Session& s, const std::string& op_path, const std::string& density_path) {
  SystemInput in{load_operator(s.input(op_path)), {}, density_path.empty()};
  if (in.op.d > 2) throw InputError("systems are generated for d <= 2");
  in.density = in.abstract ? hamsys::abstract_density(in.op) : hamsys::load_density(s.input(density_path), in.op);
  return in;
}

Outcome cmd_system(Session& s, const std::string& op_path, const std::string& density_path) {
  auto in = system_input(s, op_path, density_path);
  auto sys = hamsys::generate_system(in.op, in.density.h, op_path);
  Outcome o;
  o.result = {{"density", s.expr(sys.density)}, {"A", matrix_json(s, sys.A)}, {"B", matrix_json(s, sys.B)}};
  o.lines.push_back("u_t + A u_x + B u_y = 0 with h = " + o.result["density"].get<std::string>());
  matrix_lines("A", o.result["A"], o.lines);
  matrix_lines("B", o.result["B"], o.lines);
  if (in.abstract && in.op.d == 2) {
    auto shape = hamsys::shape_classify(sys, s.settings().policy());
    o.result["shape"] = {{"shape", hamsys::to_string(shape.shape)}, {"frozen", shape.frozen},
                         {"remaining", shape.remaining}, {"roles", shape.roles}, {"note", shape.note}};
    o.lines.push_back("shape: " + hamsys::to_string(shape.shape) + " (" + shape.note + ")");
  }
  return o;
}

Outcome cmd_dispersion(Session& s, const std::string& op_path, const std::string& density_path) {
  auto in = system_input(s, op_path, density_path);
  auto poly = hamsys::dispersion(hamsys::generate_system(in.op, in.density.h));
  Outcome o;
  json coeffs = json::object();
  o.lines.push_back("det(E + lambda A + mu B):");
  for (const auto& [exps, c] : poly.coefficients) {
    std::string m = poly.monomial_string(exps);
    coeffs[m] = s.expr(poly.coefficient_expr(exps));
    o.lines.push_back("  " + Session::pad(m, 16) + coeffs[m].get<std::string>());
  }
  o.result = {{"coefficients", coeffs}};
  return o;
}

Outcome cmd_reduction(Session& s, const std::string& op_path, const std::string& density_path,
                      const std::string& cand_path, const std::string& at, const std::string& txy) {
  auto in = system_input(s, op_path, density_path);
  auto sys = hamsys::generate_system(in.op, in.density.h);
  auto cand = hamsys::load_candidate(s.input(cand_path));
  if (cand.u.size() != static_cast<std::size_t>(sys.n)) throw InputError("candidate needs one u expression per field variable");
  auto policy = s.settings().policy();
  Outcome o;
  o.lines.push_back("reduction residuals (E + lambda^i A + mu^i B) d_i u:");
  auto red = hamsys::reduction_residual(cand, sys, policy);
  o.result["reduction"] = s.report(red, o.lines, "  ");
  o.verdict = red.overall;
  if (cand.m >= 2) {
    try {
      o.lines.push_back("commutativity:");
      auto comm = hamsys::commutativity_residual(cand, policy);
      o.result["commutativity"] = s.report(comm, o.lines, "  ");
      o.verdict = combine(o.verdict, comm.overall);
    } catch (const hamsys::DegenerateCandidateError& e) {
      throw InputError(std::string("degenerate candidate: ") + e.what());
    }
  }
  if (cand.v && !at.empty()) {
    auto R0 = parse_numbers(at);
    auto t = parse_numbers(txy.empty() ? "0,0,0" : txy);
    if (t.size() != 3) throw InputError("--txy needs three values t,x,y");
    auto hod = hamsys::hodograph_residual(cand, R0, t[0], t[1], t[2], policy);
    o.lines.push_back("hodograph:");
    json h = s.report(hod.comm1, o.lines, "  ");
    json values = json::array();
    for (std::size_t i = 0; i < hod.values.size(); ++i) {
      const auto& v = hod.values[i];
      Verdict vv = v.is_exact() ? (v.is_zero() ? Verdict::ProvenPass : Verdict::Fail)
                                : (std::abs(v.real().to_double()) < 1e-12 ? Verdict::ProbablyPass : Verdict::Fail);
      o.verdict = combine(o.verdict, vv);
      values.push_back({{"i", i + 1}, {"value", v.str(12)}, {"verdict", to_string(vv)}});
      o.lines.push_back("  v^" + std::to_string(i + 1) + " - x - lambda t - mu y = " + v.str(12) + "  " + s.paint(vv));
    }
    h["values"] = values;
    o.result["hodograph"] = h;
    o.verdict = combine(o.verdict, hod.comm1.overall);
  }
  return o;
}

Outcome cmd_fkt(Session& s, const std::string& path) {
  Expr f = integrability::load_lagrangian(s.input(path));
  integrability::FktReport rep;
  try {
    rep = integrability::fkt_residual(f, s.settings().policy());
  } catch (const integrability::DegenerateLagrangianError& e) {
    throw InputError(std::string("inapplicable: ") + e.what());
  }
  Outcome o;
  o.lines.push_back("f = " + sym::print(f));
  o.lines.push_back("H = " + s.expr(rep.H).get<std::string>());
  json coeffs = json::array();
  for (const auto& r : rep.checks.residuals) {
    integrability::MultiIndex m{unsigned(r.indices[0]), unsigned(r.indices[1]), unsigned(r.indices[2])};
    std::string name = integrability::monomial_name(m);
    coeffs.push_back({{"monomial", name}, {"verdict", to_string(r.verdict)}, {"zero", sym::to_string(r.zero.kind)},
                      {"value", s.expr(r.value)}});
    o.lines.push_back("  " + Session::pad(name, 14) + s.paint(r.verdict));
  }
  o.result = {{"H", s.expr(rep.H)}, {"coefficients", coeffs}, {"integrable", rep.integrable()}};
  if (auto m = rep.first_nonzero()) {
    std::string first = integrability::monomial_name(*m) + ": " + s.expr(rep.residual.coefficient(*m)).get<std::string>();
    o.result["first_nonzero"] = first;
    o.lines.push_back("first nonzero coefficient " + first);
  }
  o.verdict = rep.checks.overall;
  return o;
}

Outcome cmd_legendre(Session& s, const std::string& path) {
  auto in = integrability::load_legendre(s.input(path));
  Outcome o;
  try {
    auto res = integrability::legendre(in.h, in.inverse, integrability::default_legendre_vars(), s.settings().policy());
    o.lines.push_back("h~ = " + s.expr(res.h_tilde).get<std::string>());
    o.lines.push_back("f(a,b,c) = " + s.expr(res.f).get<std::string>());
    o.result = {{"h_tilde", s.expr(res.h_tilde)}, {"f", s.expr(res.f)}, {"checks", s.report(res.checks, o.lines)}};
    o.verdict = res.checks.overall;
  } catch (const integrability::LegendreInverseError& e) {
    o.lines.push_back(e.what());
    o.result = {{"error", e.what()}};
    o.verdict = Verdict::Fail;
  }
  return o;
}

void emit(const Session& s, const std::vector<std::string>& args, const Outcome& o, double seconds, std::ostream& out) {
  int code = exit_code(o.verdict);
  if (s.settings().format == "json") {
    json j{{"command", args}, {"inputs", s.inputs()}, {"verdict", to_string(o.verdict)}, {"exit_code", code},
           {"result", o.result}};
    if (s.settings().timing) j["seconds"] = seconds;
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto& l : o.lines) out << l << "\n";
  out << "verdict: " << s.paint(o.verdict) << " (exit " << code << ")";
  if (s.settings().timing) out << ", " << std::fixed << std::setprecision(3) << seconds << " s";
  out << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  Settings st;
  st.color = color;
  CLI::App app{"Hamiltonian operators of hydrodynamic type: checks, pencils, transforms and systems", "hydro"};
  app.require_subcommand(1);
  app.add_option("--format", st.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--samples", st.samples, "Sample points for probabilistic zero tests")->check(CLI::Range(1u, 100000u));
  app.add_option("--seed", st.seed, "Seed for sampling");
  app.add_option("--precision", st.precision, "MPFR working precision in bits")->check(CLI::Range(16u, 100000u));
  app.add_option("--max-nodes", st.max_nodes, "Truncate printed residuals above this node count");
  app.add_option("--max-residuals", st.max_residuals, "Residuals listed per report");
  app.add_flag("--timing", st.timing, "Report wall time");

  std::string op_path, second, third, output, at, txy, density;
  std::vector<std::string> ids, params;
  bool all = false;
  unsigned random = 0;

  auto* check = app.add_subcommand("check", "Mokhov conditions for an operator file");
  check->add_option("operator", op_path)->required();
  auto* pencil = app.add_subcommand("pencil", "Metric pencil: determinant, rank, triviality, compatibility");
  pencil->add_option("operator", op_path)->required();
  auto* transform = app.add_subcommand("transform", "Push an operator through a change of variables");
  transform->add_option("operator", op_path)->required();
  transform->add_option("change", second)->required();
  transform->add_option("-o,--output", output, "Write the transformed operator here");
  auto* cat = app.add_subcommand("catalog", "Classified normal forms");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "List entries");
  auto* cat_verify = cat->add_subcommand("verify", "Verify entries");
  cat_verify->add_flag("--all", all, "Every listed entry");
  cat_verify->add_option("ids", ids, "Entry ids");
  cat_verify->add_option("--random", random, "Random specializations per entry");
  auto* cat_export = cat->add_subcommand("export", "Write an entry as an operator file");
  cat_export->add_option("id", second)->required();
  cat_export->add_option("--param", params, "name=value for a slot");
  cat_export->add_option("-o,--output", output, "Output file");
  auto* system = app.add_subcommand("system", "Quasilinear system u_t + P h_u = 0 (abstract h if no density)");
  system->add_option("operator", op_path)->required();
  system->add_option("density", density);
  auto* disp = app.add_subcommand("dispersion", "det(E + lambda A + mu B)");
  disp->add_option("operator", op_path)->required();
  disp->add_option("density", density);
  auto* red = app.add_subcommand("reduction", "Check a hydrodynamic reduction candidate");
  red->add_option("operator", op_path)->required();
  red->add_option("density", density)->required();
  red->add_option("candidate", third)->required();
  red->add_option("--at", at, "R0 for the hodograph check, comma separated");
  red->add_option("--txy", txy, "t,x,y for the hodograph check");
  auto* fkt = app.add_subcommand("fkt", "Integrability test for a Lagrangian density f(a,b,c)");
  fkt->add_option("lagrangian", op_path)->required();
  auto* leg = app.add_subcommand("legendre", "Partial Legendre transform of a density h(rho,u,v)");
  leg->add_option("input", op_path)->required();
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  for (auto* sub : cat->get_subcommands({})) sub->fallthrough();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Pass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return Pass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return InputProblem;
  }

  Session s(st);
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    if (check->parsed()) o = cmd_check(s, op_path);
    else if (pencil->parsed()) o = cmd_pencil(s, op_path);
    else if (transform->parsed()) o = cmd_transform(s, op_path, second, output);
    else if (cat_list->parsed()) o = cmd_catalog_list(s);
    else if (cat_verify->parsed()) o = cmd_catalog_verify(s, all, ids, random);
    else if (cat_export->parsed()) o = cmd_catalog_export(s, second, params, output);
    else if (system->parsed()) o = cmd_system(s, op_path, density);
    else if (disp->parsed()) o = cmd_dispersion(s, op_path, density);
    else if (red->parsed()) o = cmd_reduction(s, op_path, density, third, at, txy);
    else if (fkt->parsed()) o = cmd_fkt(s, op_path);
    else if (leg->parsed()) o = cmd_legendre(s, op_path);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return InputProblem;
  } catch (const sym::ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return InputProblem;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return InputProblem;
  } catch (const std::domain_error& e) {
    err << "input error: " << e.what() << "\n";
    return InputProblem;
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(s, args, o, seconds, out);
  return exit_code(o.verdict);
}

}  // namespace hydro::cli
