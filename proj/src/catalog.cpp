#include "hydro/catalog.hpp"

#include <algorithm>

namespace hydro::catalog {

namespace {

using Rows = std::vector<std::vector<std::string>>;

Slot sign() { return {"epsilon", SlotKind::Sign, {}}; }
Slot kappa() { return {"kappa", SlotKind::Constant, {}}; }
Slot fn23(const std::string& name) { return {name, SlotKind::Function, {"u2", "u3"}}; }
Slot fn3(const std::string& name) { return {name, SlotKind::Function, {"u3"}}; }

CatalogEntry entry(std::string id, std::string source, int d, int n, int rank, std::vector<Slot> slots, Rows m) {
  return CatalogEntry{std::move(id), std::move(source), d, n, rank, std::move(slots), std::move(m)};
}

// Shared pieces of the displayed matrices.
const std::string kFlowF = "Dx + f*Dy + (f_2*u2_y + f_3*u3_y)/2";
const std::string kW = "(u3*u1 - u2)";

std::vector<CatalogEntry> build_entries() {
  std::vector<CatalogEntry> v;
  // One-dimensional two-component forms.
  v.push_back(entry("T2.2/1", "1D_2cmpt", 1, 2, 1, {}, {{"Dx", "0"}, {"0", "0"}}));
  v.push_back(entry("T2.2/2", "1D_2cmpt", 1, 2, 1, {}, {{"Dx", "-u2_x/u1"}, {"u2_x/u1", "0"}}));

  // One-dimensional three-component forms.
  v.push_back(entry("T2.3/rank0", "rank0", 1, 3, 0, {},
                    {{"0", "u3_x", "0"}, {"-u3_x", "0", "0"}, {"0", "0", "0"}}));
  v.push_back(entry("T2.3/rank1/1", "rank1", 1, 3, 1, {},
                    {{"Dx", "0", "0"}, {"0", "0", "0"}, {"0", "0", "0"}}));
  v.push_back(entry("T2.3/rank1/2", "rank1", 1, 3, 1, {},
                    {{"Dx", "u3_x", "0"}, {"-u3_x", "0", "0"}, {"0", "0", "0"}}));
  v.push_back(entry("T2.3/rank1/3", "rank1", 1, 3, 1, {},
                    {{"Dx", "0", "-u3_x/u1"}, {"0", "0", "0"}, {"u3_x/u1", "0", "0"}}));
  v.push_back(entry("T2.3/rank1/4", "rank1", 1, 3, 1, {},
                    {{"Dx", "-u2_x/u1", "-u3_x/u1"}, {"u2_x/u1", "0", "0"}, {"u3_x/u1", "0", "0"}}));
  v.push_back(entry("T2.3/rank2/1", "rank2", 1, 3, 2, {},
                    {{"0", "Dx", "0"}, {"Dx", "0", "0"}, {"0", "0", "0"}}));
  v.push_back(entry("T2.3/rank2/2", "rank2", 1, 3, 2, {},
                    {{"0", "Dx", "-u3_x/u2"}, {"Dx", "0", "0"}, {"u3_x/u2", "0", "0"}}));
  v.push_back(entry("T2.3/rank2/3", "rank2", 1, 3, 2, {},
                    {{"0", "Dx", "u3_x/" + kW},
                     {"Dx", "0", "-u3*u3_x/" + kW},
                     {"-u3_x/" + kW, "u3*u3_x/" + kW, "0"}}));

  // Two-dimensional two-component form.
  v.push_back(entry("T2.4", "2D_2cmpt_1", 2, 2, 1, {sign()},
                    {{"Dx + u2*Dy + u2_y/2", "-epsilon*(u2_x + u2*u2_y)/u1"},
                     {"epsilon*(u2_x + u2*u2_y)/u1", "0"}}));

  // Rank 0.
  v.push_back(entry("T2.5/rank0_P/1", "rank0_P", 2, 3, 0, {},
                    {{"0", "u3_x + u1*u3_y", "0"}, {"-u3_x - u1*u3_y", "0", "0"}, {"0", "0", "0"}}));
  v.push_back(entry("T2.5/rank0_P/2", "rank0_P", 2, 3, 0, {},
                    {{"0", "u3_x + u3*u3_y", "0"}, {"-u3_x - u3*u3_y", "0", "0"}, {"0", "0", "0"}}));

  // Rank 1.
  v.push_back(entry("T2.6/rank1_P_1/1", "rank1_P_1", 2, 3, 1, {sign(), fn23("h")},
                    {{"Dx + epsilon*(u2*Dy + u2_y/2)", "0", "h*u2_y"},
                     {"0", "0", "0"},
                     {"-h*u2_y", "0", "0"}}));
  v.push_back(entry("T2.6/rank1_P_1/2", "rank1_P_1", 2, 3, 1, {fn23("f"), fn23("h")},
                    {{kFlowF, "0", "-(u3_x - h*u2_y + f*u3_y)/u1"},
                     {"0", "0", "0"},
                     {"(u3_x - h*u2_y + f*u3_y)/u1", "0", "0"}}));
  v.push_back(entry("T2.6/rank1_P_2/1", "rank1_P_2", 2, 3, 1, {fn23("f"), fn23("h")},
                    {{kFlowF, "u3_x + h*u3_y", "0"}, {"-u3_x - h*u3_y", "0", "0"}, {"0", "0", "0"}}));
  v.push_back(entry("T2.6/rank1_P_2/2", "rank1_P_2", 2, 3, 1, {},
                    {{"Dx + u2*Dy + u2_y/2", "-(u2_x + u2*u2_y)/u1", "-(u3_x + u2*u3_y)/u1"},
                     {"(u2_x + u2*u2_y)/u1", "0", "0"},
                     {"(u3_x + u2*u3_y)/u1", "0", "0"}}));

  // Rank 2.
  v.push_back(entry("T2.7/rank2_P_1/1", "rank2_P_1", 2, 3, 2, {sign()},
                    {{"-2*u1*Dy - u1_y", "Dx + u2*Dy + 2*u2_y", "epsilon*u3_y"},
                     {"Dx + u2*Dy - u2_y", "0", "0"},
                     {"-epsilon*u3_y", "0", "0"}}));
  v.push_back(entry("T2.7/rank2_P_1/2", "rank2_P_1", 2, 3, 2, {},
                    {{"0", "Dx", "Dy"}, {"Dx", "0", "0"}, {"Dy", "0", "0"}}));
  v.push_back(entry("T2.7/rank2_P_2/1", "rank2_P_2", 2, 3, 2, {sign(), fn3("p"), fn3("q"), fn3("r")},
                    {{"p*Dy + p'*u3_y/2", "Dx + q*Dy + epsilon*u3_y", "0"},
                     {"Dx + q*Dy + (q' - epsilon)*u3_y", "r*Dy + r'*u3_y/2", "0"},
                     {"0", "0", "0"}}));
  v.push_back(entry("T2.7/rank2_P_2/2", "rank2_P_2", 2, 3, 2, {},
                    {{"Dy", "Dx", "-u3_x/u2"}, {"Dx", "0", "0"}, {"u3_x/u2", "0", "0"}}));
  v.push_back(entry("T2.7/rank2_P_3/1", "rank2_P_3", 2, 3, 2, {sign()},
                    {{"epsilon*Dy", "Dx + u3*Dy", "-(u3_x + u3*u3_y)/u2"},
                     {"Dx + u3*Dy + u3_y", "0", "0"},
                     {"(u3_x + u3*u3_y)/u2", "0", "0"}}));
  v.push_back(entry("T2.7/rank2_P_3/2", "rank2_P_3", 2, 3, 2, {},
                    {{"0", "Dx", "-(u3_x - u1_y)/u2"}, {"Dx", "0", "Dy"}, {"(u3_x - u1_y)/u2", "Dy", "0"}}));
  v.push_back(entry("T2.7/rank2_P_4/1", "rank2_P_4", 2, 3, 2, {},
                    {{"0", "Dx", "Dy - (u3_x - u2_y)/u2"},
                     {"Dx", "0", "0"},
                     {"Dy + (u3_x - u2_y)/u2", "0", "0"}}));
  v.push_back(entry("T2.7/rank2_P_4/2", "rank2_P_4", 2, 3, 2, {},
                    {{"u1*Dy + u1_y/2", "Dx - u2/2*Dy - u2_y", "-u3_x/u2"},
                     {"Dx - u2/2*Dy + u2_y/2", "0", "0"},
                     {"u3_x/u2", "0", "0"}}));
  v.push_back(entry("T2.7/rank2_P_5", "rank2_P_5", 2, 3, 2, {},
                    {{"Dy", "Dx - u3*Dy", "(u3_x - 2*u3*u3_y)/" + kW},
                     {"Dx - u3*Dy - u3_y", "u3^2*Dy + u3*u3_y", "-(u3*u3_x - 2*u3^2*u3_y)/" + kW},
                     {"-(u3_x - 2*u3*u3_y)/" + kW, "(u3*u3_x - 2*u3^2*u3_y)/" + kW, "0"}}));
  // The displayed (1,1) and (2,2) entries violate skew-symmetry; the u3_y
  // coefficients here follow the general solution this form is reduced from.
  v.push_back(entry("T2.7/rank2_P_6", "rank2_P_6", 2, 3, 2, {kappa()},
                    {{"kappa*Dy/u3 - kappa*u3_y/(2*u3^2)", "Dx - kappa*Dy + kappa*u3_y/(2*u3)",
                      "(u3_x - 2*kappa*u3_y)/" + kW},
                     {"Dx - kappa*Dy - kappa*u3_y/(2*u3)", "kappa*u3*Dy + kappa*u3_y/2",
                      "-(u3*u3_x - 2*kappa*u3*u3_y)/" + kW},
                     {"-(u3_x - 2*kappa*u3_y)/" + kW, "(u3*u3_x - 2*kappa*u3*u3_y)/" + kW, "0"}}));

  v.push_back(entry("P_gas", "P_gas", 2, 3, 2, {},
                    {{"0", "Dx", "Dy"}, {"Dx", "0", "(u2_y - u3_x)/u1"}, {"Dy", "(u3_x - u2_y)/u1", "0"}}));

  // General solutions the canonical forms are reduced from.
  v.push_back(entry("A/rank1_sol1", "rank-1 solution 1", 2, 3, 1, {fn23("f"), fn23("psi"), fn23("eta")},
                    {{kFlowF, "-psi*u2_y - psi^2/eta*u3_y", "eta*u2_y + psi*u3_y"},
                     {"psi*u2_y + psi^2/eta*u3_y", "0", "0"},
                     {"-eta*u2_y - psi*u3_y", "0", "0"}}));
  v.push_back(entry("A/rank1_sol2", "rank-1 solution 2", 2, 3, 1, {fn23("f"), fn23("nu")},
                    {{kFlowF, "nu*u3_y", "0"}, {"-nu*u3_y", "0", "0"}, {"0", "0", "0"}}));
  v.push_back(entry("A/rk2_2D_1", "rk2_2D_1", 2, 3, 2, {fn3("p"), fn3("q")},
                    {{"p*Dy + p'*u3_y/2", "Dx + q*Dy", "-u3_x/u2 - q*u3_y/u2"},
                     {"Dx + q*Dy + q'*u3_y", "0", "0"},
                     {"u3_x/u2 + q*u3_y/u2", "0", "0"}}));
  v.push_back(entry("A/rk2_2D_2", "rk2_2D_2", 2, 3, 2, {kappa(), fn3("p"), fn3("pt"), fn3("r")},
                    {{"(p*u1 + pt)*Dy + (p*u1_y + (p'*u1 + pt')*u3_y)/2",
                      "Dx + (kappa - p*u2/2)*Dy - p*u2_y - p'*u2*u3_y/2",
                      "-u3_x/u2 + r*Dy + (r*u2_y + (r'*u2 - kappa)*u3_y)/u2"},
                     {"Dx + (kappa - p*u2/2)*Dy + p*u2_y/2", "0", "0"},
                     {"u3_x/u2 + r*Dy + (kappa*u3_y - r*u2_y)/u2", "0", "0"}}));
  return v;
}

std::vector<CatalogEntry> build_extras() {
  std::vector<CatalogEntry> v;
  v.push_back(entry("T2.7/rank2_P_6/verbatim", "rank2_P_6", 2, 3, 2, {kappa()},
                    {{"kappa*Dy/u3 - kappa*u3_y/u3^2", "Dx - kappa*Dy + kappa*u3_y/(2*u3)",
                      "(u3_x - 2*kappa*u3_y)/" + kW},
                     {"Dx - kappa*Dy - kappa*u3_y/(2*u3)", "kappa*u3*Dy + u3_y/2",
                      "-(u3*u3_x - 2*kappa*u3*u3_y)/" + kW},
                     {"-(u3_x - 2*kappa*u3_y)/" + kW, "(u3*u3_x - 2*kappa*u3*u3_y)/" + kW, "0"}}));
  v.push_back(entry("A/rk2_2D_1/2", "rk2_2D_1", 2, 3, 2, {fn3("q"), fn3("r")},
                    {{"0", "Dx + q*Dy", "-u3_x/u2 + (r*u1_y - q*u3_y)/u2"},
                     {"Dx + q*Dy + q'*u3_y", "0", "r*Dy + r'*u3_y"},
                     {"u3_x/u2 + (q*u3_y - r*u1_y)/u2", "r*Dy", "0"}}));
  return v;
}

OperatorSignature signature(const CatalogEntry& e) {
  OperatorSignature sig;
  sig.d = e.d;
  for (int i = 1; i <= e.n; ++i) sig.vars.push_back("u" + std::to_string(i));
  for (const auto& s : e.slots) {
    if (s.kind == SlotKind::Function)
      sig.functions.emplace_back(s.name, s.args);
    else
      sig.constants.push_back(s.name);
  }
  return sig;
}

}  // namespace

const Slot* CatalogEntry::slot(const std::string& name) const {
  for (const auto& s : slots)
    if (s.name == name) return &s;
  return nullptr;
}

std::string to_string(SlotKind k) {
  switch (k) {
    case SlotKind::Sign: return "sign";
    case SlotKind::Constant: return "constant";
    case SlotKind::Function: return "function";
  }
  return "?";
}

Params default_params(const CatalogEntry& e) {
  Params p;
  for (const auto& s : e.slots) {
    if (s.kind == SlotKind::Sign) p.constants[s.name] = 1;
    if (s.kind == SlotKind::Constant) p.constants[s.name] = 2;
  }
  return p;
}

Params random_params(const CatalogEntry& e, std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto rational = [&](int lo, int hi) {
    mpq_class q(pick(lo, hi), pick(1, 4));
    q.canonicalize();
    return q;
  };
  Params p;
  for (const auto& s : e.slots) {
    if (s.kind == SlotKind::Sign) p.constants[s.name] = pick(0, 1);
    if (s.kind == SlotKind::Constant) p.constants[s.name] = rational(-5, 5);
    if (s.kind != SlotKind::Function) continue;
    std::string body = rational(1, 5).get_str();
    for (std::size_t i = 0; i < s.args.size(); ++i) {
      body += " + (" + rational(-5, 5).get_str() + ")*" + s.args[i];
      body += " + (" + rational(-5, 5).get_str() + ")*" + s.args[i] + "^2";
    }
    if (s.args.size() == 2) body += " + (" + rational(-5, 5).get_str() + ")*" + s.args[0] + "*" + s.args[1];
    p.functions[s.name] = body;
  }
  return p;
}

const std::vector<CatalogEntry>& list_entries() {
  static const std::vector<CatalogEntry> entries = build_entries();
  return entries;
}

const std::vector<CatalogEntry>& extra_fixtures() {
  static const std::vector<CatalogEntry> entries = build_extras();
  return entries;
}

const CatalogEntry& find_entry(const std::string& id) {
  for (const auto* list : {&list_entries(), &extra_fixtures()})
    for (const auto& e : *list)
      if (e.id == id) return e;
  throw InputError("unknown catalog entry '" + id + "'");
}

HydroOperator instantiate(const CatalogEntry& e, const Params& params) {
  for (const auto& [name, value] : params.constants) {
    const Slot* s = e.slot(name);
    if (!s || s->kind == SlotKind::Function) throw InputError(e.id + ": no constant slot '" + name + "'");
    if (s->kind == SlotKind::Sign && value != 0 && value != 1)
      throw InputError(e.id + ": " + name + " must be 0 or 1");
  }
  for (const auto& [name, body] : params.functions) {
    const Slot* s = e.slot(name);
    if (!s || s->kind != SlotKind::Function) throw InputError(e.id + ": no function slot '" + name + "'");
  }
  for (const auto& s : e.slots)
    if (s.kind != SlotKind::Function && !params.constants.count(s.name))
      throw InputError(e.id + ": missing value for '" + s.name + "'");

  OperatorSignature sig = signature(e);
  HydroOperator op = operator_from_matrix(sig, e.matrix);

  std::map<Symbol, Expr> values;
  for (const auto& [name, value] : params.constants) values.emplace(Symbol::constant(name), Expr(value));
  std::map<const sym::FunctionDef*, Expr> bodies;
  std::vector<const sym::FunctionDef*> abstract;
  for (const auto* f : op.functions) {
    auto it = params.functions.find(f->name);
    if (it == params.functions.end()) {
      abstract.push_back(f);
      continue;
    }
    sym::Workspace ws;
    for (Symbol p : f->params) ws.add_variable(p.name());
    Expr body;
    try {
      body = ws.parse(it->second);
    } catch (const sym::ParseError& err) {
      throw InputError(e.id + ": body of " + f->name + ": " + err.what());
    }
    bodies.emplace(f, body);
  }
  auto fix = [&](Expr& x) { x = sym::to_expr(sym::normalize(sym::substitute_functions(sym::substitute(x, values), bodies))); };
  for (auto& m : op.g)
    for (auto& row : m)
      for (auto& x : row) fix(x);
  for (auto& t : op.b)
    for (auto& m : t)
      for (auto& row : m)
        for (auto& x : row) fix(x);
  op.constants.clear();
  op.functions = abstract;
  op.validate();
  return op;
}

HydroOperator instantiate(const std::string& id, const Params& params) {
  return instantiate(find_entry(id), params);
}

HydroOperator instantiate(const std::string& id) {
  const CatalogEntry& e = find_entry(id);
  return instantiate(e, default_params(e));
}

bool EntryReport::passed() const { return problems().empty(); }

std::vector<std::string> EntryReport::problems() const {
  std::vector<std::string> out;
  if (!hamiltonian.passed()) out.push_back("hamiltonian: " + to_string(hamiltonian.overall));
  if (!degeneracy.degenerate) out.push_back("not degenerate (" + degeneracy.certificate.value_or("") + ")");
  if (degeneracy.verdict == Verdict::Inconclusive || degeneracy.verdict == Verdict::Fail)
    out.push_back("degeneracy: " + to_string(degeneracy.verdict));
  if (rank.rank != rank_label)
    out.push_back("rank " + std::to_string(rank.rank) + ", expected " + std::to_string(rank_label));
  if (triviality && triviality->trivial) out.push_back("trivial pair");
  return out;
}

EntryReport verify_entry(const CatalogEntry& e, const Params& params, const CheckOptions& opt) {
  EntryReport r;
  r.id = e.id;
  r.rank_label = e.rank_label;
  HydroOperator op = instantiate(e, params);
  r.hamiltonian = check_hamiltonian(op, opt);
  r.degeneracy = is_degenerate(op, opt.policy);
  r.rank = generic_rank(op, opt.policy);
  if (op.d == 2) r.triviality = is_trivial_pair(op, opt.policy);
  return r;
}

EntryReport verify_entry(const std::string& id, const Params& params, const CheckOptions& opt) {
  return verify_entry(find_entry(id), params, opt);
}

Summary verify_all(const CheckOptions& opt) {
  Summary s;
  for (const auto& e : list_entries()) {
    s.entries.push_back(verify_entry(e, default_params(e), opt));
    for (const auto& p : s.entries.back().problems()) s.failures.push_back(e.id + ": " + p);
  }
  return s;
}

nlohmann::json export_entry(const std::string& id, const Params& params) {
  return operator_to_json(instantiate(id, params));
}

}  // namespace hydro::catalog
