#include "hydro/transform.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "hydro/operator_io.hpp"

namespace hydro {

using nlohmann::json;
using sym::Fraction;
using FMatrix = std::vector<std::vector<Fraction>>;

namespace {

FMatrix minor_of(const FMatrix& m, std::size_t row, std::size_t col) {
  FMatrix out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == row) continue;
    out.emplace_back();
    for (std::size_t j = 0; j < m.size(); ++j)
      if (j != col) out.back().push_back(m[i][j]);
  }
  return out;
}

bool decided_zero(const Fraction& f, const sym::ZeroPolicy& policy, Verdict& verdict) {
  try {
    sym::ZeroVerdict z = sym::is_zero(f, policy);
    if (z.kind == sym::ZeroKind::ProbablyZero) verdict = combine(verdict, Verdict::ProbablyPass);
    return z.zero();
  } catch (const sym::InconclusiveError&) {
    verdict = combine(verdict, Verdict::Inconclusive);
    return false;
  }
}

Matrix to_exprs(const FMatrix& m) {
  Matrix out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const auto& f : row) out.back().push_back(sym::to_expr(sym::normalize(f)));
  }
  return out;
}

std::size_t position(const std::vector<Symbol>& vars, const std::string& name) {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name() == name) return i;
  return vars.size();
}

Residual residual(std::string relation, std::vector<int> indices, const Fraction& value,
                  const sym::ZeroPolicy& policy) {
  Residual r;
  r.relation = std::move(relation);
  r.indices = std::move(indices);
  try {
    r.zero = sym::is_zero(value, policy);
    r.verdict = verdict_of(r.zero);
  } catch (const sym::InconclusiveError& e) {
    r.verdict = Verdict::Inconclusive;
    r.note = e.what();
  }
  r.value = r.zero.kind == sym::ZeroKind::ProvenZero ? Expr(0L) : sym::to_expr(sym::normalize(value));
  return r;
}

}  // namespace

CoordinateChange::CoordinateChange(std::vector<Symbol> old_vars, std::vector<Symbol> new_vars,
                                   std::vector<Expr> forward, std::optional<std::vector<Expr>> inverse,
                                   const sym::ZeroPolicy& policy)
    : old_vars_(std::move(old_vars)),
      new_vars_(std::move(new_vars)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)) {
  const std::size_t n = old_vars_.size();
  if (n == 0 || new_vars_.size() != n || forward_.size() != n)
    throw ChangeError("change needs one forward expression per variable");
  if (inverse_ && inverse_->size() != n) throw ChangeError("change needs one inverse expression per variable");
  std::set<Symbol> fresh(new_vars_.begin(), new_vars_.end());
  for (const auto& e : forward_)
    for (Symbol s : sym::free_symbols(e))
      if (s.is_variable() && !fresh.count(s))
        throw ChangeError("forward expression uses '" + s.name() + "', which is not a new variable");

  jac_.assign(n, std::vector<Fraction>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Fraction f = sym::to_fraction(forward_[i]);
    for (std::size_t k = 0; k < n; ++k) jac_[i][k] = f.derivative(new_vars_[k].id());
  }
  Fraction det = determinant(jac_);
  Verdict v = Verdict::ProvenPass;
  if (decided_zero(det, policy, v)) throw ChangeError("change is not invertible: det J vanishes identically");
  Fraction inv_det = det.inverse();
  inv_jac_.assign(n, std::vector<Fraction>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      Fraction c = determinant(minor_of(jac_, k, i)) * inv_det;
      inv_jac_[i][k] = (i + k) % 2 ? -c : c;
    }

  if (inverse_) {
    std::set<Symbol> old(old_vars_.begin(), old_vars_.end());
    for (const auto& e : *inverse_)
      for (Symbol s : sym::free_symbols(e))
        if (s.is_variable() && !old.count(s))
          throw ChangeError("inverse expression uses '" + s.name() + "', which is not an old variable");
    std::map<Symbol, Expr> to_old;
    for (std::size_t i = 0; i < n; ++i) to_old.emplace(new_vars_[i], (*inverse_)[i]);
    Verdict iv = Verdict::ProvenPass;
    for (std::size_t i = 0; i < n; ++i) {
      Fraction back = sym::to_fraction(pull((*inverse_)[i])) - sym::to_fraction(Expr(new_vars_[i]));
      Fraction there = sym::to_fraction(sym::substitute(forward_[i], to_old)) - sym::to_fraction(Expr(old_vars_[i]));
      if (!decided_zero(back, policy, iv) || !decided_zero(there, policy, iv))
        throw ChangeError("inverse does not invert the change at component " + std::to_string(i + 1));
    }
    inverse_verdict_ = iv;
  }
}

CoordinateChange CoordinateChange::identity(const std::vector<Symbol>& vars) {
  std::vector<Expr> id(vars.begin(), vars.end());
  return CoordinateChange(vars, vars, id, id);
}

Matrix CoordinateChange::jacobian_expr() const { return to_exprs(jac_); }
Matrix CoordinateChange::inverse_jacobian_expr() const { return to_exprs(inv_jac_); }

Expr CoordinateChange::pull(const Expr& e) const {
  std::map<Symbol, Expr> m;
  for (std::size_t i = 0; i < old_vars_.size(); ++i) m.emplace(old_vars_[i], forward_[i]);
  return sym::substitute(e, m);
}

CoordinateChange CoordinateChange::reversed(const sym::ZeroPolicy& policy) const {
  if (!inverse_) throw std::logic_error("change has no inverse");
  return CoordinateChange(new_vars_, old_vars_, *inverse_, forward_, policy);
}

CoordinateChange compose(const CoordinateChange& first, const CoordinateChange& second,
                         const sym::ZeroPolicy& policy) {
  std::vector<Expr> fwd;
  for (const auto& e : first.forward()) fwd.push_back(second.pull(e));
  std::optional<std::vector<Expr>> inv;
  if (first.inverse() && second.inverse()) {
    std::map<Symbol, Expr> m;
    for (int i = 0; i < first.n(); ++i) m.emplace(first.new_vars()[i], (*first.inverse())[i]);
    inv.emplace();
    for (const auto& e : *second.inverse()) inv->push_back(sym::substitute(e, m));
  }
  if (std::set<Symbol>(first.new_vars().begin(), first.new_vars().end()) !=
      std::set<Symbol>(second.old_vars().begin(), second.old_vars().end()))
    throw ChangeError("changes do not compose: intermediate variables differ");
  return CoordinateChange(first.old_vars(), second.new_vars(), fwd, inv, policy);
}

HydroOperator pushforward(const HydroOperator& op, const CoordinateChange& c) {
  op.validate();
  const int n = op.n;
  if (c.n() != n) throw ChangeError("change and operator have different component counts");
  std::vector<std::size_t> P(n);
  for (int p = 0; p < n; ++p) {
    P[p] = position(c.old_vars(), op.vars[p].name());
    if (P[p] == c.old_vars().size())
      throw ChangeError("operator variable '" + op.vars[p].name() + "' is not changed");
  }
  const auto& J = c.jacobian();
  const auto& A = c.inverse_jacobian();
  // dA[k][j][q] = d(A^j_q)/dv^k
  std::vector<FMatrix> dA(n, FMatrix(n, std::vector<Fraction>(n)));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < n; ++q) dA[k][j][q] = A[j][q].derivative(c.new_vars()[k].id());

  HydroOperator out = HydroOperator::zero(op.d, c.new_vars());
  std::set<Symbol> consts(op.constants.begin(), op.constants.end());
  std::set<const sym::FunctionDef*> fns(op.functions.begin(), op.functions.end());
  for (const auto& e : c.forward()) {
    for (Symbol s : sym::free_symbols(e))
      if (!s.is_variable()) consts.insert(s);
    for (const auto* f : sym::functions_used(e)) fns.insert(f);
  }
  out.constants.assign(consts.begin(), consts.end());
  out.functions.assign(fns.begin(), fns.end());

  for (int a = 0; a < op.d; ++a) {
    FMatrix G(n, std::vector<Fraction>(n));
    std::vector<FMatrix> T(n, FMatrix(n, std::vector<Fraction>(n)));  // T[p][q][k] = b^{pq}_r J^r_k
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        G[p][q] = sym::to_fraction(c.pull(op.g[a][p][q]));
        for (int r = 0; r < n; ++r) {
          if (op.b[a][p][q][r].is_zero()) continue;
          Fraction br = sym::to_fraction(c.pull(op.b[a][p][q][r]));
          for (int k = 0; k < n; ++k) T[p][q][k] = T[p][q][k] + br * J[P[r]][k];
        }
      }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Fraction g;
        std::vector<Fraction> b(n);
        for (int p = 0; p < n; ++p) {
          const Fraction& aip = A[i][P[p]];
          if (aip.is_zero()) continue;
          for (int q = 0; q < n; ++q) {
            const Fraction& ajq = A[j][P[q]];
            if (!G[p][q].is_zero()) g = g + aip * ajq * G[p][q];
            for (int k = 0; k < n; ++k) {
              if (!T[p][q][k].is_zero()) b[k] = b[k] + aip * ajq * T[p][q][k];
              if (!G[p][q].is_zero()) b[k] = b[k] + aip * G[p][q] * dA[k][j][P[q]];
            }
          }
        }
        out.g[a][i][j] = sym::to_expr(sym::normalize(g));
        for (int k = 0; k < n; ++k) out.b[a][i][j][k] = sym::to_expr(sym::normalize(b[k]));
      }
  }
  return out;
}

HydroOperator linear_axis_change(const HydroOperator& op, const std::vector<std::vector<mpq_class>>& L) {
  if (static_cast<int>(L.size()) != op.d) throw std::invalid_argument("axis change must be d x d");
  std::vector<std::vector<Fraction>> rows;
  for (const auto& row : L) {
    if (static_cast<int>(row.size()) != op.d) throw std::invalid_argument("axis change must be d x d");
    rows.emplace_back();
    for (const auto& x : row) rows.back().push_back(Fraction(x));
  }
  Verdict v = Verdict::ProvenPass;
  if (decided_zero(determinant(rows), {}, v)) throw std::invalid_argument("axis change is singular");
  HydroOperator out = op;
  for (int b = 0; b < op.d; ++b)
    for (int i = 0; i < op.n; ++i)
      for (int j = 0; j < op.n; ++j) {
        std::vector<Expr> gs;
        std::vector<std::vector<Expr>> bs(op.n);
        for (int a = 0; a < op.d; ++a) {
          if (L[b][a] == 0) continue;
          gs.push_back(sym::times(Expr(L[b][a]), op.g[a][i][j]));
          for (int k = 0; k < op.n; ++k) bs[k].push_back(sym::times(Expr(L[b][a]), op.b[a][i][j][k]));
        }
        out.g[b][i][j] = sym::to_expr(sym::normalize(sym::sum(gs)));
        for (int k = 0; k < op.n; ++k) out.b[b][i][j][k] = sym::to_expr(sym::normalize(sym::sum(bs[k])));
      }
  return out;
}

ConditionReport verify_invariance(const HydroOperator& op, const CoordinateChange& c, const CheckOptions& opt) {
  HydroOperator pushed = pushforward(op, c);
  ConditionReport report = check_hamiltonian(pushed, opt);
  if (!c.inverse()) return report;
  HydroOperator back = pushforward(pushed, c.reversed(opt.policy));
  // back is indexed in the change's old-variable order.
  std::vector<std::size_t> P(op.n);
  for (int p = 0; p < op.n; ++p) P[p] = position(back.vars, op.vars[p].name());
  for (int a = 0; a < op.d; ++a)
    for (int i = 0; i < op.n; ++i)
      for (int j = 0; j < op.n; ++j) {
        Fraction dg = sym::to_fraction(back.g[a][P[i]][P[j]]) - sym::to_fraction(op.g[a][i][j]);
        report.add(residual("roundtrip-g", {a + 1, i + 1, j + 1}, dg, opt.policy));
        for (int k = 0; k < op.n; ++k) {
          Fraction db = sym::to_fraction(back.b[a][P[i]][P[j]][P[k]]) - sym::to_fraction(op.b[a][i][j][k]);
          report.add(residual("roundtrip-b", {a + 1, i + 1, j + 1, k + 1}, db, opt.policy));
        }
      }
  return report;
}

CoordinateChange change_from_json(const json& j, const std::vector<Symbol>& op_vars) {
  try {
    const json& fwd = j.at("forward");
    std::vector<std::string> new_names;
    if (j.contains("variables"))
      new_names = j["variables"].get<std::vector<std::string>>();
    else if (j.contains("inverse"))
      for (const auto& [k, v] : j["inverse"].items()) new_names.push_back(k);
    else
      throw InputError("change file needs \"variables\" or \"inverse\"");
    if (new_names.size() != op_vars.size()) throw InputError("change has the wrong number of new variables");

    sym::Workspace fw;  // new variables
    sym::Workspace bw;  // old variables
    for (const auto& name : new_names) fw.add_variable(name);
    for (Symbol s : op_vars) bw.add_variable(s.name());
    if (j.contains("constants"))
      for (const auto& c : j["constants"]) {
        fw.add_constant(c.get<std::string>());
        bw.add_constant(c.get<std::string>());
      }
    if (j.contains("functions"))
      for (const auto& f : j["functions"]) {
        auto name = f.at("name").get<std::string>();
        auto args = f.at("args").get<std::vector<std::string>>();
        bool on_new = std::all_of(args.begin(), args.end(), [&](const std::string& a) { return fw.find_symbol(a).has_value(); });
        bool on_old = std::all_of(args.begin(), args.end(), [&](const std::string& a) { return bw.find_symbol(a).has_value(); });
        if (!on_new && !on_old) throw InputError("function '" + name + "' has arguments of neither side");
        // One definition serves both sides, so phi(v3) and phi(u3) share atoms.
        const sym::FunctionDef* def = on_new ? fw.add_function(name, args) : bw.add_function(name, args);
        (on_new ? bw : fw).add_function(def);
      }
    auto parse = [](const sym::Workspace& ws, const json& text, const std::string& where) {
      try {
        return ws.parse(text.get<std::string>());
      } catch (const sym::ParseError& e) {
        throw InputError(where + ": " + e.what());
      }
    };
    std::vector<Expr> forward;
    for (Symbol s : op_vars) {
      if (!fwd.contains(s.name())) throw InputError("forward map lacks '" + s.name() + "'");
      forward.push_back(parse(fw, fwd[s.name()], "forward." + s.name()));
    }
    if (fwd.size() != op_vars.size()) throw InputError("forward map has extra entries");
    std::optional<std::vector<Expr>> inverse;
    if (j.contains("inverse")) {
      inverse.emplace();
      for (const auto& name : new_names) {
        if (!j["inverse"].contains(name)) throw InputError("inverse map lacks '" + name + "'");
        inverse->push_back(parse(bw, j["inverse"][name], "inverse." + name));
      }
    }
    return CoordinateChange(op_vars, fw.variables(), forward, inverse);
  } catch (const json::exception& e) {
    throw InputError(std::string("change file: ") + e.what());
  } catch (const ChangeError& e) {
    throw InputError(std::string("change file: ") + e.what());
  }
}

json change_to_json(const CoordinateChange& c) {
  json j;
  std::vector<std::string> names;
  for (Symbol s : c.new_vars()) names.push_back(s.name());
  j["variables"] = names;
  std::set<std::string> consts;
  std::set<const sym::FunctionDef*> fns;
  auto scan = [&](const Expr& e) {
    for (Symbol s : sym::free_symbols(e))
      if (!s.is_variable()) consts.insert(s.name());
    for (const auto* f : sym::functions_used(e)) fns.insert(f);
  };
  for (int i = 0; i < c.n(); ++i) {
    j["forward"][c.old_vars()[i].name()] = sym::print(c.forward()[i]);
    scan(c.forward()[i]);
    if (c.inverse()) {
      j["inverse"][c.new_vars()[i].name()] = sym::print((*c.inverse())[i]);
      scan((*c.inverse())[i]);
    }
  }
  if (!consts.empty()) j["constants"] = consts;
  for (const auto* f : fns) {
    std::vector<std::string> args;
    for (Symbol s : f->params) args.push_back(s.name());
    j["functions"].push_back({{"name", f->name}, {"args", args}});
  }
  return j;
}

CoordinateChange load_change(const std::filesystem::path& path, const std::vector<Symbol>& op_vars) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return change_from_json(j, op_vars);
}

const std::vector<ChangeFixture>& fixture_changes() {
  static const std::vector<ChangeFixture> fixtures{
      {"shear-square", 2, {"v1 + v2^2", "v2"}, {"u1 - u2^2", "u2"}},
      {"scale-shift", 2, {"2*v1", "v2 + 1"}, {"u1/2", "u2 - 1"}},
      {"product", 2, {"v1*v2", "v2"}, {"u1/u2", "u2"}},
      {"stabilizer", 3, {"v1 + v3", "v2", "v3"}, {"u1 - u3", "u2", "u3"}},
      {"bilinear-shear", 3, {"v1 + v2*v3", "v2", "v3"}, {"u1 - u2*u3", "u2", "u3"}},
      {"square-shear", 3, {"v1", "v2 + v3^2", "v3"}, {"u1", "u2 - u3^2", "u3"}},
      {"rational-scale", 3, {"v1/(1 + v3)", "v2", "v3"}, {"u1*(1 + u3)", "u2", "u3"}},
      {"affine", 3, {"2*v1 - v2", "v2 + 3*v3", "v3/2"}, {"(u1 + u2 - 6*u3)/2", "u2 - 6*u3", "2*u3"}},
      {"product-3", 3, {"v1", "v2*v3", "v3"}, {"u1", "u2/u3", "u3"}},
      {"swap", 3, {"v2", "v1", "v3"}, {"u2", "u1", "u3"}},
  };
  return fixtures;
}

CoordinateChange make_change(const ChangeFixture& f, const std::vector<Symbol>& old_vars) {
  if (static_cast<int>(old_vars.size()) != f.n) throw ChangeError("fixture " + f.name + " has the wrong size");
  sym::Workspace fw;
  sym::Workspace bw;
  for (int i = 1; i <= f.n; ++i) fw.add_variable("v" + std::to_string(i));
  for (Symbol s : old_vars) bw.add_variable(s.name());
  std::vector<Expr> fwd;
  std::vector<Expr> inv;
  for (const auto& t : f.forward) fwd.push_back(fw.parse(t));
  for (const auto& t : f.inverse) inv.push_back(bw.parse(t));
  return CoordinateChange(old_vars, fw.variables(), fwd, inv);
}

}  // namespace hydro
