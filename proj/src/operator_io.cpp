#include "hydro/operator_io.hpp"

#include <fstream>

namespace hydro {

using nlohmann::json;
using sym::Fraction;

namespace {

std::string marker_axis(int a, int d) {
  std::string s = axis_name(a, d);
  return "D" + s;
}

sym::Workspace make_workspace(const OperatorSignature& sig) {
  sym::Workspace ws;
  for (const auto& v : sig.vars) ws.add_variable(v);
  for (const auto& c : sig.constants) ws.add_constant(c);
  for (const auto& [name, args] : sig.functions) ws.add_function(name, args);
  return ws;
}

HydroOperator shell(const OperatorSignature& sig, const sym::Workspace& ws) {
  HydroOperator op = HydroOperator::zero(sig.d, ws.variables());
  op.constants = ws.constants();
  op.functions = ws.functions();
  return op;
}

Expr parse_entry(const sym::Workspace& ws, const std::string& text, const std::string& where) {
  try {
    return ws.parse(text);
  } catch (const sym::ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

}  // namespace

HydroOperator operator_from_matrix(const OperatorSignature& sig,
                                   const std::vector<std::vector<std::string>>& entries) {
  sym::Workspace ws = make_workspace(sig);
  HydroOperator op = shell(sig, ws);
  const int n = op.n;
  if (static_cast<int>(entries.size()) != n) throw InputError("matrix must have one row per variable");

  sym::Workspace marked = ws;
  std::vector<Symbol> axis;
  std::vector<std::vector<Symbol>> jets(sig.d);
  for (int a = 0; a < sig.d; ++a) {
    axis.push_back(marked.add_constant(marker_axis(a, sig.d)));
    for (const auto& v : sig.vars) jets[a].push_back(marked.add_constant(v + "_" + axis_name(a, sig.d)));
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(entries[i].size()) != n) throw InputError("matrix must be square");
    for (int j = 0; j < n; ++j) {
      std::string where = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
      Fraction f = sym::to_fraction(parse_entry(marked, entries[i][j], where));
      Fraction rest = f;
      auto take = [&](Symbol m) {
        Fraction c = f.derivative(m.id());
        for (Symbol s : axis)
          if (!c.derivative(s.id()).is_zero()) throw InputError(where + " is not linear in the markers");
        for (const auto& row : jets)
          for (Symbol s : row)
            if (!c.derivative(s.id()).is_zero()) throw InputError(where + " is not linear in the markers");
        rest = rest - c * sym::to_fraction(Expr(m));
        return sym::to_expr(sym::normalize(c));
      };
      for (int a = 0; a < sig.d; ++a) {
        op.g[a][i][j] = take(axis[a]);
        for (int k = 0; k < n; ++k) op.b[a][i][j][k] = take(jets[a][k]);
      }
      if (!rest.is_zero()) throw InputError(where + " has a term without a derivative");
    }
  }
  op.validate();
  return op;
}

std::vector<std::vector<std::string>> operator_to_matrix(const HydroOperator& op) {
  std::vector<std::vector<std::string>> out(op.n, std::vector<std::string>(op.n));
  for (int i = 0; i < op.n; ++i)
    for (int j = 0; j < op.n; ++j) {
      std::vector<Expr> terms;
      for (int a = 0; a < op.d; ++a) {
        terms.push_back(sym::times(op.g[a][i][j], Expr(Symbol::constant(marker_axis(a, op.d)))));
        for (int k = 0; k < op.n; ++k)
          terms.push_back(sym::times(op.b[a][i][j][k],
                                     Expr(Symbol::constant(op.vars[k].name() + "_" + axis_name(a, op.d)))));
      }
      out[i][j] = sym::print(sym::to_expr(sym::normalize(sym::sum(terms))));
    }
  return out;
}

HydroOperator operator_from_json(const json& j) {
  try {
    OperatorSignature sig;
    sig.d = j.at("dimension").get<int>();
    if (sig.d < 1) throw InputError("dimension must be positive");
    const int n = j.at("components").get<int>();
    sig.vars = j.at("variables").get<std::vector<std::string>>();
    if (static_cast<int>(sig.vars.size()) != n) throw InputError("components does not match the variable count");
    if (j.contains("constants")) sig.constants = j["constants"].get<std::vector<std::string>>();
    if (j.contains("functions"))
      for (const auto& f : j["functions"])
        sig.functions.emplace_back(f.at("name").get<std::string>(), f.at("args").get<std::vector<std::string>>());
    sym::Workspace ws = make_workspace(sig);
    HydroOperator op = shell(sig, ws);
    for (int a = 0; a < sig.d; ++a) {
      std::string ax = axis_name(a, sig.d);
      const json& g = j.at("metrics").at(ax);
      const json& b = j.at("b").at(ax);
      if (static_cast<int>(g.size()) != n || static_cast<int>(b.size()) != n)
        throw InputError("axis " + ax + ": wrong number of rows");
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(g[i].size()) != n || static_cast<int>(b[i].size()) != n)
          throw InputError("axis " + ax + ": wrong row length");
        for (int k = 0; k < n; ++k) {
          std::string where = "metrics." + ax + "[" + std::to_string(i) + "][" + std::to_string(k) + "]";
          op.g[a][i][k] = parse_entry(ws, g[i][k].get<std::string>(), where);
          if (static_cast<int>(b[i][k].size()) != n) throw InputError("axis " + ax + ": wrong b depth");
          for (int l = 0; l < n; ++l)
            op.b[a][i][k][l] = parse_entry(ws, b[i][k][l].get<std::string>(),
                                           "b." + ax + "[" + std::to_string(i) + "][" + std::to_string(k) + "][" +
                                               std::to_string(l) + "]");
        }
      }
    }
    op.validate();
    return op;
  } catch (const json::exception& e) {
    throw InputError(std::string("operator file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("operator file: ") + e.what());
  }
}

json operator_to_json(const HydroOperator& op) {
  json j;
  j["dimension"] = op.d;
  j["components"] = op.n;
  std::vector<std::string> vars;
  for (Symbol s : op.vars) vars.push_back(s.name());
  j["variables"] = vars;
  std::vector<std::string> consts;
  for (Symbol s : op.constants) consts.push_back(s.name());
  j["constants"] = consts;
  j["functions"] = json::array();
  for (const auto* f : op.functions) {
    std::vector<std::string> args;
    for (Symbol s : f->params) args.push_back(s.name());
    j["functions"].push_back({{"name", f->name}, {"args", args}});
  }
  for (int a = 0; a < op.d; ++a) {
    std::string ax = axis_name(a, op.d);
    json g = json::array();
    json b = json::array();
    for (int i = 0; i < op.n; ++i) {
      json grow = json::array();
      json brow = json::array();
      for (int k = 0; k < op.n; ++k) {
        grow.push_back(sym::print(op.g[a][i][k]));
        json bl = json::array();
        for (int l = 0; l < op.n; ++l) bl.push_back(sym::print(op.b[a][i][k][l]));
        brow.push_back(bl);
      }
      g.push_back(grow);
      b.push_back(brow);
    }
    j["metrics"][ax] = g;
    j["b"][ax] = b;
  }
  return j;
}

HydroOperator load_operator(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return operator_from_json(j);
}

void save_operator(const HydroOperator& op, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << operator_to_json(op).dump(2) << "\n";
}

}  // namespace hydro
