#include "hydro/hamsys.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "hydro/operator_io.hpp"

namespace hydro::hamsys {

using nlohmann::json;
using sym::Fraction;
using FMatrix = std::vector<std::vector<Fraction>>;

namespace {

Expr expr_of(const Fraction& f) { return sym::to_expr(sym::normalize(f)); }

Fraction d(const Fraction& f, Symbol v) { return f.derivative(v.id()); }

bool zero(const Fraction& f, const sym::ZeroPolicy& policy) {
  if (f.is_zero()) return true;
  try {
    return sym::is_zero(f, policy).zero();
  } catch (const sym::InconclusiveError&) {
    return false;
  }
}

FMatrix fractions(const Matrix& m) {
  FMatrix out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const auto& e : row) out.back().push_back(sym::to_fraction(e));
  }
  return out;
}

std::vector<int> all_but(const std::vector<int>& s, int i) {
  std::vector<int> out;
  for (int k : s)
    if (k != i) out.push_back(k);
  return out;
}

std::string one_based(const std::vector<int>& v) {
  std::string s;
  for (int i : v) s += (s.empty() ? "u" : ",u") + std::to_string(i + 1);
  return s;
}

}  // namespace

HamiltonianDensity abstract_density(const HydroOperator& op) {
  std::string name = "h";
  for (const auto* f : op.functions)
    if (f->name == "h") name = "H";
  const auto* def = sym::FunctionDef::intern(name, op.vars);
  return {sym::apply(def), {def}};
}

QuasilinearSystem generate_system(const HydroOperator& op, const Expr& h, std::string operator_id) {
  if (op.d > 2) throw std::invalid_argument("systems are generated for d <= 2");
  op.validate();
  for (Symbol s : sym::free_symbols(h))
    if (s.is_variable() && std::find(op.vars.begin(), op.vars.end(), s) == op.vars.end())
      throw std::invalid_argument("density depends on '" + s.name() + "', which is not an operator variable");
  const int n = op.n;
  Fraction hf = sym::to_fraction(h);
  std::vector<Fraction> grad;
  FMatrix hess(n);
  for (int j = 0; j < n; ++j) grad.push_back(d(hf, op.vars[j]));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) hess[j].push_back(k < j ? hess[k][j] : d(grad[j], op.vars[k]));

  auto block = [&](int a) {
    Matrix m(n, std::vector<Expr>(n, Expr(0L)));
    if (a >= op.d) return m;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Fraction s;
        for (int j = 0; j < n; ++j)
          s += sym::to_fraction(op.g[a][i][j]) * hess[j][k] + sym::to_fraction(op.b[a][i][j][k]) * grad[j];
        m[i][k] = expr_of(s);
      }
    return m;
  };
  QuasilinearSystem sys;
  sys.n = n;
  sys.vars = op.vars;
  sys.A = block(0);
  sys.B = block(1);
  sys.operator_id = std::move(operator_id);
  sys.density = h;
  sys.op = op;
  return sys;
}

Symbol lambda_parameter() { return Symbol::constant("lambda"); }
Symbol mu_parameter() { return Symbol::constant("mu"); }

ParamPolynomial dispersion(const QuasilinearSystem& sys) {
  Fraction lam = Fraction::var(lambda_parameter().id());
  Fraction mu = Fraction::var(mu_parameter().id());
  FMatrix A = fractions(sys.A);
  FMatrix B = fractions(sys.B);
  FMatrix m(sys.n);
  for (int i = 0; i < sys.n; ++i)
    for (int k = 0; k < sys.n; ++k)
      m[i].push_back(Fraction(mpq_class(i == k ? 1 : 0)) + lam * A[i][k] + mu * B[i][k]);
  return split_by_params(determinant(m), {lambda_parameter(), mu_parameter()});
}

std::vector<Symbol> riemann_invariants(int m) {
  std::vector<Symbol> out;
  for (int i = 1; i <= m; ++i) out.push_back(Symbol::variable("R" + std::to_string(i)));
  return out;
}

void ReductionCandidate::validate(int n) const {
  if (m < 1) throw std::invalid_argument("a candidate needs m >= 1");
  auto sz = static_cast<std::size_t>(m);
  if (R.size() != sz || lambda.size() != sz || mu.size() != sz)
    throw std::invalid_argument("candidate needs m Riemann invariants and m speeds of each kind");
  if (v && v->size() != sz) throw std::invalid_argument("candidate needs m commuting-flow speeds");
  if (n >= 0 && u.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("candidate needs one expression per field variable");
}

ConditionReport commutativity_residual(const ReductionCandidate& c, const sym::ZeroPolicy& policy) {
  c.validate(-1);
  if (c.m < 2) throw std::invalid_argument("commutativity needs m >= 2");
  std::vector<Fraction> lam;
  std::vector<Fraction> mu;
  for (int i = 0; i < c.m; ++i) {
    lam.push_back(sym::to_fraction(c.lambda[i]));
    mu.push_back(sym::to_fraction(c.mu[i]));
  }
  for (int i = 0; i < c.m; ++i)
    for (int j = i + 1; j < c.m; ++j) {
      if (zero(lam[i] - lam[j], policy))
        throw DegenerateCandidateError("lambda" + std::to_string(i + 1) + " and lambda" + std::to_string(j + 1) + " coincide");
      if (zero(mu[i] - mu[j], policy))
        throw DegenerateCandidateError("mu" + std::to_string(i + 1) + " and mu" + std::to_string(j + 1) + " coincide");
    }
  ConditionReport rep;
  for (int i = 0; i < c.m; ++i)
    for (int j = 0; j < c.m; ++j) {
      if (i == j) continue;
      Fraction r = d(lam[i], c.R[j]) * (mu[j] - mu[i]) - d(mu[i], c.R[j]) * (lam[j] - lam[i]);
      rep.add(make_residual("comm", {i + 1, j + 1}, r, policy));
    }
  return rep;
}

ConditionReport reduction_residual(const ReductionCandidate& c, const QuasilinearSystem& sys,
                                   const sym::ZeroPolicy& policy) {
  c.validate(sys.n);
  std::map<Symbol, Expr> at;
  for (int k = 0; k < sys.n; ++k) at[sys.vars[k]] = c.u[k];
  FMatrix A(sys.n);
  FMatrix B(sys.n);
  for (int r = 0; r < sys.n; ++r)
    for (int k = 0; k < sys.n; ++k) {
      A[r].push_back(sym::to_fraction(sym::substitute(sys.A[r][k], at)));
      B[r].push_back(sym::to_fraction(sym::substitute(sys.B[r][k], at)));
    }
  std::vector<Fraction> u;
  for (const auto& e : c.u) u.push_back(sym::to_fraction(e));
  ConditionReport rep;
  for (int i = 0; i < c.m; ++i) {
    Fraction lam = sym::to_fraction(c.lambda[i]);
    Fraction mu = sym::to_fraction(c.mu[i]);
    std::vector<Fraction> du;
    for (const auto& uk : u) du.push_back(d(uk, c.R[i]));
    for (int r = 0; r < sys.n; ++r) {
      Fraction s = du[r];
      for (int k = 0; k < sys.n; ++k) s += (lam * A[r][k] + mu * B[r][k]) * du[k];
      rep.add(make_residual("reduction", {i + 1, r + 1}, s, policy));
    }
  }
  return rep;
}

HodographReport hodograph_residual(const ReductionCandidate& c, const std::vector<sym::Number>& R0,
                                   const sym::Number& t, const sym::Number& x, const sym::Number& y,
                                   const sym::ZeroPolicy& policy) {
  c.validate(-1);
  if (!c.v) throw std::invalid_argument("hodograph check needs commuting-flow speeds v");
  if (R0.size() != static_cast<std::size_t>(c.m)) throw std::invalid_argument("R0 needs m values");
  HodographReport out;
  std::vector<Fraction> lam;
  std::vector<Fraction> v;
  for (int i = 0; i < c.m; ++i) {
    lam.push_back(sym::to_fraction(c.lambda[i]));
    v.push_back(sym::to_fraction((*c.v)[i]));
  }
  for (int i = 0; i < c.m; ++i)
    for (int j = 0; j < c.m; ++j) {
      if (i == j) continue;
      Fraction r = d(v[i], c.R[j]) * (lam[j] - lam[i]) - d(lam[i], c.R[j]) * (v[j] - v[i]);
      out.comm1.add(make_residual("comm1", {i + 1, j + 1}, r, policy));
    }
  sym::Point p;
  p.precision = policy.precision;
  for (int j = 0; j < c.m; ++j) p.values[c.R[j]] = R0[j];
  for (int i = 0; i < c.m; ++i)
    out.values.push_back(sym::evaluate((*c.v)[i], p) - x - sym::evaluate(c.lambda[i], p) * t -
                         sym::evaluate(c.mu[i], p) * y);
  return out;
}

std::string to_string(Shape s) {
  switch (s) {
    case Shape::Trivial: return "trivial";
    case Shape::Transport1D: return "transport-1D";
    case Shape::Decoupled1D: return "decoupled-2-component(1D)";
    case Shape::Decoupled1: return "decoupled-2-component(form 1)";
    case Shape::Decoupled2: return "decoupled-2-component(form 2)";
    case Shape::Decoupled3: return "decoupled-2-component(form 3)";
    case Shape::EulerLagrange: return "euler-lagrange-reducible";
    case Shape::Unclassified: return "unclassified";
  }
  return "unclassified";
}

namespace {

struct Fluxes {
  std::vector<Fraction> F;
  std::vector<Fraction> G;
};

class Classifier {
 public:
  Classifier(const QuasilinearSystem& sys, const sym::ZeroPolicy& policy)
      : sys_(sys), policy_(policy), A_(fractions(sys.A)), B_(fractions(sys.B)), h_(sym::to_fraction(sys.density)) {}

  ShapeResult run() {
    ShapeResult res;
    std::vector<int> S(sys_.n);
    std::iota(S.begin(), S.end(), 0);
    freeze(S, res.frozen);
    res.remaining = S;
    for (int& i : res.frozen) ++i;
    for (int& i : res.remaining) ++i;
    if (S.empty()) {
      res.shape = Shape::Trivial;
      res.note = "every variable frozen";
    } else if (S.size() == 1) {
      transport(S[0], res);
    } else if (S.size() == 2) {
      two_component(S, res);
    } else if (S.size() == 3) {
      lagrangian(S, res);
    } else {
      res.note = "more than three active variables";
    }
    return res;
  }

 private:
  bool zero(const Fraction& f) const { return hamsys::zero(f, policy_); }

  bool row_zero(int i, const std::vector<int>& S) const {
    return std::all_of(S.begin(), S.end(), [&](int k) { return zero(A_[i][k]) && zero(B_[i][k]); });
  }

  // u^i_t + phi u^i_x + psi u^i_y = 0 once frozen columns are dropped.
  bool transport_row(int i, const std::vector<int>& S) const { return row_zero(i, all_but(S, i)); }

  void freeze(std::vector<int>& S, std::vector<int>& frozen) const {
    for (;;) {
      std::vector<int> cand;
      std::vector<int> zeros;
      for (int i : S) {
        if (!transport_row(i, S)) continue;
        cand.push_back(i);
        if (zero(A_[i][i]) && zero(B_[i][i])) zeros.push_back(i);
      }
      // The last moving variable is not frozen unless its row vanishes.
      std::vector<int> chosen = cand.size() == S.size() ? zeros : cand;
      if (chosen.empty()) return;
      for (int i : chosen) {
        frozen.push_back(i);
        S.erase(std::find(S.begin(), S.end(), i));
      }
    }
  }

  void transport(int i, ShapeResult& res) const {
    Symbol u = sys_.vars[i];
    res.roles = {i + 1};
    if (zero(A_[i][i])) {
      res.shape = Shape::Transport1D;
      res.note = "transport along y";
      return;
    }
    Fraction ratio = B_[i][i] / A_[i][i];
    if (zero(d(ratio, u))) {
      res.shape = Shape::Transport1D;
      res.note = "u_y coefficient / u_x coefficient = " + sym::print(expr_of(ratio));
    } else {
      res.note = "direction of transport depends on " + u.name();
    }
  }

  Fraction hd(int i) const { return d(h_, sys_.vars[i]); }

  // Compares rows/columns `vars` of the system against flux Jacobians.
  bool matches(const std::vector<int>& vars, const Fluxes& f, bool swap_axes) const {
    const FMatrix& X = swap_axes ? B_ : A_;
    const FMatrix& Y = swap_axes ? A_ : B_;
    for (std::size_t r = 0; r < vars.size(); ++r)
      for (std::size_t c = 0; c < vars.size(); ++c) {
        Symbol u = sys_.vars[vars[c]];
        if (!zero(X[vars[r]][vars[c]] - d(f.F[r], u))) return false;
        if (!zero(Y[vars[r]][vars[c]] - d(f.G[r], u))) return false;
      }
    return true;
  }

  void two_component(const std::vector<int>& S, ShapeResult& res) const {
    const std::pair<Shape, std::string> forms[] = {
        {Shape::Decoupled1D, "1D"}, {Shape::Decoupled1, "form 1"}, {Shape::Decoupled2, "form 2"}, {Shape::Decoupled3, "form 3"}};
    for (int swap = 0; swap < 2; ++swap)
      for (int order = 0; order < 2; ++order) {
        std::vector<int> vars = order ? std::vector<int>{S[1], S[0]} : S;
        Fraction u1 = Fraction::var(sys_.vars[vars[0]].id());
        Fraction u2 = Fraction::var(sys_.vars[vars[1]].id());
        Fraction h1 = hd(vars[0]);
        Fraction h2 = hd(vars[1]);
        Fraction two(mpq_class(2));
        for (const auto& [shape, label] : forms) {
          Fluxes f;
          switch (shape) {
            case Shape::Decoupled1D: f = {{h2, h1}, {Fraction(), Fraction()}}; break;
            case Shape::Decoupled1: f = {{h1, Fraction()}, {Fraction(), h2}}; break;
            case Shape::Decoupled2: f = {{h2, h1}, {Fraction(), h2}}; break;
            default:
              f = {{two * u1 * h1 + u2 * h2 - h_, u2 * h1}, {u1 * h2, two * u2 * h2 + u1 * h1 - h_}};
          }
          if (matches(vars, f, swap != 0)) {
            res.shape = shape;
            res.roles = {vars[0] + 1, vars[1] + 1};
            res.note = "flux form of " + label + (swap ? " with x and y exchanged" : "");
            return;
          }
        }
      }
    reduced_operator(S, res);
  }

  // Classifies the 2x2 block of the generating operator up to changes of the
  // field variables and linear changes of x, y.
  void reduced_operator(const std::vector<int>& S, ShapeResult& res) const {
    if (!sys_.op || sys_.op->d != 2) {
      res.note = "no flux match and no two-dimensional operator to fall back on";
      return;
    }
    const HydroOperator& op = *sys_.op;
    for (int a = 0; a < 2; ++a)
      for (int i : S)
        for (int j = 0; j < op.n; ++j) {
          if (std::find(S.begin(), S.end(), j) != S.end()) continue;
          bool coupled = !zero(sym::to_fraction(op.g[a][i][j]));
          for (int k : S) coupled = coupled || !zero(sym::to_fraction(op.b[a][i][j][k]));
          if (coupled) {
            res.note = "active block is coupled to frozen variables";
            return;
          }
        }
    FMatrix g[2];
    std::vector<FMatrix> b[2];
    for (int a = 0; a < 2; ++a) {
      g[a] = FMatrix(2, std::vector<Fraction>(2));
      b[a] = std::vector<FMatrix>(2, FMatrix(2, std::vector<Fraction>(2)));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          g[a][i][j] = sym::to_fraction(op.g[a][S[i]][S[j]]);
          for (int k = 0; k < 2; ++k) b[a][i][j][k] = sym::to_fraction(op.b[a][S[i]][S[j]][S[k]]);
        }
    }
    // Connections of two nondegenerate members g^x + t g^y of the pencil.
    std::vector<std::vector<FMatrix>> gammas;
    for (long t : {0L, 1L, -1L, 2L, -2L, 3L, -3L, 5L, 7L}) {
      Fraction tf{mpq_class(t)};
      FMatrix G(2, std::vector<Fraction>(2));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) G[i][j] = g[0][i][j] + tf * g[1][i][j];
      Fraction det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
      if (zero(det)) continue;
      FMatrix inv{{G[1][1] / det, -G[0][1] / det}, {-G[1][0] / det, G[0][0] / det}};
      std::vector<FMatrix> gamma(2, FMatrix(2, std::vector<Fraction>(2)));  // gamma[j][s][k]
      for (int j = 0; j < 2; ++j)
        for (int s = 0; s < 2; ++s)
          for (int k = 0; k < 2; ++k) {
            Fraction v;
            for (int i = 0; i < 2; ++i) v -= inv[s][i] * (b[0][i][j][k] + tf * b[1][i][j][k]);
            gamma[j][s][k] = v;
          }
      gammas.push_back(std::move(gamma));
      if (gammas.size() == 2) break;
    }
    if (gammas.size() < 2) {
      res.note = "metric pencil of the active block is degenerate";
      return;
    }
    res.roles = {S[0] + 1, S[1] + 1};
    for (int j = 0; j < 2; ++j)
      for (int s = 0; s < 2; ++s)
        for (int k = 0; k < 2; ++k)
          if (!zero(gammas[0][j][s][k] - gammas[1][j][s][k])) {
            res.shape = Shape::Decoupled3;
            res.note = "non-constant block: the two metrics have different flat coordinates";
            return;
          }
    bool proportional = true;
    for (int p = 0; p < 4 && proportional; ++p)
      for (int q = 0; q < 4 && proportional; ++q)
        proportional = zero(g[0][p / 2][p % 2] * g[1][q / 2][q % 2] - g[0][q / 2][q % 2] * g[1][p / 2][p % 2]);
    if (proportional) {
      res.shape = Shape::Decoupled1D;
      res.note = "constant block with proportional metrics";
      return;
    }
    // det(l g^x + m g^y) = c2 l^2 + c1 l m + c0 m^2.
    auto det2 = [](const FMatrix& p, const FMatrix& q) { return p[0][0] * q[1][1] - p[0][1] * q[1][0]; };
    Fraction c2 = det2(g[0], g[0]);
    Fraction c0 = det2(g[1], g[1]);
    Fraction c1 = det2(g[0], g[1]) + det2(g[1], g[0]);
    Fraction disc = c1 * c1 - Fraction(mpq_class(4)) * c2 * c0;
    if (zero(disc)) {
      res.shape = Shape::Decoupled2;
      res.note = "constant block, metric pencil with a double root";
    } else {
      res.shape = Shape::Decoupled1;
      res.note = "constant block, metric pencil with distinct roots";
    }
  }

  // u^a_t + (h_b)_x + (h_c)_y = 0, u^b_t + (h_a)_x = 0, u^c_t + (h_a)_y = 0,
  // allowing extra terms proportional to u^b_y - u^c_x.
  void lagrangian(const std::vector<int>& S, ShapeResult& res) const {
    std::vector<int> perm = S;
    do {
      int a = perm[0], b = perm[1], c = perm[2];
      std::vector<Fraction> F(sys_.n);
      std::vector<Fraction> G(sys_.n);
      F[a] = hd(b);
      G[a] = hd(c);
      F[b] = hd(a);
      G[c] = hd(a);
      bool ok = true;
      bool exact = true;
      for (int r : S) {
        for (int k : S) {
          Fraction dA = A_[r][k] - d(F[r], sys_.vars[k]);
          Fraction dB = B_[r][k] - d(G[r], sys_.vars[k]);
          if (k == c) {
            exact = exact && zero(dA);
          } else if (!zero(dA)) {
            ok = false;
          }
          if (k == b) {
            exact = exact && zero(dB);
          } else if (!zero(dB)) {
            ok = false;
          }
        }
        if (!ok) break;
        Fraction vort = (B_[r][b] - d(G[r], sys_.vars[b])) + (A_[r][c] - d(F[r], sys_.vars[c]));
        if (!zero(vort)) ok = false;
        if (!ok) break;
      }
      if (ok) {
        res.shape = Shape::EulerLagrange;
        res.roles = {a + 1, b + 1, c + 1};
        Symbol ub = sys_.vars[b], uc = sys_.vars[c];
        res.note = exact ? "exact match" : "match under " + ub.name() + "_y = " + uc.name() + "_x";
        return;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    res.note = "no match for active variables " + one_based(S);
  }

  const QuasilinearSystem& sys_;
  const sym::ZeroPolicy& policy_;
  FMatrix A_;
  FMatrix B_;
  Fraction h_;
};

}  // namespace

ShapeResult shape_classify(const QuasilinearSystem& sys, const sym::ZeroPolicy& policy) {
  return Classifier(sys, policy).run();
}

namespace {

void add_functions(sym::Workspace& ws, const json& j) {
  if (!j.contains("functions")) return;
  for (const auto& f : j["functions"]) {
    auto name = f.at("name").get<std::string>();
    if (ws.find_function(name)) continue;
    ws.add_function(name, f.at("args").get<std::vector<std::string>>());
  }
}

Expr parse_field(const sym::Workspace& ws, const json& text, const std::string& where) {
  try {
    return ws.parse(text.get<std::string>());
  } catch (const sym::ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace

HamiltonianDensity density_from_json(const json& j, const HydroOperator& op) {
  try {
    sym::Workspace ws = op.workspace();
    if (j.contains("constants"))
      for (const auto& c : j["constants"])
        if (!ws.has_name(c.get<std::string>())) ws.add_constant(c.get<std::string>());
    add_functions(ws, j);
    HamiltonianDensity out;
    out.h = parse_field(ws, j.at("h"), "h");
    for (const auto* f : sym::functions_used(out.h)) out.functions.push_back(f);
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("density file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("density file: ") + e.what());
  }
}

HamiltonianDensity load_density(const std::string& path, const HydroOperator& op) {
  return density_from_json(read_json(path), op);
}

ReductionCandidate candidate_from_json(const json& j) {
  try {
    ReductionCandidate c;
    c.m = j.at("m").get<int>();
    if (c.m < 1) throw InputError("candidate needs m >= 1");
    c.R = riemann_invariants(c.m);
    sym::Workspace ws;
    for (Symbol r : c.R) ws.add_variable(r.name());
    if (j.contains("constants"))
      for (const auto& k : j["constants"]) ws.add_constant(k.get<std::string>());
    add_functions(ws, j);
    auto list = [&](const char* key) {
      std::vector<Expr> out;
      std::size_t i = 0;
      for (const auto& t : j.at(key)) out.push_back(parse_field(ws, t, std::string(key) + "[" + std::to_string(i++) + "]"));
      return out;
    };
    c.u = list("u");
    c.lambda = list("lambda");
    c.mu = list("mu");
    if (j.contains("v")) c.v = list("v");
    c.functions = ws.functions();
    c.validate(-1);
    return c;
  } catch (const json::exception& e) {
    throw InputError(std::string("candidate file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("candidate file: ") + e.what());
  }
}

ReductionCandidate load_candidate(const std::string& path) { return candidate_from_json(read_json(path)); }

json system_to_json(const QuasilinearSystem& sys) {
  json j;
  j["operator"] = sys.operator_id;
  j["density"] = sym::print(sys.density);
  j["variables"] = json::array();
  for (Symbol s : sys.vars) j["variables"].push_back(s.name());
  auto mat = [](const Matrix& m) {
    json out = json::array();
    for (const auto& row : m) {
      json r = json::array();
      for (const auto& e : row) r.push_back(sym::print(e));
      out.push_back(r);
    }
    return out;
  };
  j["A"] = mat(sys.A);
  j["B"] = mat(sys.B);
  return j;
}

}  // namespace hydro::hamsys
