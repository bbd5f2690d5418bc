#include <chrono>
#include <functional>
#include <stdexcept>

#include "hydro/opcore.hpp"

namespace hydro {

using sym::Fraction;
using sym::VarIndex;

HydroOperator HydroOperator::zero(int d, std::vector<Symbol> vars) {
  HydroOperator op;
  op.d = d;
  op.n = static_cast<int>(vars.size());
  op.vars = std::move(vars);
  std::size_t n = op.vars.size();
  op.g.assign(d, Matrix(n, std::vector<Expr>(n, Expr(0L))));
  op.b.assign(d, Tensor3(n, Matrix(n, std::vector<Expr>(n, Expr(0L)))));
  return op;
}

void HydroOperator::validate() const {
  if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  if (n < 1 || static_cast<int>(vars.size()) != n) throw std::invalid_argument("component count must match variables");
  auto un = static_cast<std::size_t>(n);
  if (g.size() != static_cast<std::size_t>(d) || b.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("coefficient arrays must have one slice per dimension");
  std::set<Symbol> allowed(vars.begin(), vars.end());
  allowed.insert(constants.begin(), constants.end());
  auto check = [&](const Expr& e, const std::string& where) {
    for (Symbol s : sym::free_symbols(e)) {
      bool ok = allowed.count(s) > 0;
      if (!ok) {
        // Function arguments may only be operator variables as well.
        throw std::invalid_argument("entry " + where + " uses '" + s.name() + "', which is not an operator variable");
      }
    }
  };
  for (int a = 0; a < d; ++a) {
    if (g[a].size() != un) throw std::invalid_argument("metric must be n x n");
    if (b[a].size() != un) throw std::invalid_argument("b must be n x n x n");
    for (std::size_t i = 0; i < un; ++i) {
      if (g[a][i].size() != un || b[a][i].size() != un) throw std::invalid_argument("ragged coefficient array");
      for (std::size_t j = 0; j < un; ++j) {
        check(g[a][i][j], "g");
        if (b[a][i][j].size() != un) throw std::invalid_argument("ragged coefficient array");
        for (std::size_t k = 0; k < un; ++k) check(b[a][i][j][k], "b");
      }
    }
  }
}

HydroOperator HydroOperator::axis(int a) const {
  HydroOperator op = *this;
  op.d = 1;
  op.g = {g.at(a)};
  op.b = {b.at(a)};
  return op;
}

sym::Workspace HydroOperator::workspace() const {
  sym::Workspace ws;
  for (Symbol s : vars) ws.add_variable(s.name());
  for (Symbol s : constants) ws.add_constant(s.name());
  for (const auto* f : functions) ws.add_function(f);
  return ws;
}

std::string axis_name(int a, int d) {
  if (d <= 2) return a == 0 ? "x" : "y";
  return "x" + std::to_string(a + 1);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ProvenPass: return "ProvenPass";
    case Verdict::ProbablyPass: return "ProbablyPass";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::Fail: return "Fail";
  }
  return "?";
}

Verdict combine(Verdict a, Verdict b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

Verdict verdict_of(const sym::ZeroVerdict& z) {
  switch (z.kind) {
    case sym::ZeroKind::ProvenZero: return Verdict::ProvenPass;
    case sym::ZeroKind::ProbablyZero: return Verdict::ProbablyPass;
    default: return Verdict::Fail;
  }
}

void ConditionReport::add(Residual r) {
  overall = combine(overall, r.verdict);
  residuals.push_back(std::move(r));
}

void ConditionReport::merge(const ConditionReport& other) {
  for (const auto& r : other.residuals) residuals.push_back(r);
  overall = combine(overall, other.overall);
  seconds += other.seconds;
}

std::vector<const Residual*> ConditionReport::failures() const {
  std::vector<const Residual*> out;
  for (const auto& r : residuals)
    if (r.verdict != Verdict::ProvenPass && r.verdict != Verdict::ProbablyPass) out.push_back(&r);
  return out;
}

std::map<std::string, Verdict> ConditionReport::by_relation() const {
  std::map<std::string, Verdict> out;
  for (const auto& r : residuals) {
    auto [it, fresh] = out.emplace(r.relation, r.verdict);
    if (!fresh) it->second = combine(it->second, r.verdict);
  }
  return out;
}

std::size_t ConditionReport::count(const std::string& relation) const {
  std::size_t c = 0;
  for (const auto& r : residuals)
    if (r.relation == relation) ++c;
  return c;
}

namespace detail {

// Receives each residual; returning false stops the enumeration.
using Sink = std::function<bool(const std::string&, std::vector<int>, const Fraction&)>;

struct Tables {
  int d, n;
  std::vector<VarIndex> v;
  std::vector<std::vector<std::vector<Fraction>>> G;
  std::vector<std::vector<std::vector<std::vector<Fraction>>>> B;
  // DB[a][i][j][k][s] = d_s b^{ija}_k
  std::vector<std::vector<std::vector<std::vector<std::vector<Fraction>>>>> DB;

  explicit Tables(const HydroOperator& op) : d(op.d), n(op.n) {
    for (Symbol s : op.vars) v.push_back(s.id());
    G.assign(d, std::vector<std::vector<Fraction>>(n, std::vector<Fraction>(n)));
    B.assign(d, std::vector<std::vector<std::vector<Fraction>>>(n, std::vector<std::vector<Fraction>>(n, std::vector<Fraction>(n))));
    DB.assign(d, std::vector<std::vector<std::vector<std::vector<Fraction>>>>(
                     n, std::vector<std::vector<std::vector<Fraction>>>(
                            n, std::vector<std::vector<Fraction>>(n, std::vector<Fraction>(n)))));
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          G[a][i][j] = sym::to_fraction(op.g[a][i][j]);
          for (int k = 0; k < n; ++k) {
            B[a][i][j][k] = sym::to_fraction(op.b[a][i][j][k]);
            for (int s = 0; s < n; ++s) DB[a][i][j][k][s] = B[a][i][j][k].derivative(v[s]);
          }
        }
  }
};

struct StopEnumeration {};

void emit(const Sink& sink, const std::string& rel, std::vector<int> idx, const Fraction& f) {
  for (auto& x : idx) ++x;
  if (!sink(rel, std::move(idx), f)) throw StopEnumeration{};
}

void skew_relations(const Tables& t, const Sink& sink, bool symmetry, bool skew) {
  int d = t.d, n = t.n;
  if (symmetry)
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) emit(sink, "a1", {a, i, j}, t.G[a][i][j] - t.G[a][j][i]);
  if (skew)
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            emit(sink, "a2", {a, i, j, k}, t.G[a][i][j].derivative(t.v[k]) - t.B[a][i][j][k] - t.B[a][j][i][k]);
}

void jacobi_relations(const Tables& t, const Sink& sink) {
  const int d = t.d, n = t.n;
  const auto& G = t.G;
  const auto& B = t.B;
  const auto& DB = t.DB;

  // T3(i,j,r,a,c) = sum_s g^{sia} b^{jrc}_s - g^{sjc} b^{ira}_s
  auto T3 = [&](int i, int j, int r, int a, int c) {
    Fraction acc;
    for (int s = 0; s < n; ++s) {
      acc += G[a][s][i] * B[c][j][r][s];
      acc -= G[c][s][j] * B[a][i][r][s];
    }
    return acc;
  };
  // T5(i,j,r,q,a,c) = sum_s g^{sia}(d_q b^{jrc}_s - d_s b^{jrc}_q) + b^{ija}_s b^{src}_q - b^{ira}_s b^{sjc}_q
  auto T5 = [&](int i, int j, int r, int q, int a, int c) {
    Fraction acc;
    for (int s = 0; s < n; ++s) {
      acc += G[a][s][i] * (DB[c][j][r][s][q] - DB[c][j][r][q][s]);
      acc += B[a][i][j][s] * B[c][s][r][q];
      acc -= B[a][i][r][s] * B[c][s][j][q];
    }
    return acc;
  };
  // C(i,j,r,a,c,q,k) = sum_s b^{sic}_q (d_s b^{jra}_k - d_k b^{jra}_s)
  auto C = [&](int i, int j, int r, int a, int c, int q, int k) {
    Fraction acc;
    for (int s = 0; s < n; ++s) acc += B[c][s][i][q] * (DB[a][j][r][k][s] - DB[a][j][r][s][k]);
    return acc;
  };

  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int r = 0; r < n; ++r) emit(sink, "a3", {a, c, i, j, r}, T3(i, j, r, a, c) + T3(i, j, r, c, a));
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int r = 0; r < n; ++r)
            emit(sink, "a4", {a, c, i, j, r}, T3(i, j, r, a, c) + T3(j, r, i, a, c) + T3(r, i, j, a, c));

  // T5 table indexed [a][c][i][j][r][q].
  auto idx6 = [&](int a, int c, int i, int j, int r, int q) {
    return ((((a * d + c) * n + i) * n + j) * n + r) * n + q;
  };
  std::vector<Fraction> t5(static_cast<std::size_t>(d * d * n * n * n * n));
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int r = 0; r < n; ++r)
            for (int q = 0; q < n; ++q) t5[idx6(a, c, i, j, r, q)] = T5(i, j, r, q, a, c);

  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int r = 0; r < n; ++r)
            for (int q = 0; q < n; ++q)
              emit(sink, "a5", {a, c, i, j, r, q}, t5[idx6(a, c, i, j, r, q)] + t5[idx6(c, a, i, j, r, q)]);

  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int r = 0; r < n; ++r)
            for (int q = 0; q < n; ++q) {
              Fraction lhs;
              Fraction rhs;
              for (int s = 0; s < n; ++s) {
                lhs += G[c][s][i] * DB[a][j][r][q][s];
                lhs -= B[c][i][j][s] * B[a][s][r][q];
                lhs -= B[c][i][r][s] * B[a][j][s][q];
                rhs += G[a][s][j] * DB[c][i][r][q][s];
                rhs -= B[a][j][i][s] * B[c][s][r][q];
                rhs -= B[c][i][s][q] * B[a][j][r][s];
              }
              emit(sink, "a6", {a, c, i, j, r, q}, lhs - rhs);
            }

  // Derivatives of the T5 table, computed on demand.
  std::vector<std::vector<std::optional<Fraction>>> dt5(t5.size(), std::vector<std::optional<Fraction>>(n));
  auto dT5 = [&](int a, int c, int i, int j, int r, int q, int k) -> const Fraction& {
    auto& slot = dt5[idx6(a, c, i, j, r, q)][k];
    if (!slot) slot = t5[idx6(a, c, i, j, r, q)].derivative(t.v[k]);
    return *slot;
  };
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int r = 0; r < n; ++r)
            for (int q = 0; q < n; ++q)
              for (int k = 0; k < n; ++k) {
                Fraction e = dT5(a, c, i, j, r, q, k);
                e += C(i, j, r, a, c, q, k) + C(j, r, i, a, c, q, k) + C(r, i, j, a, c, q, k);
                e += dT5(c, a, i, j, r, k, q);
                e += C(i, j, r, c, a, k, q) + C(j, r, i, c, a, k, q) + C(r, i, j, c, a, k, q);
                emit(sink, "a7", {a, c, i, j, r, q, k}, e);
              }
}

}  // namespace detail

Residual make_residual(const std::string& rel, std::vector<int> idx, const Fraction& f, const sym::ZeroPolicy& policy) {
  Residual r;
  r.relation = rel;
  r.indices = std::move(idx);
  try {
    r.zero = sym::is_zero(f, policy);
    r.verdict = verdict_of(r.zero);
  } catch (const sym::InconclusiveError& e) {
    r.verdict = Verdict::Inconclusive;
    r.note = e.what();
  }
  r.value = f.is_zero() ? Expr(0L) : sym::to_expr(f);
  return r;
}

namespace {

detail::Sink report_sink(ConditionReport& rep, const CheckOptions& opt) {
  return [&rep, &opt](const std::string& rel, std::vector<int> idx, const Fraction& f) {
    if (f.is_zero() && !opt.keep_zero) return true;
    Residual r = make_residual(rel, std::move(idx), f, opt.policy);
    bool failed = r.verdict == Verdict::Fail;
    rep.add(std::move(r));
    return !(failed && opt.fail_fast);
  };
}

template <class F>
ConditionReport run_checks(const HydroOperator& op, const CheckOptions& opt, F&& body) {
  op.validate();
  auto start = std::chrono::steady_clock::now();
  ConditionReport rep;
  auto sink = report_sink(rep, opt);
  try {
    detail::Tables t(op);
    body(t, sink);
  } catch (const detail::StopEnumeration&) {
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

ConditionReport check_symmetry(const HydroOperator& op, const CheckOptions& opt) {
  return run_checks(op, opt, [](const detail::Tables& t, const detail::Sink& s) { detail::skew_relations(t, s, true, false); });
}

ConditionReport check_skew(const HydroOperator& op, const CheckOptions& opt) {
  return run_checks(op, opt, [](const detail::Tables& t, const detail::Sink& s) { detail::skew_relations(t, s, false, true); });
}

ConditionReport check_jacobi(const HydroOperator& op, const CheckOptions& opt) {
  return run_checks(op, opt, [](const detail::Tables& t, const detail::Sink& s) { detail::jacobi_relations(t, s); });
}

ConditionReport check_hamiltonian(const HydroOperator& op, const CheckOptions& opt) {
  return run_checks(op, opt, [](const detail::Tables& t, const detail::Sink& s) {
    detail::skew_relations(t, s, true, true);
    detail::jacobi_relations(t, s);
  });
}

Symbol compatibility_parameter() { return Symbol::constant("lambda"); }

ConditionReport pencil_compatibility(const HydroOperator& opx, const HydroOperator& opy, const CheckOptions& opt) {
  if (opx.d != 1 || opy.d != 1) throw std::invalid_argument("pencil_compatibility expects two one-dimensional operators");
  if (opx.vars != opy.vars) throw std::invalid_argument("operators must share their variables");
  opx.validate();
  opy.validate();
  Symbol lam = compatibility_parameter();
  HydroOperator sum = opx;
  for (Symbol c : opy.constants)
    if (std::find(sum.constants.begin(), sum.constants.end(), c) == sum.constants.end()) sum.constants.push_back(c);
  sum.constants.push_back(lam);
  for (const auto* f : opy.functions)
    if (std::find(sum.functions.begin(), sum.functions.end(), f) == sum.functions.end()) sum.functions.push_back(f);
  Expr L(lam);
  for (int i = 0; i < opx.n; ++i)
    for (int j = 0; j < opx.n; ++j) {
      sum.g[0][i][j] = sym::plus(opx.g[0][i][j], sym::times(L, opy.g[0][i][j]));
      for (int k = 0; k < opx.n; ++k) sum.b[0][i][j][k] = sym::plus(opx.b[0][i][j][k], sym::times(L, opy.b[0][i][j][k]));
    }

  auto start = std::chrono::steady_clock::now();
  ConditionReport rep;
  auto inner = report_sink(rep, opt);
  detail::Sink sink = [&](const std::string& rel, std::vector<int> idx, const Fraction& f) {
    unsigned max_power = (rel == "a1" || rel == "a2") ? 1 : 2;
    ParamPolynomial p = split_by_params(f, {lam});
    for (unsigned e = 0; e <= max_power; ++e) {
      auto it = p.coefficients.find({e});
      Fraction c = it == p.coefficients.end() ? Fraction() : it->second;
      if (!inner(rel + "[lambda^" + std::to_string(e) + "]", idx, c)) return false;
    }
    for (const auto& [exps, c] : p.coefficients)
      if (exps[0] > max_power && !inner(rel + "[lambda^" + std::to_string(exps[0]) + "]", idx, c)) return false;
    return true;
  };
  try {
    detail::Tables t(sum);
    detail::skew_relations(t, sink, true, true);
    detail::jacobi_relations(t, sink);
  } catch (const detail::StopEnumeration&) {
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace hydro
