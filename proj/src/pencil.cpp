#include <algorithm>
#include <bit>
#include <unordered_map>

#include "hydro/opcore.hpp"

namespace hydro {

using sym::Fraction;
using sym::Poly;

std::vector<Symbol> pencil_parameters(int d) {
  std::vector<Symbol> out;
  for (int a = 0; a < d; ++a) out.push_back(Symbol::constant("lambda" + std::to_string(a + 1)));
  return out;
}

Matrix pencil_matrix(const HydroOperator& op) {
  auto lam = pencil_parameters(op.d);
  Matrix m(op.n, std::vector<Expr>(op.n, Expr(0L)));
  for (int i = 0; i < op.n; ++i)
    for (int j = 0; j < op.n; ++j) {
      std::vector<Expr> terms;
      for (int a = 0; a < op.d; ++a) terms.push_back(sym::times(Expr(lam[a]), op.g[a][i][j]));
      m[i][j] = sym::sum(terms);
    }
  return m;
}

ParamPolynomial split_by_params(const Fraction& f, const std::vector<Symbol>& params) {
  ParamPolynomial out;
  out.params = params;
  std::vector<sym::VarIndex> idx;
  for (Symbol p : params) idx.push_back(p.id());
  for (sym::VarIndex v : f.indeterminates())
    if (std::find(idx.begin(), idx.end(), v) != idx.end() && !f.numerator().has_variable(v))
      throw std::invalid_argument("parameter occurs in a denominator");
  std::map<std::vector<unsigned>, std::vector<sym::Term>> buckets;
  for (const auto& t : f.numerator().terms()) {
    std::vector<unsigned> exps;
    sym::Monomial rest = t.m;
    for (sym::VarIndex v : idx) {
      exps.push_back(t.m.exponent(v));
      rest = rest.without(v);
    }
    buckets[exps].push_back(sym::Term{rest, t.c});
  }
  for (auto& [exps, terms] : buckets) {
    Poly p;
    for (const auto& t : terms) p += Poly::monomial(t.m, t.c);
    if (!p.is_zero()) out.coefficients.emplace(exps, f.with_numerator(p));
  }
  return out;
}

std::string ParamPolynomial::monomial_string(const std::vector<unsigned>& exps) const {
  std::string s;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += params[i].name();
    if (exps[i] > 1) s += "^" + std::to_string(exps[i]);
  }
  return s.empty() ? "1" : s;
}

Expr ParamPolynomial::coefficient_expr(const std::vector<unsigned>& exps) const {
  auto it = coefficients.find(exps);
  return it == coefficients.end() ? Expr(0L) : sym::to_expr(sym::normalize(it->second));
}

Expr ParamPolynomial::to_expr() const {
  std::vector<Expr> terms;
  for (const auto& [exps, c] : coefficients) {
    std::vector<Expr> fs{sym::to_expr(sym::normalize(c))};
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i]) fs.push_back(exps[i] == 1 ? Expr(params[i]) : sym::pow(Expr(params[i]), exps[i]));
    terms.push_back(sym::product(fs));
  }
  return sym::sum(terms);
}

Fraction determinant(const std::vector<std::vector<Fraction>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Fraction(mpq_class(1));
  if (n > 20) throw std::invalid_argument("determinant size too large");
  // Laplace expansion along rows, memoised on the set of used columns.
  std::unordered_map<std::uint32_t, Fraction> memo;
  auto rec = [&](auto&& self, std::uint32_t used) -> Fraction {
    auto row = static_cast<std::size_t>(std::popcount(used));
    if (row == n) return Fraction(mpq_class(1));
    if (auto it = memo.find(used); it != memo.end()) return it->second;
    Fraction acc;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if (used & (1u << c)) continue;
      if (!m[row][c].is_zero()) {
        Fraction minor = self(self, used | (1u << c));
        if (!minor.is_zero()) {
          Fraction t = m[row][c] * minor;
          acc = sign > 0 ? acc + t : acc - t;
        }
      }
      sign = -sign;
    }
    memo.emplace(used, acc);
    return acc;
  };
  return rec(rec, 0);
}

namespace {

std::vector<std::vector<Fraction>> to_fractions(const Matrix& m) {
  std::vector<std::vector<Fraction>> out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const auto& e : row) out.back().push_back(sym::to_fraction(e));
  }
  return out;
}

// Decides zero-ness; nonzero is reported with the verdict it was decided by.
struct Decision {
  bool zero;
  Verdict verdict;
};

Decision decide(const Fraction& f, const sym::ZeroPolicy& policy) {
  try {
    sym::ZeroVerdict z = sym::is_zero(f, policy);
    return {z.zero(), z.proven() ? Verdict::ProvenPass : Verdict::Inconclusive};
  } catch (const sym::InconclusiveError&) {
    return {false, Verdict::Inconclusive};
  }
}

}  // namespace

ParamPolynomial pencil_determinant(const HydroOperator& op) {
  op.validate();
  return split_by_params(determinant(to_fractions(pencil_matrix(op))), pencil_parameters(op.d));
}

DegeneracyResult is_degenerate(const HydroOperator& op, const sym::ZeroPolicy& policy) {
  DegeneracyResult out;
  ParamPolynomial det = pencil_determinant(op);
  for (const auto& [exps, c] : det.coefficients) {
    Decision dec = decide(c, policy);
    out.verdict = combine(out.verdict, dec.verdict);
    if (!dec.zero && !out.certificate) {
      out.degenerate = false;
      out.certificate = det.monomial_string(exps) + ": " + sym::print(det.coefficient_expr(exps));
    }
  }
  return out;
}

RankResult generic_rank(const HydroOperator& op, const sym::ZeroPolicy& policy) {
  op.validate();
  auto m = to_fractions(pencil_matrix(op));
  const int n = op.n;
  RankResult out;
  std::vector<std::vector<int>> subsets_by_size(n + 1);
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.push_back(i);
    subsets_by_size[s.size()].push_back(static_cast<int>(mask));
  }
  for (int r = n; r >= 1; --r) {
    for (int rm : subsets_by_size[r])
      for (int cm : subsets_by_size[r]) {
        std::vector<std::vector<Fraction>> sub;
        for (int i = 0; i < n; ++i) {
          if (!(rm & (1 << i))) continue;
          sub.emplace_back();
          for (int j = 0; j < n; ++j)
            if (cm & (1 << j)) sub.back().push_back(m[i][j]);
        }
        Decision dec = decide(determinant(sub), policy);
        out.verdict = combine(out.verdict, dec.verdict);
        if (!dec.zero) {
          out.rank = r;
          return out;
        }
      }
  }
  out.rank = 0;
  return out;
}

TrivialityResult is_trivial_pair(const HydroOperator& op, const sym::ZeroPolicy& policy) {
  if (op.d != 2) throw std::invalid_argument("is_trivial_pair needs a two-dimensional operator");
  op.validate();
  std::vector<Fraction> xs;
  std::vector<Fraction> ys;
  for (int i = 0; i < op.n; ++i)
    for (int j = 0; j < op.n; ++j) {
      xs.push_back(sym::to_fraction(op.g[0][i][j]));
      ys.push_back(sym::to_fraction(op.g[1][i][j]));
      for (int k = 0; k < op.n; ++k) {
        xs.push_back(sym::to_fraction(op.b[0][i][j][k]));
        ys.push_back(sym::to_fraction(op.b[1][i][j][k]));
      }
    }
  TrivialityResult out;
  auto first_nonzero = [&](const std::vector<Fraction>& v) -> std::optional<std::size_t> {
    for (std::size_t e = 0; e < v.size(); ++e) {
      Decision dec = decide(v[e], policy);
      out.verdict = combine(out.verdict, dec.verdict);
      if (!dec.zero) return e;
    }
    return std::nullopt;
  };
  auto px = first_nonzero(xs);
  auto py = first_nonzero(ys);
  if (!px && !py) {
    out.trivial = true;
    out.note = "identically zero";
    return out;
  }
  // The multiple is taken of the part that is not zero; when both are nonzero
  // the y part is tested as a multiple of the x part.
  bool y_of_x = px.has_value();
  const auto& base = y_of_x ? xs : ys;
  const auto& other = y_of_x ? ys : xs;
  std::size_t p = y_of_x ? *px : *py;
  out.relation = y_of_x ? "y = xi*x" : "x = xi*y";
  for (std::size_t e = 0; e < base.size(); ++e) {
    Fraction cross = other[e] * base[p] - base[e] * other[p];
    Decision dec = decide(cross, policy);
    out.verdict = combine(out.verdict, dec.verdict);
    if (!dec.zero) {
      out.trivial = false;
      out.note = "parts are not proportional";
      return out;
    }
  }
  Fraction xi = other[p] / base[p];
  for (Symbol v : op.vars) {
    Decision dec = decide(xi.derivative(v.id()), policy);
    out.verdict = combine(out.verdict, dec.verdict);
    if (!dec.zero) {
      out.trivial = false;
      out.xi = sym::to_expr(sym::normalize(xi));
      out.note = "parts are proportional with a non-constant factor";
      return out;
    }
  }
  out.trivial = true;
  out.xi = sym::to_expr(sym::normalize(xi));
  return out;
}

}  // namespace hydro
