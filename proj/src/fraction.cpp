#include "hydro/fraction.hpp"

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace hydro::sym {
namespace {

// Primitive denominator factors seen so far. New denominators are split by
// trial division against them so that repeated factors stay recognisable.
struct FactorRegistry {
  std::mutex mu;
  std::vector<Poly> order;
  std::unordered_map<Poly, bool> irreducible;
};

FactorRegistry& factor_registry() {
  static FactorRegistry r;
  return r;
}

bool factor_irreducible(const Poly& p) {
  auto& reg = factor_registry();
  {
    std::lock_guard lock(reg.mu);
    auto it = reg.irreducible.find(p);
    if (it != reg.irreducible.end()) return it->second;
  }
  bool irr = known_irreducible(p);
  std::lock_guard lock(reg.mu);
  reg.irreducible.emplace(p, irr);
  return irr;
}

void register_factor(const Poly& p) {
  bool irr = known_irreducible(p);
  auto& reg = factor_registry();
  std::lock_guard lock(reg.mu);
  if (reg.irreducible.emplace(p, irr).second) reg.order.push_back(p);
}

std::vector<Poly> registered_factors() {
  auto& reg = factor_registry();
  std::lock_guard lock(reg.mu);
  return reg.order;
}

bool subset(const std::set<VarIndex>& a, const std::set<VarIndex>& b) {
  for (VarIndex v : a)
    if (!b.count(v)) return false;
  return true;
}

struct Split {
  mpq_class content;
  Monomial mono;
  std::vector<Fraction::Factor> factors;
};

// p = content * mono * prod factors, factors primitive with positive lead.
Split split_polynomial(const Poly& p) {
  Split s;
  s.content = p.numeric_content();
  Poly rest = p.scaled(1 / s.content);
  s.mono = rest.monomial_content();
  rest = rest.divided_by_monomial(s.mono);
  if (rest.is_constant()) {
    s.content *= rest.constant_value();
    return s;
  }
  auto vars = rest.variables();
  for (const Poly& f : registered_factors()) {
    if (rest.is_constant()) break;
    if (f.total_degree() > rest.total_degree() || !subset(f.variables(), vars)) continue;
    std::uint32_t e = 0;
    Poly q;
    while (!rest.is_constant() && rest.divide_exact(f, &q)) {
      rest = std::move(q);
      ++e;
    }
    if (e) s.factors.push_back({f, e});
  }
  if (rest.is_constant()) {
    s.content *= rest.constant_value();
  } else {
    mpq_class c = rest.numeric_content();
    s.content *= c;
    rest = rest.scaled(1 / c);
    register_factor(rest);
    s.factors.push_back({rest, 1});
  }
  return s;
}

struct AtomPool {
  std::mutex mu;
  std::deque<AtomInfo> atoms;
  std::unordered_map<std::string, VarIndex> by_key;
  std::map<std::pair<VarIndex, VarIndex>, Fraction> derivatives;
};

AtomPool& atom_pool() {
  static AtomPool p;
  return p;
}

Fraction inverse_of(const Expr& e);

VarIndex intern_atom(AtomKind kind, const FunctionDef* fn, std::vector<unsigned> multi, std::vector<Expr> args) {
  std::vector<Fraction> fr;
  std::string key = std::to_string(static_cast<int>(kind));
  if (fn) key += ":" + std::to_string(fn->id);
  for (unsigned m : multi) key += "," + std::to_string(m);
  for (const auto& a : args) {
    fr.push_back(to_fraction(a));
    key += "|" + print(to_expr(normalize(fr.back())));
  }
  auto& pool = atom_pool();
  {
    std::lock_guard lock(pool.mu);
    auto it = pool.by_key.find(key);
    if (it != pool.by_key.end()) return it->second;
  }
  AtomInfo info;
  info.kind = kind;
  info.fn = fn;
  info.multi = std::move(multi);
  info.args = std::move(args);
  info.key = key;
  info.transcendental = kind != AtomKind::Apply;
  for (const auto& f : fr) {
    for (VarIndex v : f.indeterminates()) {
      info.depends.insert(v);
      if (is_atom_index(v)) {
        const AtomInfo& inner = atom_info(v);
        info.depends.insert(inner.depends.begin(), inner.depends.end());
        info.transcendental = info.transcendental || inner.transcendental;
      }
    }
  }
  info.arg_fractions = std::move(fr);
  std::lock_guard lock(pool.mu);
  auto it = pool.by_key.find(key);
  if (it != pool.by_key.end()) return it->second;
  info.index = kAtomBase + static_cast<VarIndex>(pool.atoms.size());
  pool.atoms.push_back(std::move(info));
  pool.by_key.emplace(key, pool.atoms.back().index);
  return pool.atoms.back().index;
}

bool depends_on(VarIndex w, VarIndex v) {
  if (w == v) return true;
  return is_atom_index(w) && atom_info(w).depends.count(v);
}

// Total derivative of a polynomial, chaining through atoms.
Fraction poly_derivative(const Poly& p, VarIndex v) {
  Fraction out(p.derivative(v));
  for (VarIndex w : p.variables()) {
    if (w == v || !is_atom_index(w) || !atom_info(w).depends.count(v)) continue;
    out += Fraction(p.derivative(w)) * atom_derivative(w, v);
  }
  return out;
}

// Exact square root of a non-negative rational, if it exists.
std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  mpz_class n = q.get_num();
  mpz_class d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return mpq_class(rn, rd);
}

struct FractionCache {
  std::mutex mu;
  std::unordered_map<Expr, Fraction> map;
};

FractionCache& fraction_cache() {
  static FractionCache c;
  return c;
}

Fraction convert(const Expr& e);

Fraction inverse_of(const Expr& e) {
  switch (e.op()) {
    case Op::Mul: return inverse_of(e.kids()[0]) * inverse_of(e.kids()[1]);
    case Op::Div: {
      Fraction d = to_fraction(e.kids()[1]);
      if (d.is_zero()) throw std::domain_error("division by an identically zero expression");
      return d * inverse_of(e.kids()[0]);
    }
    case Op::Neg: return -inverse_of(e.kids()[0]);
    case Op::Pow:
      if (e.exponent() > 0) return inverse_of(e.kids()[0]).pow(e.exponent());
      return to_fraction(e.kids()[0]).pow(-e.exponent());
    default: return to_fraction(e).inverse();
  }
}

Fraction convert(const Expr& e) {
  switch (e.op()) {
    case Op::Num: return Fraction(e.num());
    case Op::Sym: return Fraction::var(e.symbol().id());
    case Op::Neg: return -to_fraction(e.kids()[0]);
    case Op::Add: return to_fraction(e.kids()[0]) + to_fraction(e.kids()[1]);
    case Op::Sub: return to_fraction(e.kids()[0]) - to_fraction(e.kids()[1]);
    case Op::Mul: return to_fraction(e.kids()[0]) * to_fraction(e.kids()[1]);
    case Op::Div: return to_fraction(e.kids()[0]) * inverse_of(e.kids()[1]);
    case Op::Pow:
      if (e.exponent() > 0) return to_fraction(e.kids()[0]).pow(e.exponent());
      return inverse_of(e.kids()[0]).pow(-e.exponent());
    case Op::Exp: {
      Fraction a = to_fraction(e.kids()[0]);
      if (a.is_zero()) return Fraction(mpq_class(1));
      return Fraction::var(intern_atom(AtomKind::Exp, nullptr, {}, {e.kids()[0]}));
    }
    case Op::Ln: {
      Fraction a = to_fraction(e.kids()[0]);
      if (a.is_constant() && a.numerator().constant_value() == 1) return Fraction();
      return Fraction::var(intern_atom(AtomKind::Ln, nullptr, {}, {e.kids()[0]}));
    }
    case Op::Sqrt: {
      Fraction a = to_fraction(e.kids()[0]);
      if (a.is_constant())
        if (auto r = rational_sqrt(a.numerator().constant_value())) return Fraction(*r);
      return Fraction::var(intern_atom(AtomKind::Sqrt, nullptr, {}, {e.kids()[0]}));
    }
    case Op::Apply:
      return Fraction::var(intern_atom(AtomKind::Apply, e.function(), e.multi_index(), e.kids()));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

const AtomInfo& atom_info(VarIndex v) {
  auto& pool = atom_pool();
  std::lock_guard lock(pool.mu);
  std::size_t i = v - kAtomBase;
  if (!is_atom_index(v) || i >= pool.atoms.size()) throw std::out_of_range("unknown atom index");
  return pool.atoms[i];
}

Expr indeterminate_expr(VarIndex v) {
  if (!is_atom_index(v)) return Expr(Symbol::by_id(v));
  const AtomInfo& a = atom_info(v);
  switch (a.kind) {
    case AtomKind::Exp: return exp(a.args[0]);
    case AtomKind::Ln: return ln(a.args[0]);
    case AtomKind::Sqrt: return sqrt(a.args[0]);
    case AtomKind::Apply: return apply(a.fn, a.args, a.multi);
  }
  throw std::logic_error("unreachable");
}

Fraction atom_derivative(VarIndex atom, VarIndex v) {
  auto& pool = atom_pool();
  {
    std::lock_guard lock(pool.mu);
    auto it = pool.derivatives.find({atom, v});
    if (it != pool.derivatives.end()) return it->second;
  }
  const AtomInfo& a = atom_info(atom);
  Fraction d;
  if (a.depends.count(v)) {
    switch (a.kind) {
      case AtomKind::Exp: d = Fraction::var(atom) * a.arg_fractions[0].derivative(v); break;
      case AtomKind::Ln: d = a.arg_fractions[0].derivative(v) / a.arg_fractions[0]; break;
      case AtomKind::Sqrt:
        d = a.arg_fractions[0].derivative(v) / Fraction::var(atom).scaled(2);
        break;
      case AtomKind::Apply:
        for (std::size_t s = 0; s < a.args.size(); ++s) {
          Fraction da = a.arg_fractions[s].derivative(v);
          if (da.is_zero()) continue;
          auto multi = a.multi;
          ++multi[s];
          d += Fraction::var(intern_atom(AtomKind::Apply, a.fn, multi, a.args)) * da;
        }
        break;
    }
  }
  std::lock_guard lock(pool.mu);
  pool.derivatives.emplace(std::make_pair(atom, v), d);
  return d;
}

Poly Fraction::expanded_denominator() const {
  Poly d = Poly::monomial(mden_, 1);
  for (const auto& f : factors_) d = d * f.p.pow(f.e);
  return d;
}

std::set<VarIndex> Fraction::indeterminates() const {
  auto out = num_.variables();
  for (const auto& [v, e] : mden_.entries()) out.insert(v);
  for (const auto& f : factors_) {
    auto fv = f.p.variables();
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

void Fraction::cancel() {
  if (num_.is_zero()) {
    mden_ = Monomial();
    factors_.clear();
    return;
  }
  if (!mden_.is_one()) {
    Monomial g = num_.monomial_content().gcd(mden_);
    if (!g.is_one()) {
      num_ = num_.divided_by_monomial(g);
      mden_ = mden_ / g;
    }
  }
  for (auto& f : factors_) {
    Poly q;
    while (f.e > 0 && num_.total_degree() >= f.p.total_degree() && num_.divide_exact(f.p, &q)) {
      num_ = std::move(q);
      --f.e;
    }
  }
  std::erase_if(factors_, [](const Factor& f) { return f.e == 0; });
}

Fraction Fraction::operator-() const {
  Fraction r = *this;
  r.num_ = -r.num_;
  return r;
}

Fraction Fraction::scaled(const mpq_class& c) const {
  if (sgn(c) == 0) return Fraction();
  Fraction r = *this;
  r.num_ = r.num_.scaled(c);
  return r;
}

Fraction Fraction::operator+(const Fraction& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  Fraction r;
  bool same = mden_ == o.mden_ && factors_.size() == o.factors_.size();
  for (std::size_t i = 0; same && i < factors_.size(); ++i)
    same = factors_[i].e == o.factors_[i].e && factors_[i].p == o.factors_[i].p;
  if (same) {
    r = *this;
    r.num_ = num_ + o.num_;
    r.cancel();
    return r;
  }
  r.mden_ = mden_.lcm(o.mden_);
  r.factors_ = factors_;
  for (const auto& f : o.factors_) {
    bool found = false;
    for (auto& g : r.factors_) {
      if (g.p == f.p) {
        g.e = std::max(g.e, f.e);
        found = true;
        break;
      }
    }
    if (!found) r.factors_.push_back(f);
  }
  auto multiplier = [&](const Fraction& x) {
    Poly m = Poly::monomial(r.mden_ / x.mden_, 1);
    for (const auto& g : r.factors_) {
      std::uint32_t have = 0;
      for (const auto& f : x.factors_)
        if (f.p == g.p) have = f.e;
      if (g.e > have) m = m * g.p.pow(g.e - have);
    }
    return m;
  };
  r.num_ = num_ * multiplier(*this) + o.num_ * multiplier(o);
  r.cancel();
  return r;
}

Fraction Fraction::operator-(const Fraction& o) const { return *this + (-o); }

Fraction Fraction::operator*(const Fraction& o) const {
  if (is_zero() || o.is_zero()) return Fraction();
  Fraction r;
  r.num_ = num_ * o.num_;
  r.mden_ = mden_ * o.mden_;
  r.factors_ = factors_;
  for (const auto& f : o.factors_) {
    bool found = false;
    for (auto& g : r.factors_) {
      if (g.p == f.p) {
        g.e += f.e;
        found = true;
        break;
      }
    }
    if (!found) r.factors_.push_back(f);
  }
  r.cancel();
  return r;
}

Fraction Fraction::inverse() const {
  if (is_zero()) throw std::domain_error("division by an identically zero expression");
  Split s = split_polynomial(num_);
  Fraction r;
  r.num_ = expanded_denominator().scaled(1 / s.content);
  r.mden_ = s.mono;
  r.factors_ = std::move(s.factors);
  r.cancel();
  return r;
}

Fraction Fraction::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  if (e == 0) return Fraction(mpq_class(1));
  Fraction r;
  r.num_ = num_.pow(static_cast<std::uint32_t>(e));
  Monomial m;
  for (long i = 0; i < e; ++i) m = m * mden_;
  r.mden_ = m;
  r.factors_ = factors_;
  for (auto& f : r.factors_) f.e *= static_cast<std::uint32_t>(e);
  return r;
}

Fraction Fraction::with_numerator(Poly num) const {
  Fraction r = *this;
  r.num_ = std::move(num);
  r.cancel();
  return r;
}

Fraction Fraction::derivative(VarIndex v) const {
  bool any = false;
  for (VarIndex w : indeterminates())
    if (depends_on(w, v)) {
      any = true;
      break;
    }
  if (!any) return Fraction();

  Fraction dn = poly_derivative(num_, v);
  Fraction log_der;  // D'/D
  for (const auto& [w, e] : mden_.entries()) {
    if (!depends_on(w, v)) continue;
    Fraction dw = w == v ? Fraction(mpq_class(1)) : atom_derivative(w, v);
    Fraction inv;
    inv.num_ = Poly(mpq_class(e));
    inv.mden_ = Monomial::var(w);
    log_der += dw * inv;
  }
  for (const auto& f : factors_) {
    Fraction df = poly_derivative(f.p, v);
    if (df.is_zero()) continue;
    Fraction inv;
    inv.num_ = Poly(mpq_class(f.e));
    inv.factors_.push_back({f.p, 1});
    log_der += df * inv;
  }
  Fraction inv_den;
  inv_den.num_ = Poly(mpq_class(1));
  inv_den.mden_ = mden_;
  inv_den.factors_ = factors_;
  return (dn - Fraction(num_) * log_der) * inv_den;
}

Fraction to_fraction(const Expr& e) {
  if (e.is_num()) return Fraction(e.num());
  if (e.op() == Op::Sym) return Fraction::var(e.symbol().id());
  auto& cache = fraction_cache();
  {
    std::lock_guard lock(cache.mu);
    auto it = cache.map.find(e);
    if (it != cache.map.end()) return it->second;
  }
  Fraction f = convert(e);
  std::lock_guard lock(cache.mu);
  if (cache.map.size() > 500000) cache.map.clear();
  cache.map.emplace(e, f);
  return f;
}

RationalForm normalize(const Fraction& f) {
  RationalForm r;
  if (f.is_zero()) return r;
  Poly num = f.numerator();
  Poly den = f.expanded_denominator();
  bool reduced = true;
  for (const auto& fac : f.factors())
    if (!factor_irreducible(fac.p)) reduced = false;
  if (!reduced) {
    Poly g = gcd(num, den);
    if (!g.is_constant()) {
      Poly q;
      num.divide_exact(g, &q);
      num = q;
      den.divide_exact(g, &q);
      den = q;
    }
  }
  mpq_class lc = den.lead().c;
  r.num = num.scaled(1 / lc);
  r.den = den.scaled(1 / lc);
  return r;
}

RationalForm normalize(const Expr& e) { return normalize(to_fraction(e)); }

Expr to_expr(const Poly& p) {
  Expr acc(0L);
  bool first = true;
  for (const auto& t : p.terms()) {
    std::vector<Expr> fs;
    for (const auto& [v, e] : t.m.entries()) fs.push_back(e == 1 ? indeterminate_expr(v) : pow(indeterminate_expr(v), e));
    Expr mono = product(fs);
    bool negative = sgn(t.c) < 0;
    mpq_class mag = abs(t.c);
    Expr term = mono.is_one() ? Expr(mag) : times(Expr(mag), mono);
    if (first) {
      // -2*x reads better than -(2*x) and parses back to the same tree.
      if (negative) term = mono.is_one() || mag == 1 ? negate(term) : times(Expr(t.c), mono);
      acc = term;
      first = false;
    } else {
      acc = negative ? minus(acc, term) : plus(acc, term);
    }
  }
  return acc;
}

Expr to_expr(const RationalForm& r) {
  Expr n = to_expr(r.num);
  if (r.den.is_one()) return n;
  return over(n, to_expr(r.den));
}

Expr to_expr(const Fraction& f) {
  Expr n = to_expr(f.numerator());
  std::vector<Expr> ds;
  for (const auto& [v, e] : f.monomial_denominator().entries())
    ds.push_back(e == 1 ? indeterminate_expr(v) : pow(indeterminate_expr(v), e));
  for (const auto& fac : f.factors()) ds.push_back(fac.e == 1 ? to_expr(fac.p) : pow(to_expr(fac.p), fac.e));
  Expr d = product(ds);
  return d.is_one() ? n : over(n, d);
}

bool has_transcendental(const Fraction& f) {
  for (VarIndex v : f.indeterminates())
    if (is_atom_index(v) && atom_info(v).transcendental) return true;
  return false;
}

}  // namespace hydro::sym
