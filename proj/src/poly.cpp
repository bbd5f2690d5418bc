#include "hydro/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hydro::sym {
namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

Monomial Monomial::var(VarIndex v, std::uint32_t e) {
  Monomial m;
  if (e > 0) m.f_.emplace_back(v, e);
  return m;
}

std::uint32_t Monomial::degree() const {
  std::uint32_t d = 0;
  for (const auto& [v, e] : f_) d += e;
  return d;
}

std::uint32_t Monomial::exponent(VarIndex v) const {
  for (const auto& [w, e] : f_)
    if (w == v) return e;
  return 0;
}

bool Monomial::divides(const Monomial& other) const {
  auto j = other.f_.begin();
  for (const auto& [v, e] : f_) {
    while (j != other.f_.end() && j->first < v) ++j;
    if (j == other.f_.end() || j->first != v || j->second < e) return false;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.f_.reserve(f_.size() + o.f_.size());
  auto i = f_.begin();
  auto j = o.f_.begin();
  while (i != f_.end() || j != o.f_.end()) {
    if (j == o.f_.end() || (i != f_.end() && i->first < j->first)) {
      r.f_.push_back(*i++);
    } else if (i == f_.end() || j->first < i->first) {
      r.f_.push_back(*j++);
    } else {
      r.f_.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial r;
  auto j = o.f_.begin();
  for (const auto& [v, e] : f_) {
    std::uint32_t sub = 0;
    if (j != o.f_.end() && j->first == v) sub = (j++)->second;
    if (e > sub) r.f_.emplace_back(v, e - sub);
  }
  return r;
}

Monomial Monomial::without(VarIndex v) const {
  Monomial r;
  for (const auto& p : f_)
    if (p.first != v) r.f_.push_back(p);
  return r;
}

Monomial Monomial::lcm(const Monomial& o) const {
  Monomial r;
  auto i = f_.begin();
  auto j = o.f_.begin();
  while (i != f_.end() || j != o.f_.end()) {
    if (j == o.f_.end() || (i != f_.end() && i->first < j->first)) {
      r.f_.push_back(*i++);
    } else if (i == f_.end() || j->first < i->first) {
      r.f_.push_back(*j++);
    } else {
      r.f_.emplace_back(i->first, std::max(i->second, j->second));
      ++i;
      ++j;
    }
  }
  return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
  Monomial r;
  auto j = o.f_.begin();
  for (const auto& [v, e] : f_) {
    while (j != o.f_.end() && j->first < v) ++j;
    if (j != o.f_.end() && j->first == v) r.f_.emplace_back(v, std::min(e, j->second));
  }
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x51ed27;
  for (const auto& [v, e] : f_) h = mix(mix(h, v), e);
  return h;
}

int grevlex_cmp(const Monomial& a, const Monomial& b) {
  std::uint32_t da = a.degree();
  std::uint32_t db = b.degree();
  if (da != db) return da > db ? 1 : -1;
  const auto& fa = a.entries();
  const auto& fb = b.entries();
  auto i = fa.rbegin();
  auto j = fb.rbegin();
  while (i != fa.rend() || j != fb.rend()) {
    if (i != fa.rend() && j != fb.rend() && i->first == j->first) {
      if (i->second != j->second) return i->second < j->second ? 1 : -1;
      ++i;
      ++j;
      continue;
    }
    // The later variable is present only on one side; that side has the larger
    // exponent there and is therefore the smaller monomial.
    if (j == fb.rend() || (i != fa.rend() && i->first > j->first)) return -1;
    return 1;
  }
  return 0;
}

Poly::Poly(const mpq_class& c) {
  if (sgn(c) != 0) terms_.push_back(Term{Monomial(), c});
}

Poly Poly::var(VarIndex v, std::uint32_t e) { return monomial(Monomial::var(v, e), 1); }

Poly Poly::monomial(const Monomial& m, const mpq_class& c) {
  Poly p;
  if (sgn(c) != 0) p.terms_.push_back(Term{m, c});
  return p;
}

Poly Poly::from_unsorted(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return grevlex_cmp(x.m, y.m) > 0; });
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().m == t.m) {
      p.terms_.back().c += t.c;
      if (sgn(p.terms_.back().c) == 0) p.terms_.pop_back();
    } else if (sgn(t.c) != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

mpq_class Poly::constant_value() const {
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_.empty() ? mpq_class(0) : terms_[0].c;
}

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().m.degree(); }

std::uint32_t Poly::degree_in(VarIndex v) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.m.exponent(v));
  return d;
}

std::set<VarIndex> Poly::variables() const {
  std::set<VarIndex> out;
  for (const auto& t : terms_)
    for (const auto& [v, e] : t.m.entries()) out.insert(v);
  return out;
}

bool Poly::has_variable(VarIndex v) const {
  for (const auto& t : terms_)
    if (t.m.exponent(v) > 0) return true;
  return false;
}

bool Poly::is_single_variable_monomial() const {
  return terms_.size() == 1 && terms_[0].m.entries().size() == 1 && terms_[0].m.entries()[0].second == 1;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  Poly r;
  r.terms_.reserve(terms_.size() + o.terms_.size());
  auto i = terms_.begin();
  auto j = o.terms_.begin();
  while (i != terms_.end() && j != o.terms_.end()) {
    int c = grevlex_cmp(i->m, j->m);
    if (c > 0) {
      r.terms_.push_back(*i++);
    } else if (c < 0) {
      r.terms_.push_back(*j++);
    } else {
      mpq_class s = i->c + j->c;
      if (sgn(s) != 0) r.terms_.push_back(Term{i->m, s});
      ++i;
      ++j;
    }
  }
  r.terms_.insert(r.terms_.end(), i, terms_.end());
  r.terms_.insert(r.terms_.end(), j, o.terms_.end());
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  if (o.terms_.size() == 1) return times_monomial(o.terms_[0].m, o.terms_[0].c);
  if (terms_.size() == 1) return o.times_monomial(terms_[0].m, terms_[0].c);
  std::vector<Term> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) out.push_back(Term{a.m * b.m, a.c * b.c});
  return from_unsorted(std::move(out));
}

Poly Poly::scaled(const mpq_class& c) const {
  if (sgn(c) == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.terms_) t.c *= c;
  return r;
}

Poly Poly::times_monomial(const Monomial& m, const mpq_class& c) const {
  if (sgn(c) == 0) return Poly();
  Poly r;
  r.terms_.reserve(terms_.size());
  // Multiplying by a monomial preserves the order.
  for (const auto& t : terms_) r.terms_.push_back(Term{t.m * m, t.c * c});
  return r;
}

Poly Poly::pow(std::uint32_t e) const {
  Poly result(1);
  Poly base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

Poly Poly::derivative(VarIndex v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    std::uint32_t e = t.m.exponent(v);
    if (e == 0) continue;
    Monomial m = t.m / Monomial::var(v, 1);
    out.push_back(Term{m, t.c * e});
  }
  return from_unsorted(std::move(out));
}

bool Poly::divide_exact(const Poly& d, Poly* q) const {
  if (d.is_zero()) throw std::domain_error("division by the zero polynomial");
  std::vector<Term> quot;
  Poly r = *this;
  const Term& ld = d.lead();
  while (!r.is_zero()) {
    const Term& lr = r.lead();
    if (!ld.m.divides(lr.m)) return false;
    Monomial m = lr.m / ld.m;
    mpq_class c = lr.c / ld.c;
    r = r - d.times_monomial(m, c);
    quot.push_back(Term{m, c});
  }
  if (q) {
    Poly out;
    out.terms_ = std::move(quot);  // produced in decreasing order
    *q = std::move(out);
  }
  return true;
}

std::map<std::uint32_t, Poly> Poly::coefficients_in(VarIndex v) const {
  std::map<std::uint32_t, std::vector<Term>> buckets;
  for (const auto& t : terms_) buckets[t.m.exponent(v)].push_back(Term{t.m.without(v), t.c});
  std::map<std::uint32_t, Poly> out;
  for (auto& [e, ts] : buckets) {
    Poly p;
    p.terms_ = std::move(ts);  // removing one variable keeps relative order only up to ties
    out.emplace(e, from_unsorted(std::move(p.terms_)));
  }
  return out;
}

Poly Poly::lead_coefficient_in(VarIndex v) const {
  std::uint32_t d = degree_in(v);
  std::vector<Term> ts;
  for (const auto& t : terms_)
    if (t.m.exponent(v) == d) ts.push_back(Term{t.m.without(v), t.c});
  return from_unsorted(std::move(ts));
}

mpq_class Poly::numeric_content() const {
  if (terms_.empty()) return 1;
  mpz_class num_gcd = 0;
  mpz_class den_lcm = 1;
  for (const auto& t : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.c.get_den().get_mpz_t());
  }
  mpq_class c(num_gcd, den_lcm);
  c.canonicalize();
  if (sgn(terms_.front().c) < 0) c = -c;
  return c;
}

Poly Poly::numeric_primitive() const {
  if (terms_.empty()) return *this;
  mpq_class c = numeric_content();
  if (c == 1) return *this;
  return scaled(1 / c);
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return Monomial();
  Monomial m = terms_.front().m;
  for (const auto& t : terms_) {
    if (m.is_one()) break;
    m = m.gcd(t.m);
  }
  return m;
}

Poly Poly::divided_by_monomial(const Monomial& m) const {
  if (m.is_one()) return *this;
  Poly r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!m.divides(t.m)) throw std::logic_error("monomial does not divide polynomial");
    r.terms_.push_back(Term{t.m / m, t.c});
  }
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].c != b.terms_[i].c || !(a.terms_[i].m == b.terms_[i].m)) return false;
  return true;
}

std::size_t Poly::hash() const {
  std::size_t h = 0x2545f491;
  for (const auto& t : terms_) {
    h = mix(h, t.m.hash());
    h = mix(h, mpz_get_ui(t.c.get_num().get_mpz_t()));
    h = mix(h, mpz_get_ui(t.c.get_den().get_mpz_t()));
    h = mix(h, static_cast<std::size_t>(sgn(t.c) + 1));
  }
  return h;
}

std::string Poly::debug_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.c.get_str();
    for (const auto& [v, e] : t.m.entries()) {
      os << '*' << (is_atom_index(v) ? "a" + std::to_string(v - kAtomBase) : "x" + std::to_string(v));
      if (e != 1) os << '^' << e;
    }
  }
  return os.str();
}

Poly pseudo_remainder(const Poly& a, const Poly& b, VarIndex v) {
  std::uint32_t db = b.degree_in(v);
  Poly lc = b.lead_coefficient_in(v);
  Poly r = a;
  std::uint32_t dr = r.degree_in(v);
  if (dr < db) return r;
  std::uint32_t delta = dr - db + 1;
  while (!r.is_zero() && (dr = r.degree_in(v)) >= db) {
    Poly t = r.lead_coefficient_in(v) * Poly::var(v, dr - db);
    r = lc * r - t * b;
    --delta;
  }
  if (delta > 0) r = r * lc.pow(delta);
  return r;
}

namespace {

Poly gcd_rec(const Poly& a, const Poly& b);

Poly content_in(const Poly& p, VarIndex v) {
  Poly c;
  for (const auto& [e, coef] : p.coefficients_in(v)) {
    c = c.is_zero() ? coef.numeric_primitive() : gcd_rec(c, coef);
    if (c.is_one()) break;
  }
  return c;
}

Poly primitive_in(const Poly& p, VarIndex v) {
  Poly c = content_in(p, v);
  if (c.is_constant()) return p.numeric_primitive();
  Poly q;
  if (!p.divide_exact(c, &q)) throw std::logic_error("content does not divide polynomial");
  return q.numeric_primitive();
}

Poly gcd_rec(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.numeric_primitive();
  if (b.is_zero()) return a.numeric_primitive();
  if (a.is_constant() || b.is_constant()) return Poly(1);

  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  if (!ma.is_one() || !mb.is_one())
    return gcd_rec(a.divided_by_monomial(ma), b.divided_by_monomial(mb)).times_monomial(ma.gcd(mb), 1);

  if (a.size() <= b.size() ? b.divide_exact(a, nullptr) : false) return a.numeric_primitive();
  if (b.size() <= a.size() ? a.divide_exact(b, nullptr) : false) return b.numeric_primitive();

  auto va = a.variables();
  auto vb = b.variables();
  for (VarIndex v : va)
    if (!vb.count(v)) return gcd_rec(content_in(a, v), b);
  for (VarIndex v : vb)
    if (!va.count(v)) return gcd_rec(a, content_in(b, v));

  VarIndex x = *va.begin();
  std::uint32_t best = ~0u;
  for (VarIndex v : va) {
    std::uint32_t d = std::max(a.degree_in(v), b.degree_in(v));
    if (d < best) {
      best = d;
      x = v;
    }
  }

  Poly ca = content_in(a, x);
  Poly cb = content_in(b, x);
  Poly c = gcd_rec(ca, cb);
  Poly pa = primitive_in(a, x);
  Poly pb = primitive_in(b, x);
  if (pa.degree_in(x) < pb.degree_in(x)) std::swap(pa, pb);
  while (true) {
    Poly r = pseudo_remainder(pa, pb, x);
    if (r.is_zero()) break;
    if (r.degree_in(x) == 0) {
      pb = Poly(1);
      break;
    }
    pa = std::move(pb);
    pb = primitive_in(r, x);
  }
  return (c * pb).numeric_primitive();
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) return Poly();
  return gcd_rec(a, b);
}

bool known_irreducible(const Poly& p) {
  if (p.is_constant()) return false;
  if (p.is_single_variable_monomial()) return true;
  if (!p.monomial_content().is_one()) return false;
  for (VarIndex v : p.variables()) {
    if (p.degree_in(v) != 1) continue;
    auto cs = p.coefficients_in(v);
    auto it0 = cs.find(0);
    if (it0 == cs.end()) continue;
    if (gcd(cs.at(1), it0->second).is_one()) return true;
  }
  return false;
}

}  // namespace hydro::sym
