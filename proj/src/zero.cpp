#include "hydro/zero.hpp"

#include <random>
#include <unordered_map>

#include "hydro/real.hpp"

namespace hydro::sym {

std::string to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::ProvenZero: return "ProvenZero";
    case ZeroKind::ProvenNonzero: return "ProvenNonzero";
    case ZeroKind::ProbablyZero: return "ProbablyZero";
    case ZeroKind::ProbablyNonzero: return "ProbablyNonzero";
  }
  return "?";
}

std::string describe(const ZeroVerdict& v) {
  std::string s = to_string(v.kind);
  if (v.kind == ZeroKind::ProbablyZero) s += "(" + std::to_string(v.samples) + ")";
  if (v.kind == ZeroKind::ProbablyNonzero) {
    s += " at {";
    bool first = true;
    for (const auto& [k, val] : v.witness) {
      s += (first ? "" : ", ") + k + "=" + val;
      first = false;
    }
    s += "}";
  }
  return s;
}

namespace {

struct Singular {};

struct Sampler {
  std::mt19937_64 rng;
  unsigned precision;
  std::unordered_map<VarIndex, Real> values;

  Real tolerance(int divisor) const { return ldexp_one(-static_cast<long>(precision / divisor), precision); }

  Real random_value() {
    // Positive dyadic rationals in [1/4, 9/4].
    std::uniform_int_distribution<long> dist(1L << 18, 9L << 18);
    mpq_class q(dist(rng), 1L << 20);
    q.canonicalize();
    return Real(q, precision);
  }

  const Real& value(VarIndex v) {
    if (auto it = values.find(v); it != values.end()) return it->second;
    Real r;
    if (!is_atom_index(v)) {
      r = random_value();
    } else {
      const AtomInfo& a = atom_info(v);
      switch (a.kind) {
        case AtomKind::Exp: r = exp(eval(a.arg_fractions[0])); break;
        case AtomKind::Ln: {
          Real x = eval(a.arg_fractions[0]);
          if (x.sign() <= 0) throw Singular{};
          r = log(x);
          break;
        }
        case AtomKind::Sqrt: {
          Real x = eval(a.arg_fractions[0]);
          if (x.sign() < 0) throw Singular{};
          r = sqrt(x);
          break;
        }
        case AtomKind::Apply: r = random_value(); break;
      }
      if (!r.is_finite()) throw Singular{};
    }
    return values.emplace(v, std::move(r)).first->second;
  }

  // Value of p together with the sum of absolute term values.
  std::pair<Real, Real> eval_with_scale(const Poly& p) {
    Real total(mpq_class(0), precision);
    Real scale(mpq_class(0), precision);
    for (const auto& t : p.terms()) {
      Real term(t.c, precision);
      for (const auto& [v, e] : t.m.entries()) {
        const Real& x = value(v);
        for (std::uint32_t k = 0; k < e; ++k) term = term * x;
      }
      total = total + term;
      scale = scale + term.abs();
    }
    return {total, scale};
  }

  Real eval_denominator(const Fraction& f) {
    Real d(mpq_class(1), precision);
    for (const auto& [v, e] : f.monomial_denominator().entries()) {
      const Real& x = value(v);
      if (x.is_zero()) throw Singular{};
      for (std::uint32_t k = 0; k < e; ++k) d = d * x;
    }
    for (const auto& fac : f.factors()) {
      auto [x, s] = eval_with_scale(fac.p);
      if (x.abs() <= s * tolerance(4)) throw Singular{};
      for (std::uint32_t k = 0; k < fac.e; ++k) d = d * x;
    }
    return d;
  }

  Real eval(const Fraction& f) {
    Real d = eval_denominator(f);
    return eval_with_scale(f.numerator()).first / d;
  }
};

}  // namespace

ZeroVerdict is_zero(const Fraction& f, const ZeroPolicy& policy) {
  ZeroVerdict v;
  if (f.is_zero()) {
    v.kind = ZeroKind::ProvenZero;
    return v;
  }
  if (!has_transcendental(f)) {
    v.kind = ZeroKind::ProvenNonzero;
    return v;
  }
  PrecisionScope scope(policy.precision);
  Sampler s{std::mt19937_64(policy.seed), policy.precision, {}};
  unsigned good = 0;
  unsigned attempts = 0;
  while (good < policy.samples) {
    if (attempts++ >= policy.max_attempts)
      throw InconclusiveError("sampling failed: " + std::to_string(policy.max_attempts) +
                              " candidate points hit singularities");
    s.values.clear();
    try {
      s.eval_denominator(f);
      auto [x, scale] = s.eval_with_scale(f.numerator());
      if (!x.is_finite()) throw Singular{};
      if (x.abs() <= scale * s.tolerance(2)) {
        ++good;
        continue;
      }
      v.kind = ZeroKind::ProbablyNonzero;
      for (const auto& [idx, val] : s.values)
        if (!is_atom_index(idx)) v.witness[Symbol::by_id(idx).name()] = val.str(12);
      return v;
    } catch (const Singular&) {
      continue;
    }
  }
  v.kind = ZeroKind::ProbablyZero;
  v.samples = good;
  return v;
}

ZeroVerdict is_zero(const Expr& e, const ZeroPolicy& policy) { return is_zero(to_fraction(e), policy); }

}  // namespace hydro::sym
