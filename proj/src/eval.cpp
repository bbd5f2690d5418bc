#include "hydro/eval.hpp"

#include <optional>
#include <unordered_map>

namespace hydro::sym {

Real Number::real() const {
  if (is_exact()) return Real(exact());
  return std::get<Real>(v_);
}

bool Number::is_zero() const { return is_exact() ? sgn(exact()) == 0 : std::get<Real>(v_).is_zero(); }

std::string Number::str(int digits) const { return is_exact() ? exact().get_str() : std::get<Real>(v_).str(digits); }

Number Number::operator+(const Number& o) const {
  if (is_exact() && o.is_exact()) return Number(mpq_class(exact() + o.exact()));
  return Number(real() + o.real());
}
Number Number::operator-(const Number& o) const {
  if (is_exact() && o.is_exact()) return Number(mpq_class(exact() - o.exact()));
  return Number(real() - o.real());
}
Number Number::operator*(const Number& o) const {
  if (is_exact() && o.is_exact()) return Number(mpq_class(exact() * o.exact()));
  return Number(real() * o.real());
}
Number Number::operator/(const Number& o) const {
  if (o.is_zero()) throw SingularityError("division by zero at evaluation point");
  if (is_exact() && o.is_exact()) return Number(mpq_class(exact() / o.exact()));
  return Number(real() / o.real());
}
Number Number::operator-() const {
  if (is_exact()) return Number(mpq_class(-exact()));
  return Number(-real());
}

namespace {

std::optional<mpq_class> exact_sqrt(const mpq_class& q) {
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

struct Evaluator {
  const Point& p;
  std::unordered_map<const Node*, Number> memo;

  Number run(const Expr& e) {
    if (auto it = memo.find(e.raw()); it != memo.end()) return it->second;
    Number r = compute(e);
    memo.emplace(e.raw(), r);
    return r;
  }

  Number compute(const Expr& e) {
    switch (e.op()) {
      case Op::Num: return e.num();
      case Op::Sym: {
        auto it = p.values.find(e.symbol());
        if (it == p.values.end()) throw UnassignedError("no value for symbol " + e.symbol().name());
        return it->second;
      }
      case Op::Neg: return -run(e.kids()[0]);
      case Op::Add: return run(e.kids()[0]) + run(e.kids()[1]);
      case Op::Sub: return run(e.kids()[0]) - run(e.kids()[1]);
      case Op::Mul: return run(e.kids()[0]) * run(e.kids()[1]);
      case Op::Div: {
        Number d = run(e.kids()[1]);
        if (d.is_zero()) throw SingularityError("singular denominator " + print(e.kids()[1]) + " at evaluation point");
        return run(e.kids()[0]) / d;
      }
      case Op::Pow: {
        Number b = run(e.kids()[0]);
        long k = e.exponent();
        if (k < 0 && b.is_zero()) throw SingularityError("negative power of zero at evaluation point");
        Number r(1L);
        for (long i = 0; i < (k < 0 ? -k : k); ++i) r = r * b;
        return k < 0 ? Number(1L) / r : r;
      }
      case Op::Exp: {
        Number a = run(e.kids()[0]);
        if (a.is_zero()) return Number(1L);
        return Number(exp(a.real()));
      }
      case Op::Ln: {
        Number a = run(e.kids()[0]);
        if (a.is_exact() && a.exact() == 1) return Number(0L);
        Real r = a.real();
        if (r.sign() <= 0) throw SingularityError("logarithm of a non-positive value");
        return Number(log(r));
      }
      case Op::Sqrt: {
        Number a = run(e.kids()[0]);
        if (a.is_exact())
          if (auto s = exact_sqrt(a.exact())) return *s;
        Real r = a.real();
        if (r.sign() < 0) throw SingularityError("square root of a negative value");
        return Number(sqrt(r));
      }
      case Op::Apply: {
        if (!p.functions) throw UnassignedError("no values for abstract function " + e.function()->name);
        std::vector<Number> args;
        for (const auto& k : e.kids()) args.push_back(run(k));
        return p.functions(e.function(), e.multi_index(), args);
      }
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace

Number evaluate(const Expr& e, const Point& p) {
  PrecisionScope scope(p.precision);
  Evaluator ev{p, {}};
  return ev.run(e);
}

}  // namespace hydro::sym
