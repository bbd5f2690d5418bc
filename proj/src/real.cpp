#include "hydro/real.hpp"

#include <algorithm>
#include <stdexcept>

namespace hydro::sym {
namespace {
thread_local unsigned g_precision = 64;
}

unsigned Real::working_precision() { return g_precision; }

PrecisionScope::PrecisionScope(unsigned bits) : saved_(g_precision) {
  if (bits < MPFR_PREC_MIN || bits > 1u << 20) throw std::invalid_argument("precision out of range");
  g_precision = bits;
}
PrecisionScope::~PrecisionScope() { g_precision = saved_; }

Real::Real(unsigned precision, int) { mpfr_init2(v_, precision); }
Real::Real() : Real(g_precision, 0) { mpfr_set_zero(v_, 1); }
Real::Real(long v) : Real(g_precision, 0) { mpfr_set_si(v_, v, MPFR_RNDN); }
Real::Real(const mpq_class& q) : Real(q, g_precision) {}
Real::Real(const mpq_class& q, unsigned precision) : Real(precision, 0) { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
Real::Real(const Real& o) : Real(o.precision(), 0) { mpfr_set(v_, o.v_, MPFR_RNDN); }
Real::Real(Real&& o) noexcept : Real(o.precision(), 0) { mpfr_swap(v_, o.v_); }
Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}
Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}
Real::~Real() { mpfr_clear(v_); }

unsigned Real::precision() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }

#define HYDRO_REAL_BINOP(op, fn)                            \
  Real Real::operator op(const Real& o) const {             \
    Real r(std::max(precision(), o.precision()), 0);        \
    fn(r.v_, v_, o.v_, MPFR_RNDN);                          \
    return r;                                               \
  }
HYDRO_REAL_BINOP(+, mpfr_add)
HYDRO_REAL_BINOP(-, mpfr_sub)
HYDRO_REAL_BINOP(*, mpfr_mul)
HYDRO_REAL_BINOP(/, mpfr_div)
#undef HYDRO_REAL_BINOP

Real Real::operator-() const {
  Real r(precision(), 0);
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

bool Real::is_zero() const { return mpfr_zero_p(v_) != 0; }
bool Real::is_finite() const { return mpfr_number_p(v_) != 0; }
int Real::sign() const { return mpfr_sgn(v_); }
Real Real::abs() const {
  Real r(precision(), 0);
  mpfr_abs(r.v_, v_, MPFR_RNDN);
  return r;
}
double Real::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

std::string Real::str(int digits) const {
  if (!is_finite()) return mpfr_nan_p(v_) ? "nan" : (sign() < 0 ? "-inf" : "inf");
  char* buf = nullptr;
  std::string fmt = "%." + std::to_string(digits) + "Rg";
  mpfr_asprintf(&buf, fmt.c_str(), v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }

Real exp(const Real& x) {
  Real r = x;
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real log(const Real& x) {
  Real r = x;
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real sqrt(const Real& x) {
  Real r = x;
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real ldexp_one(long e, unsigned precision) {
  Real r(mpq_class(1), precision);
  mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
  return r;
}

}  // namespace hydro::sym
