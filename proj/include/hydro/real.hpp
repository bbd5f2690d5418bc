#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace hydro::sym {

/// Owning MPFR value. Results of arithmetic take the larger operand precision;
/// values built from rationals use the thread's working precision.
class Real {
 public:
  Real();
  explicit Real(long v);
  explicit Real(const mpq_class& q);
  Real(const mpq_class& q, unsigned precision);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  unsigned precision() const;
  const __mpfr_struct* get() const { return v_; }
  __mpfr_struct* get() { return v_; }

  Real operator+(const Real& o) const;
  Real operator-(const Real& o) const;
  Real operator*(const Real& o) const;
  Real operator/(const Real& o) const;
  Real operator-() const;

  bool is_zero() const;
  bool is_finite() const;
  int sign() const;
  Real abs() const;
  double to_double() const;
  /// Decimal rendering with the given number of significant digits.
  std::string str(int digits = 20) const;

  friend bool operator<(const Real& a, const Real& b);
  friend bool operator<=(const Real& a, const Real& b);

  static unsigned working_precision();

 private:
  explicit Real(unsigned precision, int);
  mpfr_t v_;
};

Real exp(const Real& x);
Real log(const Real& x);
Real sqrt(const Real& x);
/// 2^e at the given precision.
Real ldexp_one(long e, unsigned precision);

/// Sets the working precision for the current thread for its lifetime.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

}  // namespace hydro::sym
