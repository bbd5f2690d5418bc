#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "hydro/expr.hpp"
#include "hydro/fraction.hpp"

namespace hydro::sym {

enum class ZeroKind { ProvenZero, ProvenNonzero, ProbablyZero, ProbablyNonzero };

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::ProvenZero;
  /// Number of agreeing sample points for ProbablyZero.
  unsigned samples = 0;
  /// Sample point (symbol name -> decimal value) for ProbablyNonzero.
  std::map<std::string, std::string> witness;

  bool zero() const { return kind == ZeroKind::ProvenZero || kind == ZeroKind::ProbablyZero; }
  bool proven() const { return kind == ZeroKind::ProvenZero || kind == ZeroKind::ProvenNonzero; }
};

std::string to_string(ZeroKind k);
std::string describe(const ZeroVerdict& v);

struct ZeroPolicy {
  unsigned samples = 20;
  std::uint64_t seed = 20240917;
  unsigned precision = 64;
  /// Sample attempts allowed before giving up on singular points.
  unsigned max_attempts = 200;
};

/// Raised when every candidate sample point hits a singularity.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact when the canonical numerator decides (no exp/ln/sqrt anywhere);
/// otherwise random sampling at positive real points.
ZeroVerdict is_zero(const Fraction& f, const ZeroPolicy& policy = {});
ZeroVerdict is_zero(const Expr& e, const ZeroPolicy& policy = {});

}  // namespace hydro::sym
