#ifndef PNORMCUT_NUMERICS_HPP
#define PNORMCUT_NUMERICS_HPP

// Scalar layer: exact rational exponents, |t|^p evaluation, and an RAII
// wrapper over MPFR for configurable-precision arithmetic.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <mpfr.h>

namespace pnormcut {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Machine-double precision; the default for search and ascent.
inline constexpr unsigned kDoubleBits = 53;

/// Parses "3", "-2.5", "1e-3", "7/2" or "1.5e2/7" into an exact rational.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Shortest exact textual form: "3", "-5/2".
std::string to_string(const Rational& q);

/// Smallest integer >= q.
BigInt ceil(const Rational& q);

/// Rational exponent p = numerator/denominator >= 1, kept in lowest terms.
class PExponent {
 public:
  PExponent(std::int64_t numerator, std::int64_t denominator = 1);

  static PExponent from_rational(const Rational& q);
  /// Accepts the same syntax as parse_rational ("2.5" becomes 5/2).
  static PExponent parse(std::string_view text);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  Rational rational() const { return Rational(num_, den_); }
  std::string to_string() const;

  friend bool operator==(const PExponent&, const PExponent&) = default;
  friend bool operator<(const PExponent& a, const PExponent& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend PExponent operator+(const PExponent& a, const PExponent& b);

 private:
  std::int64_t num_;
  std::int64_t den_;
};

std::ostream& operator<<(std::ostream& os, const PExponent& p);

/// p' with 1/p + 1/p' = 1. Throws std::domain_error for p = 1.
PExponent conjugate(const PExponent& p);

/// Binary floating-point number with a per-value precision in bits.
///
/// Binary operators produce a result at the larger of the two operand
/// precisions and round to nearest, so every operation carries relative
/// error at most 2^{-bits}.
class HPScalar {
 public:
  explicit HPScalar(unsigned bits = kDoubleBits);
  HPScalar(double value, unsigned bits);
  HPScalar(long value, unsigned bits);
  HPScalar(int value, unsigned bits) : HPScalar(static_cast<long>(value), bits) {}
  HPScalar(const Rational& value, unsigned bits);
  HPScalar(const BigInt& value, unsigned bits);

  HPScalar(const HPScalar& other);
  HPScalar(HPScalar&& other) noexcept;
  HPScalar& operator=(const HPScalar& other);
  HPScalar& operator=(HPScalar&& other) noexcept;
  ~HPScalar();

  /// Decimal or scientific literal, rounded to nearest.
  static HPScalar parse(std::string_view text, unsigned bits);
  static HPScalar infinity(unsigned bits);

  unsigned precision() const;
  /// Copy rounded to a different precision.
  HPScalar with_precision(unsigned bits) const;

  double to_double() const;
  /// Scientific notation with the given number of significant digits
  /// (0 selects enough digits to round-trip the precision).
  std::string to_string(int digits = 0) const;
  BigInt round_to_integer() const;

  bool is_zero() const;
  bool is_finite() const;
  int sign() const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  HPScalar& operator+=(const HPScalar& rhs);
  HPScalar& operator-=(const HPScalar& rhs);
  HPScalar& operator*=(const HPScalar& rhs);
  HPScalar& operator/=(const HPScalar& rhs);

  friend HPScalar operator+(HPScalar lhs, const HPScalar& rhs) { return lhs += rhs; }
  friend HPScalar operator-(HPScalar lhs, const HPScalar& rhs) { return lhs -= rhs; }
  friend HPScalar operator*(HPScalar lhs, const HPScalar& rhs) { return lhs *= rhs; }
  friend HPScalar operator/(HPScalar lhs, const HPScalar& rhs) { return lhs /= rhs; }
  HPScalar operator-() const;

  friend int compare(const HPScalar& a, const HPScalar& b);
  friend bool operator==(const HPScalar& a, const HPScalar& b) { return compare(a, b) == 0; }
  friend bool operator<(const HPScalar& a, const HPScalar& b) { return compare(a, b) < 0; }
  friend bool operator>(const HPScalar& a, const HPScalar& b) { return compare(a, b) > 0; }
  friend bool operator<=(const HPScalar& a, const HPScalar& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const HPScalar& a, const HPScalar& b) { return compare(a, b) >= 0; }

 private:
  mpfr_t value_;
};

std::ostream& operator<<(std::ostream& os, const HPScalar& x);

HPScalar abs(const HPScalar& x);
HPScalar sqrt(const HPScalar& x);
HPScalar log(const HPScalar& x);
HPScalar exp(const HPScalar& x);
HPScalar log2(const HPScalar& x);
HPScalar max(const HPScalar& a, const HPScalar& b);

/// |t|^e for an arbitrary rational exponent e, evaluated as exp(e ln|t|)
/// with guard bits and rounded to `bits`. 0^e is 0 for e > 0 and 1 for
/// e = 0; e < 0 at t = 0 yields +inf.
HPScalar pow_abs(const HPScalar& t, const Rational& e, unsigned bits);

/// |t|^p with relative error at most 2^{4-bits}. Requires bits >= 53.
HPScalar pow_abs(const HPScalar& t, const PExponent& p, unsigned bits);
HPScalar pow_abs(double t, const PExponent& p, unsigned bits);

/// |t|^{1/p}.
HPScalar root_abs(const HPScalar& t, const PExponent& p, unsigned bits);

/// Precision needed so that (n/2^p) f^p - n alpha^p, with both terms near
/// n (2 alpha)^p, keeps at least 50 accurate bits:
/// ceil(p log2(alpha) + p log2(2n)) + 64.
unsigned decode_precision_bits(int n, const PExponent& p, const HPScalar& alpha);

/// |t|^p in machine doubles, for inner loops of heuristic search only.
inline double pow_abs(double t, const PExponent& p) {
  const double a = std::fabs(t);
  if (a == 0.0) return 0.0;
  switch (p.is_integer() ? p.numerator() : 0) {
    case 1: return a;
    case 2: return a * a;
    case 3: return a * a * a;
    case 4: { const double s = a * a; return s * s; }
    default: return std::pow(a, p.value());
  }
}

}  // namespace pnormcut

#endif  // PNORMCUT_NUMERICS_HPP
