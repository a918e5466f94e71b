#include "pnormcut/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pnormcut {

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

BigInt pow10(long k) {
  BigInt r = 1;
  for (long i = 0; i < k; ++i) r *= 10;
  return r;
}

// [sign] digits [. digits] [(e|E) [sign] digits]
Rational parse_decimal(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Rational { throw std::invalid_argument("not a rational number: '" + original + "'"); };
  if (text.empty()) return fail();
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = text.substr(e + 1);
    text = text.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) return fail();
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    if (whole.empty() && frac.empty()) return fail();
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac))) return fail();
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(text)) return fail();
    digits = std::string(text);
  }
  // A leading zero would make the BigInt constructor read octal.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  Rational value{digits.empty() ? BigInt(0) : BigInt(digits)};
  if (exponent > 0) value *= pow10(exponent);
  if (exponent < 0) value /= pow10(-exponent);
  return negative ? Rational(-value) : value;
}

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("value does not fit in 64 bits: " + v.str());
  }
  return v.convert_to<std::int64_t>();
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_decimal(text.substr(0, slash));
    const Rational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return num / den;
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt ceil(const Rational& q) {
  BigInt result;
  mpz_cdiv_q(result.backend().data(), mpq_numref(q.backend().data()), mpq_denref(q.backend().data()));
  return result;
}

// ---------------------------------------------------------------------------
// PExponent

PExponent::PExponent(std::int64_t numerator, std::int64_t denominator) : num_(numerator), den_(denominator) {
  if (den_ <= 0) throw std::invalid_argument("exponent denominator must be positive");
  if (num_ < den_) throw std::invalid_argument("exponent must be at least 1");
  const std::int64_t g = std::gcd(num_, den_);
  num_ /= g;
  den_ /= g;
}

PExponent PExponent::from_rational(const Rational& q) {
  return PExponent(to_int64(boost::multiprecision::numerator(q)), to_int64(boost::multiprecision::denominator(q)));
}

PExponent PExponent::parse(std::string_view text) { return from_rational(parse_rational(text)); }

std::string PExponent::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

PExponent operator+(const PExponent& a, const PExponent& b) {
  return PExponent::from_rational(a.rational() + b.rational());
}

std::ostream& operator<<(std::ostream& os, const PExponent& p) { return os << p.to_string(); }

PExponent conjugate(const PExponent& p) {
  if (p.numerator() == p.denominator()) {
    throw std::domain_error("the conjugate of p = 1 is infinity");
  }
  return PExponent(p.numerator(), p.numerator() - p.denominator());
}

// ---------------------------------------------------------------------------
// HPScalar

HPScalar::HPScalar(unsigned bits) {
  mpfr_init2(value_, static_cast<mpfr_prec_t>(std::max<unsigned>(bits, MPFR_PREC_MIN)));
  mpfr_set_zero(value_, 1);
}

HPScalar::HPScalar(double value, unsigned bits) : HPScalar(bits) { mpfr_set_d(value_, value, MPFR_RNDN); }

HPScalar::HPScalar(long value, unsigned bits) : HPScalar(bits) { mpfr_set_si(value_, value, MPFR_RNDN); }

HPScalar::HPScalar(const Rational& value, unsigned bits) : HPScalar(bits) {
  mpfr_set_q(value_, value.backend().data(), MPFR_RNDN);
}

HPScalar::HPScalar(const BigInt& value, unsigned bits) : HPScalar(bits) {
  mpfr_set_z(value_, value.backend().data(), MPFR_RNDN);
}

HPScalar::HPScalar(const HPScalar& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

HPScalar::HPScalar(HPScalar&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

HPScalar& HPScalar::operator=(const HPScalar& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

HPScalar& HPScalar::operator=(HPScalar&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

HPScalar::~HPScalar() { mpfr_clear(value_); }

HPScalar HPScalar::parse(std::string_view text, unsigned bits) {
  HPScalar r(bits);
  const std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return r;
}

HPScalar HPScalar::infinity(unsigned bits) {
  HPScalar r(bits);
  mpfr_set_inf(r.value_, 1);
  return r;
}

unsigned HPScalar::precision() const { return static_cast<unsigned>(mpfr_get_prec(value_)); }

HPScalar HPScalar::with_precision(unsigned bits) const {
  HPScalar r(bits);
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

double HPScalar::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string HPScalar::to_string(int digits) const {
  if (digits <= 0) digits = static_cast<int>(std::ceil(precision() * 0.30102999566398120)) + 1;
  char* buffer = nullptr;
  mpfr_asprintf(&buffer, "%.*Re", digits - 1, value_);
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

BigInt HPScalar::round_to_integer() const {
  if (!is_finite()) throw std::domain_error("cannot round a non-finite value");
  BigInt r;
  mpfr_get_z(r.backend().data(), value_, MPFR_RNDN);
  return r;
}

bool HPScalar::is_zero() const { return mpfr_zero_p(value_) != 0; }
bool HPScalar::is_finite() const { return mpfr_number_p(value_) != 0; }
int HPScalar::sign() const { return mpfr_sgn(value_); }

namespace {

void widen(mpfr_ptr v, mpfr_srcptr other) {
  if (mpfr_get_prec(other) > mpfr_get_prec(v)) mpfr_prec_round(v, mpfr_get_prec(other), MPFR_RNDN);
}

}  // namespace

HPScalar& HPScalar::operator+=(const HPScalar& rhs) {
  widen(value_, rhs.value_);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

HPScalar& HPScalar::operator-=(const HPScalar& rhs) {
  widen(value_, rhs.value_);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

HPScalar& HPScalar::operator*=(const HPScalar& rhs) {
  widen(value_, rhs.value_);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

HPScalar& HPScalar::operator/=(const HPScalar& rhs) {
  widen(value_, rhs.value_);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

HPScalar HPScalar::operator-() const {
  HPScalar r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

int compare(const HPScalar& a, const HPScalar& b) { return mpfr_cmp(a.value_, b.value_); }

std::ostream& operator<<(std::ostream& os, const HPScalar& x) { return os << x.to_string(); }

HPScalar abs(const HPScalar& x) {
  HPScalar r(x);
  mpfr_abs(r.get(), r.get(), MPFR_RNDN);
  return r;
}

HPScalar sqrt(const HPScalar& x) {
  HPScalar r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

HPScalar log(const HPScalar& x) {
  HPScalar r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

HPScalar exp(const HPScalar& x) {
  HPScalar r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

HPScalar log2(const HPScalar& x) {
  HPScalar r(x.precision());
  mpfr_log2(r.get(), x.get(), MPFR_RNDN);
  return r;
}

HPScalar max(const HPScalar& a, const HPScalar& b) { return a < b ? b : a; }

// ---------------------------------------------------------------------------
// Powers

HPScalar pow_abs(const HPScalar& t, const Rational& e, unsigned bits) {
  if (e == 0) return HPScalar(1L, bits);
  if (t.is_zero()) return e > 0 ? HPScalar(bits) : HPScalar::infinity(bits);

  // Guard bits cover the magnitude of e*ln|t|: an absolute error d in the
  // exponent becomes a relative error d in the result.
  const double log_t = std::fabs(static_cast<double>(mpfr_get_exp(t.get()))) * 0.6931471805599453 + 1.0;
  const double log_magnitude = std::fabs(e.convert_to<double>()) * log_t;
  const auto guard = 32u + static_cast<unsigned>(std::ceil(std::log2(log_magnitude + 2.0)));
  const unsigned work = std::max(bits, t.precision()) + guard;

  HPScalar x = abs(t).with_precision(work);
  mpfr_log(x.get(), x.get(), MPFR_RNDN);
  mpfr_mul_z(x.get(), x.get(), mpq_numref(e.backend().data()), MPFR_RNDN);
  mpfr_div_z(x.get(), x.get(), mpq_denref(e.backend().data()), MPFR_RNDN);
  mpfr_exp(x.get(), x.get(), MPFR_RNDN);
  return x.with_precision(bits);
}

HPScalar pow_abs(const HPScalar& t, const PExponent& p, unsigned bits) {
  if (bits < kDoubleBits) throw std::invalid_argument("pow_abs needs at least 53 bits");
  return pow_abs(t, p.rational(), bits);
}

HPScalar pow_abs(double t, const PExponent& p, unsigned bits) {
  return pow_abs(HPScalar(t, kDoubleBits), p, bits);
}

HPScalar root_abs(const HPScalar& t, const PExponent& p, unsigned bits) {
  return pow_abs(t, Rational(p.denominator(), p.numerator()), bits);
}

unsigned decode_precision_bits(int n, const PExponent& p, const HPScalar& alpha) {
  if (n < 2) throw std::invalid_argument("decode_precision_bits: n must be at least 2");
  if (alpha < HPScalar(1L, kDoubleBits)) throw std::invalid_argument("decode_precision_bits: alpha must be at least 1");
  constexpr unsigned kWork = 128;
  HPScalar magnitude = log2(alpha.with_precision(kWork)) + log2(HPScalar(2L * n, kWork));
  magnitude *= HPScalar(p.rational(), kWork);
  mpfr_ceil(magnitude.get(), magnitude.get());
  return static_cast<unsigned>(mpfr_get_ui(magnitude.get(), MPFR_RNDN)) + 64u;
}

}  // namespace pnormcut
