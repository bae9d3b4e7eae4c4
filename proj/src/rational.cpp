#include "selfsim/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  s = trim(s);
  std::string digits(s);
  if (!digits.empty() && digits.front() == '+') digits.erase(0, 1);
  const std::size_t start = (!digits.empty() && digits.front() == '-') ? 1 : 0;
  if (digits.size() == start) throw InputError("malformed rational \"" + std::string(whole) + "\"");
  for (std::size_t i = start; i < digits.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(digits[i]))) {
      throw InputError("malformed rational \"" + std::string(whole) + "\"");
    }
  }
  return mpz_class(digits, 10);
}

// Finite decimal with optional exponent, converted exactly.
Rational parse_decimal(std::string_view s, std::string_view whole) {
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    const mpz_class ex = parse_integer(s.substr(e + 1), whole);
    if (!ex.fits_slong_p()) throw InputError("exponent out of range in \"" + std::string(whole) + "\"");
    exponent = ex.get_si();
    s = s.substr(0, e);
  }
  std::string mantissa;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) throw InputError("malformed rational \"" + std::string(whole) + "\"");
  for (char c : int_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("malformed rational \"" + std::string(whole) + "\"");
  }
  for (char c : frac_part) {
    if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("malformed rational \"" + std::string(whole) + "\"");
  }
  mantissa.append(int_part);
  mantissa.append(frac_part);
  if (mantissa.empty()) mantissa = "0";
  mpz_class m(mantissa, 10);
  if (negative) m = -m;
  exponent -= static_cast<long>(frac_part.size());
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? Rational(m, scale) : Rational(mpz_class(m * scale));
}

}  // namespace

Rational::Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational::Rational(const mpz_class& value) : v_(value) {}

Rational::Rational(mpq_class value) : v_(std::move(value)) {
  if (v_.get_den() == 0) throw DomainError("rational with zero denominator");
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw InputError("empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const mpz_class p = parse_integer(s.substr(0, slash), text);
    const mpz_class q = parse_integer(s.substr(slash + 1), text);
    if (q == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
    return Rational(p, q);
  }
  if (s.find_first_of(".eE") != std::string_view::npos) return parse_decimal(s, text);
  return Rational(parse_integer(s, text));
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw DomainError("non-finite double has no rational value");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), value);
  return Rational(std::move(q));
}

Rational Rational::abs() const {
  Rational r = *this;
  mpq_abs(r.v_.get_mpq_t(), v_.get_mpq_t());
  return r;
}

Rational Rational::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  Rational r;
  mpq_inv(r.v_.get_mpq_t(), v_.get_mpq_t());
  return r;
}

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
  return r;
}

mpz_class Rational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
  return r;
}

std::string Rational::str() const { return v_.get_str(10); }

Rational Rational::operator-() const {
  Rational r = *this;
  r.v_ = -r.v_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  v_ += o.v_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  v_ -= o.v_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  v_ *= o.v_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("division by zero");
  v_ /= o.v_;
  return *this;
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), static_cast<unsigned long>(exponent));
  return Rational(n, d);
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational dyadic(long numerator, int level) {
  mpz_class d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(level));
  return Rational(mpz_class(numerator), d);
}

}  // namespace selfsim
