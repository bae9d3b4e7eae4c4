#include "selfsim/enclosure.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "selfsim/error.hpp"

namespace selfsim {

int default_precision() {
  static const int precision = [] {
    if (const char* env = std::getenv("SELFSIM_PRECISION"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const long p = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && p >= MPFR_PREC_MIN && p <= 1 << 16) return static_cast<int>(p);
    }
    return 64;
  }();
  return precision;
}

namespace detail {

BigFloat::BigFloat(int precision) {
  mpfr_init2(value_, std::max<mpfr_prec_t>(precision, MPFR_PREC_MIN));
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

}  // namespace detail

namespace {

using detail::BigFloat;

int joint_precision(const Enclosure& x, const Enclosure& y) { return std::max(x.precision(), y.precision()); }

// Product rounded in the given direction, with 0 * inf taken as 0.
void mul_rounded(mpfr_ptr out, mpfr_srcptr a, mpfr_srcptr b, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(a) || mpfr_zero_p(b)) {
    mpfr_set_zero(out, 1);
    return;
  }
  mpfr_mul(out, a, b, rnd);
}

std::string decimal(mpfr_srcptr x, mpfr_rnd_t rnd) {
  if (mpfr_inf_p(x)) return mpfr_sgn(x) < 0 ? "-inf" : "inf";
  if (mpfr_nan_p(x)) return "nan";
  if (mpfr_zero_p(x)) return "0";
  const std::size_t digits = mpfr_get_str_ndigits(10, mpfr_get_prec(x));
  mpfr_exp_t exponent = 0;
  char* raw = mpfr_get_str(nullptr, &exponent, 10, digits, x, rnd);
  std::string m(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!m.empty() && m.front() == '-') {
    sign = "-";
    m.erase(0, 1);
  }
  // value = 0.m * 10^exponent = m[0].m[1..] * 10^(exponent-1)
  while (m.size() > 1 && m.back() == '0') m.pop_back();
  std::string out = sign + m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  if (exponent - 1 != 0) out += "e" + std::to_string(static_cast<long>(exponent - 1));
  return out;
}

void set_from_string(mpfr_ptr out, std::string_view text, mpfr_rnd_t rnd) {
  const std::string s(text);
  if (s == "inf" || s == "+inf") {
    mpfr_set_inf(out, 1);
    return;
  }
  if (s == "-inf") {
    mpfr_set_inf(out, -1);
    return;
  }
  char* end = nullptr;
  mpfr_strtofr(out, s.c_str(), &end, 10, rnd);
  if (s.empty() || end == nullptr || *end != '\0' || mpfr_nan_p(out)) {
    throw InputError("malformed decimal endpoint \"" + s + "\"");
  }
}

Rational to_rational(mpfr_srcptr x) {
  if (!mpfr_number_p(x)) throw DomainError("infinite endpoint has no rational value");
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x);
  return Rational(std::move(q));
}

}  // namespace

Enclosure::Enclosure(const Rational& value, int precision) : Enclosure(value, value, precision) {}

Enclosure::Enclosure(const Rational& lo, const Rational& hi, int precision) : Enclosure(precision) {
  if (hi < lo) throw DomainError("enclosure with lo > hi");
  mpfr_set_q(lo_.get(), lo.gmp().get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_.get(), hi.gmp().get_mpq_t(), MPFR_RNDU);
}

Enclosure Enclosure::parse(std::string_view lo, std::string_view hi, int precision) {
  Enclosure e(precision);
  set_from_string(e.lo_.get(), lo, MPFR_RNDD);
  set_from_string(e.hi_.get(), hi, MPFR_RNDU);
  if (mpfr_greater_p(e.lo_.get(), e.hi_.get())) throw InputError("enclosure with lo > hi");
  return e;
}

Enclosure Enclosure::from_doubles(double lo, double hi, int precision) {
  if (!(lo <= hi)) throw DomainError("enclosure with lo > hi");
  Enclosure e(precision);
  mpfr_set_d(e.lo_.get(), lo, MPFR_RNDD);
  mpfr_set_d(e.hi_.get(), hi, MPFR_RNDU);
  return e;
}

Enclosure Enclosure::whole_line(int precision) {
  Enclosure e(precision);
  mpfr_set_inf(e.lo_.get(), -1);
  mpfr_set_inf(e.hi_.get(), 1);
  return e;
}

double Enclosure::lo() const { return mpfr_get_d(lo_.get(), MPFR_RNDD); }
double Enclosure::hi() const { return mpfr_get_d(hi_.get(), MPFR_RNDU); }

double Enclosure::mid() const {
  if (!bounded()) return (lo() + hi()) / 2;
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return mpfr_get_d(m.get(), MPFR_RNDN);
}

double Enclosure::width() const {
  BigFloat w(precision());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return mpfr_get_d(w.get(), MPFR_RNDU);
}

Rational Enclosure::lo_exact() const { return to_rational(lo_.get()); }
Rational Enclosure::hi_exact() const { return to_rational(hi_.get()); }
std::string Enclosure::lo_str() const { return decimal(lo_.get(), MPFR_RNDD); }
std::string Enclosure::hi_str() const { return decimal(hi_.get(), MPFR_RNDU); }

bool Enclosure::is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
bool Enclosure::bounded() const { return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get()); }

bool Enclosure::contains(const Rational& q) const {
  return mpfr_cmp_q(lo_.get(), q.gmp().get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.gmp().get_mpq_t()) >= 0;
}

bool Enclosure::contains(const Enclosure& inner) const {
  return mpfr_lessequal_p(lo_.get(), inner.lo_.get()) && mpfr_greaterequal_p(hi_.get(), inner.hi_.get());
}

bool Enclosure::contains_zero() const { return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0; }
bool Enclosure::certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
bool Enclosure::certainly_negative() const { return mpfr_sgn(hi_.get()) < 0; }

Enclosure Enclosure::rounded_to(int precision) const {
  Enclosure e(precision);
  mpfr_set(e.lo_.get(), lo_.get(), MPFR_RNDD);
  mpfr_set(e.hi_.get(), hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure Enclosure::operator-() const {
  Enclosure e(precision());
  mpfr_neg(e.lo_.get(), hi_.get(), MPFR_RNDD);
  mpfr_neg(e.hi_.get(), lo_.get(), MPFR_RNDU);
  return e;
}

Enclosure operator+(const Enclosure& x, const Enclosure& y) {
  Enclosure e(joint_precision(x, y));
  mpfr_add(e.lo_.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
  mpfr_add(e.hi_.get(), x.hi_.get(), y.hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure operator-(const Enclosure& x, const Enclosure& y) {
  Enclosure e(joint_precision(x, y));
  mpfr_sub(e.lo_.get(), x.lo_.get(), y.hi_.get(), MPFR_RNDD);
  mpfr_sub(e.hi_.get(), x.hi_.get(), y.lo_.get(), MPFR_RNDU);
  return e;
}

Enclosure operator*(const Enclosure& x, const Enclosure& y) {
  const int p = joint_precision(x, y);
  Enclosure e(p);
  BigFloat t(p);
  mpfr_srcptr xs[2] = {x.lo_.get(), x.hi_.get()};
  mpfr_srcptr ys[2] = {y.lo_.get(), y.hi_.get()};
  bool first = true;
  for (auto a : xs) {
    for (auto b : ys) {
      mul_rounded(t.get(), a, b, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), e.lo_.get())) mpfr_set(e.lo_.get(), t.get(), MPFR_RNDD);
      mul_rounded(t.get(), a, b, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), e.hi_.get())) mpfr_set(e.hi_.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return e;
}

Enclosure operator/(const Enclosure& x, const Enclosure& y) {
  const int p = joint_precision(x, y);
  if (y.contains_zero()) {
    if (y.is_point()) throw DomainError("enclosure division by zero");
    return Enclosure::whole_line(p);
  }
  Enclosure inv(p);
  mpfr_ui_div(inv.lo_.get(), 1, y.hi_.get(), MPFR_RNDD);
  mpfr_ui_div(inv.hi_.get(), 1, y.lo_.get(), MPFR_RNDU);
  // Exact quotient when both operands are points and the division is exact.
  if (x.is_point() && y.is_point()) {
    Enclosure q(p);
    mpfr_div(q.lo_.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
    mpfr_div(q.hi_.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDU);
    return q;
  }
  return x * inv;
}

bool operator==(const Enclosure& x, const Enclosure& y) {
  return mpfr_equal_p(x.lo_.get(), y.lo_.get()) && mpfr_equal_p(x.hi_.get(), y.hi_.get());
}

Enclosure hull(const Enclosure& x, const Enclosure& y) {
  Enclosure e(joint_precision(x, y));
  mpfr_min(e.lo_.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
  mpfr_max(e.hi_.get(), x.hi_.get(), y.hi_.get(), MPFR_RNDU);
  return e;
}

bool disjoint(const Enclosure& x, const Enclosure& y) {
  return mpfr_less_p(x.hi_.get(), y.lo_.get()) || mpfr_less_p(y.hi_.get(), x.lo_.get());
}

bool certainly_less(const Enclosure& x, const Enclosure& y) { return mpfr_less_p(x.hi_.get(), y.lo_.get()) != 0; }

Enclosure log(const Enclosure& x) {
  if (mpfr_sgn(x.lo_.get()) <= 0) throw DomainError("log of an enclosure with non-positive lower endpoint");
  Enclosure e(x.precision());
  mpfr_log(e.lo_.get(), x.lo_.get(), MPFR_RNDD);
  mpfr_log(e.hi_.get(), x.hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure exp(const Enclosure& x) {
  Enclosure e(x.precision());
  mpfr_exp(e.lo_.get(), x.lo_.get(), MPFR_RNDD);
  mpfr_exp(e.hi_.get(), x.hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure sqrt(const Enclosure& x) {
  if (mpfr_sgn(x.lo_.get()) < 0) throw DomainError("sqrt of an enclosure with negative lower endpoint");
  Enclosure e(x.precision());
  mpfr_sqrt(e.lo_.get(), x.lo_.get(), MPFR_RNDD);
  mpfr_sqrt(e.hi_.get(), x.hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure abs(const Enclosure& x) {
  if (mpfr_sgn(x.lo_.get()) >= 0) return x;
  if (mpfr_sgn(x.hi_.get()) <= 0) return -x;
  Enclosure e(x.precision());
  mpfr_set_zero(e.lo_.get(), 1);
  BigFloat neg(x.precision());
  mpfr_neg(neg.get(), x.lo_.get(), MPFR_RNDU);
  mpfr_max(e.hi_.get(), neg.get(), x.hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure pow(const Enclosure& x, long n) {
  if (n < 0) return Enclosure(Rational(1), x.precision()) / pow(x, -n);
  Enclosure e(x.precision());
  if (n == 0) {
    mpfr_set_ui(e.lo_.get(), 1, MPFR_RNDD);
    mpfr_set_ui(e.hi_.get(), 1, MPFR_RNDU);
    return e;
  }
  const bool even = n % 2 == 0;
  if (mpfr_sgn(x.lo_.get()) >= 0 || !even) {
    // monotone increasing on the operand
    mpfr_pow_si(e.lo_.get(), x.lo_.get(), n, MPFR_RNDD);
    mpfr_pow_si(e.hi_.get(), x.hi_.get(), n, MPFR_RNDU);
    return e;
  }
  if (mpfr_sgn(x.hi_.get()) <= 0) {
    mpfr_pow_si(e.lo_.get(), x.hi_.get(), n, MPFR_RNDD);
    mpfr_pow_si(e.hi_.get(), x.lo_.get(), n, MPFR_RNDU);
    return e;
  }
  return pow(abs(x), n);
}

Enclosure min(const Enclosure& x, const Enclosure& y) {
  Enclosure e(joint_precision(x, y));
  mpfr_min(e.lo_.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
  mpfr_min(e.hi_.get(), x.hi_.get(), y.hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure max(const Enclosure& x, const Enclosure& y) {
  Enclosure e(joint_precision(x, y));
  mpfr_max(e.lo_.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
  mpfr_max(e.hi_.get(), x.hi_.get(), y.hi_.get(), MPFR_RNDU);
  return e;
}

Enclosure affine(const Enclosure& a, const Enclosure& b, const Enclosure& x) { return a * x + b; }

}  // namespace selfsim
