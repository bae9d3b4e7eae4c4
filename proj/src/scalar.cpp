#include "selfsim/scalar.hpp"

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

int precision_of(const Scalar& x, const Scalar& y) {
  int p = default_precision();
  if (!x.exact()) p = std::max(p, x.enclosure().precision());
  if (!y.exact()) p = std::max(p, y.enclosure().precision());
  return p;
}

}  // namespace

const Rational& Scalar::rational() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  throw DomainError("value is only known as an enclosure; an exact rational is required");
}

Enclosure Scalar::enclosure(int precision) const {
  if (const auto* q = std::get_if<Rational>(&value_)) return Enclosure(*q, precision);
  return std::get<Enclosure>(value_);
}

std::optional<int> Scalar::sign() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return q->sign();
  const auto& e = std::get<Enclosure>(value_);
  if (e.certainly_positive()) return 1;
  if (e.certainly_negative()) return -1;
  if (e.is_point()) return 0;
  return std::nullopt;
}

double Scalar::approx() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return q->to_double();
  return std::get<Enclosure>(value_).mid();
}

Scalar Scalar::abs() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return q->abs();
  return selfsim::abs(std::get<Enclosure>(value_));
}

Scalar Scalar::operator-() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return -*q;
  return -std::get<Enclosure>(value_);
}

Scalar operator+(const Scalar& x, const Scalar& y) {
  if (x.exact() && y.exact()) return x.rational() + y.rational();
  const int p = precision_of(x, y);
  return x.enclosure(p) + y.enclosure(p);
}

Scalar operator-(const Scalar& x, const Scalar& y) {
  if (x.exact() && y.exact()) return x.rational() - y.rational();
  const int p = precision_of(x, y);
  return x.enclosure(p) - y.enclosure(p);
}

Scalar operator*(const Scalar& x, const Scalar& y) {
  if (x.exact() && y.exact()) return x.rational() * y.rational();
  const int p = precision_of(x, y);
  return x.enclosure(p) * y.enclosure(p);
}

Scalar operator/(const Scalar& x, const Scalar& y) {
  if (x.exact() && y.exact()) return x.rational() / y.rational();
  const int p = precision_of(x, y);
  return x.enclosure(p) / y.enclosure(p);
}

bool operator==(const Scalar& x, const Scalar& y) {
  if (x.exact() != y.exact()) return false;
  if (x.exact()) return x.rational() == y.rational();
  return x.enclosure() == y.enclosure();
}

std::string Scalar::str() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return q->str();
  const auto& e = std::get<Enclosure>(value_);
  return "[" + e.lo_str() + ", " + e.hi_str() + "]";
}

std::optional<bool> less_than(const Scalar& x, const Scalar& y) {
  if (x.exact() && y.exact()) return x.rational() < y.rational();
  const int p = precision_of(x, y);
  const Enclosure a = x.enclosure(p);
  const Enclosure b = y.enclosure(p);
  if (certainly_less(a, b)) return true;
  if (mpfr_greaterequal_p(a.lo_float().get(), b.hi_float().get())) return false;
  return std::nullopt;
}

bool decide_less(const Scalar& x, const Scalar& y) {
  if (auto r = less_than(x, y)) return *r;
  throw PrecisionError("comparison undecided at current precision: " + x.str() + " vs " + y.str());
}

Scalar min(const Scalar& x, const Scalar& y) {
  if (x.exact() && y.exact()) return selfsim::min(x.rational(), y.rational());
  const int p = precision_of(x, y);
  return selfsim::min(x.enclosure(p), y.enclosure(p));
}

Scalar max(const Scalar& x, const Scalar& y) {
  if (x.exact() && y.exact()) return selfsim::max(x.rational(), y.rational());
  const int p = precision_of(x, y);
  return selfsim::max(x.enclosure(p), y.enclosure(p));
}

RationalInterval exact_interval(const ScalarInterval& s) { return {s.lo.rational(), s.hi.rational()}; }

}  // namespace selfsim
