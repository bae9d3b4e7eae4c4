#pragma once

#include <optional>
#include <string>
#include <variant>

#include "selfsim/enclosure.hpp"
#include "selfsim/rational.hpp"

namespace selfsim {

// A real number known either exactly (Rational) or through a rigorous
// enclosure. Arithmetic stays exact while both operands are exact; a rational
// is promoted to a zero-width enclosure only when it meets an enclosure.
class Scalar {
 public:
  Scalar() : value_(Rational(0)) {}
  Scalar(Rational q) : value_(std::move(q)) {}   // NOLINT(implicit)
  Scalar(Enclosure e) : value_(std::move(e)) {}  // NOLINT(implicit)
  template <std::integral T>
  Scalar(T n) : value_(Rational(n)) {}  // NOLINT(implicit)

  bool exact() const { return std::holds_alternative<Rational>(value_); }
  // Throws DomainError when the value is only known as an enclosure.
  const Rational& rational() const;
  Enclosure enclosure(int precision = default_precision()) const;

  // Sign when it is certain; nullopt when an enclosure straddles zero.
  std::optional<int> sign() const;
  double approx() const;

  Scalar abs() const;
  Scalar operator-() const;
  friend Scalar operator+(const Scalar& x, const Scalar& y);
  friend Scalar operator-(const Scalar& x, const Scalar& y);
  friend Scalar operator*(const Scalar& x, const Scalar& y);
  friend Scalar operator/(const Scalar& x, const Scalar& y);

  // Exact structural equality; enclosures compare equal only as identical intervals.
  friend bool operator==(const Scalar& x, const Scalar& y);

  std::string str() const;

 private:
  std::variant<Rational, Enclosure> value_;
};

// true: x < y certainly; false: x >= y certainly; nullopt: undecided.
std::optional<bool> less_than(const Scalar& x, const Scalar& y);
// Like less_than but throws PrecisionError when undecided.
bool decide_less(const Scalar& x, const Scalar& y);

// Enclosure-valued min/max contain the true min/max of the represented reals.
Scalar min(const Scalar& x, const Scalar& y);
Scalar max(const Scalar& x, const Scalar& y);

// Closed interval with Scalar endpoints.
struct ScalarInterval {
  Scalar lo;
  Scalar hi;

  bool exact() const { return lo.exact() && hi.exact(); }
  Scalar length() const { return hi - lo; }
  friend bool operator==(const ScalarInterval&, const ScalarInterval&) = default;
};

// Exact closed interval.
struct RationalInterval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const RationalInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const RationalInterval& o) const { return !(hi < o.lo || o.hi < lo); }
  friend bool operator==(const RationalInterval&, const RationalInterval&) = default;
};

RationalInterval exact_interval(const ScalarInterval& s);

}  // namespace selfsim
