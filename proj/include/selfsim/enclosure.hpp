#pragma once

#include <mpfr.h>

#include <string>
#include <string_view>

#include "selfsim/rational.hpp"

namespace selfsim {

// Working precision (significand bits) used when none is given explicitly.
// 64 unless the SELFSIM_PRECISION environment variable says otherwise.
int default_precision();

namespace detail {

// Owning wrapper around an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(int precision);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  int precision() const { return static_cast<int>(mpfr_get_prec(value_)); }

 private:
  mpfr_t value_;
};

}  // namespace detail

// Closed interval [lo, hi] with binary floating-point endpoints. Every
// operation rounds its lower endpoint down and its upper endpoint up, so the
// result always contains the exact image of the operands. Infinite endpoints
// are allowed and propagate.
class Enclosure {
 public:
  explicit Enclosure(const Rational& value, int precision = default_precision());
  Enclosure(const Rational& lo, const Rational& hi, int precision = default_precision());

  // Decimal endpoint strings, rounded outward on input.
  static Enclosure parse(std::string_view lo, std::string_view hi, int precision = default_precision());
  static Enclosure from_doubles(double lo, double hi, int precision = default_precision());
  static Enclosure whole_line(int precision = default_precision());

  int precision() const { return lo_.precision(); }

  double lo() const;  // rounded down to double
  double hi() const;  // rounded up to double
  double mid() const;
  double width() const;  // rounded up

  Rational lo_exact() const;
  Rational hi_exact() const;
  // Decimal strings, rounded outward, with enough digits to round-trip.
  std::string lo_str() const;
  std::string hi_str() const;

  bool is_point() const;
  bool bounded() const;
  bool contains(const Rational& q) const;
  bool contains(const Enclosure& inner) const;
  bool contains_zero() const;
  bool certainly_positive() const;
  bool certainly_negative() const;

  // Same enclosure re-rounded outward to a different precision.
  Enclosure rounded_to(int precision) const;

  Enclosure operator-() const;
  friend Enclosure operator+(const Enclosure& x, const Enclosure& y);
  friend Enclosure operator-(const Enclosure& x, const Enclosure& y);
  friend Enclosure operator*(const Enclosure& x, const Enclosure& y);
  friend Enclosure operator/(const Enclosure& x, const Enclosure& y);

  // Identical endpoints.
  friend bool operator==(const Enclosure& x, const Enclosure& y);

  friend Enclosure hull(const Enclosure& x, const Enclosure& y);
  friend bool disjoint(const Enclosure& x, const Enclosure& y);
  // x.hi < y.lo
  friend bool certainly_less(const Enclosure& x, const Enclosure& y);

  friend Enclosure log(const Enclosure& x);
  friend Enclosure exp(const Enclosure& x);
  friend Enclosure sqrt(const Enclosure& x);
  friend Enclosure abs(const Enclosure& x);
  friend Enclosure pow(const Enclosure& x, long n);
  friend Enclosure min(const Enclosure& x, const Enclosure& y);
  friend Enclosure max(const Enclosure& x, const Enclosure& y);

  const detail::BigFloat& lo_float() const { return lo_; }
  const detail::BigFloat& hi_float() const { return hi_; }

 private:
  explicit Enclosure(int precision) : lo_(precision), hi_(precision) {}

  detail::BigFloat lo_;
  detail::BigFloat hi_;
};

Enclosure hull(const Enclosure& x, const Enclosure& y);
bool disjoint(const Enclosure& x, const Enclosure& y);
bool certainly_less(const Enclosure& x, const Enclosure& y);
Enclosure log(const Enclosure& x);
Enclosure exp(const Enclosure& x);
Enclosure sqrt(const Enclosure& x);
Enclosure abs(const Enclosure& x);
Enclosure pow(const Enclosure& x, long n);
Enclosure min(const Enclosure& x, const Enclosure& y);
Enclosure max(const Enclosure& x, const Enclosure& y);

// a*x + b over all combinations of the operands.
Enclosure affine(const Enclosure& a, const Enclosure& b, const Enclosure& x);

}  // namespace selfsim
