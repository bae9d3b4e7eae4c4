#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace selfsim {

// Exact rational number backed by GMP. Always stored in lowest terms with a
// positive denominator, so equality is structural and serialization canonical.
class Rational {
 public:
  Rational() = default;
  template <std::integral T>
  Rational(T value) : v_(static_cast<long>(value)) {}  // NOLINT(implicit)
  Rational(long num, long den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(const mpz_class& value);
  explicit Rational(mpq_class value);

  // Accepts "p/q", "p", and finite decimals such as "0.45" or "-1.5e-3".
  static Rational parse(std::string_view text);
  // Exact value of a finite double.
  static Rational from_double(double value);

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }
  const mpq_class& gmp() const { return v_; }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return den() == 1; }

  Rational abs() const;
  Rational inverse() const;
  mpz_class floor() const;
  mpz_class ceil() const;
  double to_double() const { return v_.get_d(); }

  // "p/q", or "p" when the denominator is one.
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class v_;
};

Rational pow(const Rational& base, long exponent);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
// 2^-n as an exact rational.
Rational dyadic(long numerator, int level);

}  // namespace selfsim

template <>
struct std::hash<selfsim::Rational> {
  std::size_t operator()(const selfsim::Rational& q) const noexcept {
    return std::hash<std::string>{}(q.str());
  }
};
