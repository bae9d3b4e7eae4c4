#include <doctest.h>

#include <random>

#include "selfsim/enclosure.hpp"
#include "selfsim/error.hpp"
#include "selfsim/rational.hpp"
#include "selfsim/scalar.hpp"

using namespace selfsim;

TEST_CASE("rational parse and canonical form") {
  CHECK(Rational::parse("6/4") == Rational(3, 2));
  CHECK(Rational::parse("-6/-4").str() == "3/2");
  CHECK(Rational::parse("0.45") == Rational(9, 20));
  CHECK(Rational::parse("-1.5e-3") == Rational(-3, 2000));
  CHECK(Rational::parse(" 7 ") == Rational(7));
  CHECK(Rational(2, -4).str() == "-1/2");
  CHECK_THROWS_AS(Rational::parse("1/0"), InputError);
  CHECK_THROWS_AS(Rational::parse("abc"), InputError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
  CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
  CHECK(Rational(-7, 2).floor() == -4);
  CHECK(Rational(-7, 2).ceil() == -3);
}

TEST_CASE("rational arithmetic agrees with cross multiplication") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long> d(-100000, 100000);
  for (int i = 0; i < 1000; ++i) {
    long a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    if (b == 0) b = 1;
    if (e == 0) e = 1;
    const Rational x(a, b), y(c, e);
    // a/b + c/e = (ae + cb)/(be); compared as products of integers
    const Rational s = x + y;
    CHECK(s.num() * (mpz_class(b) * e) == s.den() * (mpz_class(a) * e + mpz_class(c) * b));
    const Rational p = x * y;
    CHECK(p.num() * (mpz_class(b) * e) == p.den() * (mpz_class(a) * c));
    CHECK(((x < y) == (mpz_class(a) * e * (b * e > 0 ? 1 : -1) < mpz_class(c) * b * (b * e > 0 ? 1 : -1))));
  }
}

TEST_CASE("enclosure basic arithmetic") {
  const Enclosure a(Rational(1), Rational(2));
  const Enclosure b(Rational(3), Rational(4));
  const Enclosure s = a + b;
  CHECK(s.lo_exact() == Rational(4));
  CHECK(s.hi_exact() == Rational(6));

  const Enclosure m = Enclosure(Rational(-1), Rational(1)) * Enclosure(Rational(0));
  CHECK(m.lo_exact() == Rational(0));
  CHECK(m.hi_exact() == Rational(0));

  const Enclosure third(Rational(1, 3));
  CHECK(third.contains(Rational(1, 3)));
  CHECK_FALSE(third.is_point());
  const Enclosure one = third * Enclosure(Rational(3));
  CHECK(one.contains(Rational(1)));
  CHECK(one.width() <= 4 * std::ldexp(1.0, -64));

  CHECK(Enclosure(Rational(-2), Rational(3)) * Enclosure(Rational(-5), Rational(1)) ==
        Enclosure(Rational(-15), Rational(10)));
}

TEST_CASE("enclosure elementary functions") {
  CHECK(log(Enclosure(Rational(1))).contains(Rational(0)));
  const Enclosure l2 = log(Enclosure(Rational(2)));
  // ln 2 to 40 digits
  const Rational oracle_lo = Rational::parse("0.6931471805599453094172321214581765680755");
  const Rational oracle_hi = Rational::parse("0.6931471805599453094172321214581765680756");
  CHECK(l2.lo_exact() <= oracle_lo);
  CHECK(l2.hi_exact() >= oracle_hi);
  CHECK(l2.width() < 1e-18);
  CHECK_THROWS_AS(log(Enclosure(Rational(-1), Rational(1))), DomainError);
  const Enclosure r2 = sqrt(Enclosure(Rational(2)));
  CHECK(r2.lo_exact() * r2.lo_exact() <= Rational(2));
  CHECK(r2.hi_exact() * r2.hi_exact() >= Rational(2));
  CHECK(pow(Enclosure(Rational(-2), Rational(1)), 2) == Enclosure(Rational(0), Rational(4)));
}

TEST_CASE("enclosure affine examples") {
  const Enclosure a(Rational(1, 3));
  const Enclosure b(Rational(2, 3));
  const Enclosure x(Rational(0), Rational(1));
  const Enclosure y = affine(a, b, x);
  CHECK(y.contains(Rational(2, 3)));
  CHECK(y.contains(Rational(1)));
  CHECK(y.width() < 1.0 / 3 + 1e-15);
  const Enclosure z = affine(-a, Enclosure(Rational(1)), x);
  CHECK(z.contains(Rational(2, 3)));
  CHECK(z.contains(Rational(1)));
}

TEST_CASE("enclosure operations are inclusion monotone") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-50, 50);
  for (int i = 0; i < 300; ++i) {
    long v[4];
    for (auto& t : v) t = d(rng);
    const Rational xl(std::min(v[0], v[1]), 7), xh(std::max(v[0], v[1]), 7);
    const Rational yl(std::min(v[2], v[3]), 11), yh(std::max(v[2], v[3]), 11);
    const Enclosure X(xl, xh), Y(yl, yh);
    const Rational px = xl + (xh - xl) / 3, py = yl + (yh - yl) / 5;
    CHECK((X + Y).contains(px + py));
    CHECK((X - Y).contains(px - py));
    CHECK((X * Y).contains(px * py));
    if (!Y.contains_zero()) CHECK((X / Y).contains(px / py));
    const Enclosure Xs(px, px);
    CHECK((X * Y).contains(Xs * Y));
  }
}

TEST_CASE("enclosure string round trip and precision") {
  const Enclosure e(Rational(1, 3), Rational(1, 3), 128);
  CHECK(e.precision() == 128);
  const Enclosure back = Enclosure::parse(e.lo_str(), e.hi_str(), 128);
  CHECK(back.contains(e));
  CHECK(back.contains(Rational(1, 3)));
  const Enclosure low = e.rounded_to(32);
  CHECK(low.contains(e));
  CHECK(Enclosure::parse("-inf", "inf").contains(Rational(10)));
  CHECK_THROWS_AS(Enclosure::parse("2", "1"), InputError);
  CHECK_THROWS_AS(Enclosure::parse("x", "1"), InputError);
}

TEST_CASE("scalar stays exact until it meets an enclosure") {
  const Scalar a = Rational(1, 3);
  const Scalar b = Rational(1, 6);
  CHECK((a + b).exact());
  CHECK((a + b).rational() == Rational(1, 2));
  const Scalar c = log(Enclosure(Rational(3)));
  CHECK_FALSE((a * c).exact());
  CHECK(Enclosure(Rational(366204, 1000000), Rational(366205, 1000000)).contains((a * c).enclosure()));
  CHECK(less_than(a, b) == false);
  CHECK(less_than(b, a) == true);
  CHECK(less_than(c, Scalar(Rational(11, 10))) == true);
  CHECK_FALSE(less_than(Scalar(Enclosure(Rational(0), Rational(2))), Scalar(1)).has_value());
  CHECK_THROWS_AS(decide_less(Scalar(Enclosure(Rational(0), Rational(2))), Scalar(1)), PrecisionError);
  CHECK(min(a, b).rational() == Rational(1, 6));
  CHECK(Scalar(-2).abs().rational() == Rational(2));
  CHECK_THROWS_AS(c.rational(), DomainError);
}
