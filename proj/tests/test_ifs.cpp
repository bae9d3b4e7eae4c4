#include <doctest.h>

#include <random>

#include "selfsim/error.hpp"
#include "selfsim/ifs.hpp"

using namespace selfsim;

namespace {

IFSystem quarter() { return two_map_system(Rational(1, 4)); }

AffineMap1D map(const char* a, const char* b) { return {Rational::parse(a), Rational::parse(b)}; }

Word random_word(std::mt19937_64& rng, std::size_t alphabet, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, static_cast<int>(alphabet) - 1);
  Word w;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) w.symbols.push_back(sym(rng));
  return w;
}

// Oracle: apply the maps of a word right to left to a point.
Rational apply_word(const IFSystem& ifs, const Word& w, Rational x) {
  for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it) x = ifs[static_cast<std::size_t>(*it)].apply(x);
  return x;
}

}  // namespace

TEST_CASE("words round trip through text") {
  CHECK(Word::parse("12").symbols == std::vector<int>{0, 1});
  CHECK(Word::parse("").empty());
  CHECK(Word::parse("3.11.2").symbols == std::vector<int>{2, 10, 1});
  CHECK(Word{{2, 10, 1}}.str() == "3.11.2");
  CHECK(Word{{0, 1, 1}}.str() == "122");
  CHECK_THROWS_AS(Word::parse("1a"), InputError);
  CHECK_THROWS_AS(Word::parse("10"), InputError);
}

TEST_CASE("compose_word") {
  const IFSystem mt = middle_thirds();
  CHECK(compose_word(mt, Word{}) == AffineMap1D::identity());
  CHECK(compose_word(mt, Word::parse("2")) == map("1/3", "2/3"));
  CHECK(compose_word(mt, Word::parse("12")) == map("1/9", "2/9"));
  CHECK_THROWS_AS(compose_word(mt, Word::parse("3")), InputError);

  std::mt19937_64 rng(99);
  const IFSystem three({map("1/3", "0"), map("1/4", "9/20"), map("-1/5", "1")});
  for (int i = 0; i < 500; ++i) {
    const Word u = random_word(rng, 3, 8), v = random_word(rng, 3, 8);
    const AffineMap1D uv = compose_word(three, u + v);
    CHECK(uv == compose_word(three, u) * compose_word(three, v));
    // independent evaluation at two points pins down the affine map
    CHECK(uv.apply(Rational(0)) == apply_word(three, u + v, Rational(0)));
    CHECK(uv.apply(Rational(1)) == apply_word(three, u + v, Rational(1)));
    Rational norm(1);
    for (int s : (u + v).symbols) norm *= three[static_cast<std::size_t>(s)].ratio.rational().abs();
    CHECK(uv.norm().rational() == norm);
  }
  const Word w = Word::parse("1212121");
  CHECK(compose_word(mt, w).ratio.rational() == pow(Rational(1, 3), 7));
}

TEST_CASE("attractor hull") {
  CHECK(middle_thirds().exact_hull() == RationalInterval{Rational(0), Rational(1)});
  const IFSystem s({map("1/4", "0"), map("1/4", "3/8")});
  CHECK(s.exact_hull() == RationalInterval{Rational(0), Rational(1, 2)});
  CHECK(quarter().exact_hull() == RationalInterval{Rational(0), Rational(1)});
}

TEST_CASE("attractor hull with an orientation-reversing map") {
  const IFSystem s({map("-1/3", "1/3"), map("1/3", "2/3")});
  const RationalInterval h = s.exact_hull();
  // Oracle: images of a known attractor point under all words of length 10
  // are attractor points; they stay in the hull and approach its ends.
  const Rational p = s[1].translation.rational() / (Rational(1) - s[1].ratio.rational());
  Rational lo = p, hi = p;
  for (int code = 0; code < (1 << 10); ++code) {
    Word w;
    for (int k = 0; k < 10; ++k) w.symbols.push_back((code >> k) & 1);
    const Rational x = apply_word(s, w, p);
    CHECK(h.contains(x));
    lo = min(lo, x);
    hi = max(hi, x);
  }
  CHECK(lo - h.lo <= pow(Rational(1, 3), 10));
  CHECK(h.hi - hi <= pow(Rational(1, 3), 10));
  for (const auto& f : s.maps()) CHECK(h.contains(f.image(h)));

  // The same system with enclosure coefficients encloses the exact hull.
  const IFSystem e({AffineMap1D{Enclosure(Rational(-1, 3)), Enclosure(Rational(1, 3))},
                    AffineMap1D{Enclosure(Rational(1, 3)), Enclosure(Rational(2, 3))}});
  CHECK(e.hull().lo.enclosure().contains(h.lo));
  CHECK(e.hull().hi.enclosure().contains(h.hi));
  CHECK(e.hull().lo.enclosure().width() < 1e-12);
  CHECK(e.hull().hi.enclosure().width() < 1e-12);
}

TEST_CASE("normalize") {
  const IFSystem mt = middle_thirds();
  CHECK(normalize(mt) == mt);
  const IFSystem s({map("1/4", "0"), map("1/4", "3/8")});
  const IFSystem n = normalize(s);
  CHECK(n == quarter());
  CHECK(n.exact_hull() == RationalInterval{Rational(0), Rational(1)});
  CHECK(normalize(n) == n);
  const IFSystem shifted({map("1/5", "2"), map("-1/2", "7")});
  const IFSystem ns = normalize(shifted);
  CHECK(ns[0].ratio == shifted[0].ratio);
  CHECK(ns[1].ratio == shifted[1].ratio);
  // recomputing the hull from scratch gives [0,1]
  CHECK(IFSystem(ns.maps()).exact_hull() == RationalInterval{Rational(0), Rational(1)});
  CHECK(normalize(ns) == ns);
  CHECK_THROWS_AS(normalize(IFSystem({map("1/2", "0"), map("1/3", "0")})), DomainError);
}

TEST_CASE("strong separation") {
  auto mt = check_strong_separation(middle_thirds(), 8);
  CHECK(mt.status == SeparationStatus::Certified);
  CHECK(mt.depth == 1);
  auto half = check_strong_separation(two_map_system(Rational(1, 2)), 8);
  CHECK(half.status == SeparationStatus::Refuted);
  REQUIRE(half.common_point);
  CHECK(*half.common_point == Rational(1, 2));
  CHECK(check_strong_separation(quarter(), 8).depth == 1);
  // hulls overlap at depth 1 but the depth-2 covers are disjoint
  const IFSystem deep = normalize(IFSystem({map("2/5", "0"), map("1/5", "3/10"), map("2/5", "3/5")}));
  const auto d = check_strong_separation(deep, 8);
  CHECK(d.status != SeparationStatus::Refuted);
}

TEST_CASE("cylinder covers") {
  const IFSystem mt = middle_thirds();
  CHECK(exact_cylinder_cover(mt, 0) == std::vector<RationalInterval>{{Rational(0), Rational(1)}});
  CHECK(exact_cylinder_cover(mt, 1) ==
        std::vector<RationalInterval>{{Rational(0), Rational(1, 3)}, {Rational(2, 3), Rational(1)}});
  const auto c2 = exact_cylinder_cover(mt, 2);
  REQUIRE(c2.size() == 4);
  const Rational starts[] = {Rational(0), Rational(2, 9), Rational(2, 3), Rational(8, 9)};
  for (int k = 0; k < 4; ++k) {
    CHECK(c2[k].lo == starts[k]);
    CHECK(c2[k].length() == Rational(1, 9));
  }
  // refinement, checked for a non-homogeneous system
  const IFSystem three({map("1/3", "0"), map("1/4", "9/20"), map("1/5", "4/5")});
  for (int n = 0; n < 5; ++n) {
    const auto coarse = exact_cylinder_cover(three, n);
    const auto fine = exact_cylinder_cover(three, n + 1);
    for (const auto& iv : fine) {
      int parents = 0;
      for (const auto& p : coarse) parents += p.contains(iv) ? 1 : 0;
      CHECK(parents == 1);
    }
  }
  // the Scalar cover agrees with the exact one
  const auto sc = cylinder_cover(three, 3);
  const auto ec = exact_cylinder_cover(three, 3);
  for (std::size_t k = 0; k < sc.size(); ++k) CHECK(exact_interval(sc[k]) == ec[k]);
}

TEST_CASE("engulf") {
  const IFSystem q = quarter();
  CHECK(engulf(q, {Rational(0), Rational(1, 16)}) == Word::parse("11"));
  CHECK(engulf(q, {Rational(0), Rational(1)}).empty());
  CHECK(engulf(q, {Rational(1, 10), Rational(9, 10)}).empty());
  CHECK(engulf(q, {Rational(0), Rational(0)}, 5).size() == 5);
  CHECK_THROWS_AS(engulf(q, {Rational(-1), Rational(0)}), InputError);
}

TEST_CASE("rho and the engulfing bound") {
  struct Case {
    IFSystem y;
    Rational rho;
  };
  const Case cases[] = {{middle_thirds(), Rational(3)}, {quarter(), Rational(2)}, {two_map_system(Rational(1, 5)), Rational(5, 3)}};
  std::mt19937_64 rng(2024);
  for (const auto& c : cases) {
    CHECK(compute_rho(c.y) == c.rho);
    for (int t = 0; t < 1000; ++t) {
      // two random points of Y: left ends of random depth-14 cylinders
      Word u, v;
      for (int k = 0; k < 14; ++k) {
        u.symbols.push_back(static_cast<int>(rng() % 2));
        v.symbols.push_back(static_cast<int>(rng() % 2));
      }
      Rational x = apply_word(c.y, u, Rational(0)), y = apply_word(c.y, v, Rational(0));
      if (x == y) continue;
      const RationalInterval z{min(x, y), max(x, y)};
      const Word jj = engulf(c.y, z);
      const AffineMap1D psi = compose_word(c.y, jj);
      CHECK(psi.image(c.y.exact_hull()).contains(z));
      for (std::size_t j = 0; j < c.y.size(); ++j) {
        Word longer = jj;
        longer.symbols.push_back(static_cast<int>(j));
        CHECK_FALSE(compose_word(c.y, longer).image(c.y.exact_hull()).contains(z));
      }
      const Rational diam = psi.norm().rational();
      CHECK(diam <= c.rho * z.length());
      // equality only when z spans exactly the gap between two children
      if (diam == c.rho * z.length()) {
        CHECK(z.length() == diam * first_level_gap(c.y).rational());
      }
    }
  }
  CHECK_THROWS_AS(compute_rho(two_map_system(Rational(1, 2))), DomainError);
}

TEST_CASE("similarity dimension") {
  const Enclosure d = similarity_dimension(middle_thirds());
  const Enclosure ratio = log(Enclosure(Rational(2))) / log(Enclosure(Rational(3)));
  CHECK(d.lo() <= ratio.hi());
  CHECK(d.hi() >= ratio.lo());
  CHECK(d.width() < 1e-15);
  CHECK(similarity_dimension(quarter()).contains(Rational(1, 2)));
}
