// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "selfsim/arithmetic.hpp"
#include "selfsim/embedding.hpp"
#include "selfsim/measures.hpp"
#include "selfsim/orbits.hpp"
#include "selfsim/renorm.hpp"
#include "selfsim/rng.hpp"

using namespace selfsim;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (failures.size() < 8) failures.push_back(what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

Rational q(long p, long d = 1) { return Rational(p, d); }
Rational pow2(int level) { return Rational(mpz_class(1) << level, mpz_class(1)); }

IFSystem quarter() { return two_map_system(q(1, 4)); }
IFSystem fifth() { return two_map_system(q(1, 5)); }
IFSystem three_map() { return IFSystem({{q(1, 3), q(0)}, {q(1, 4), q(9, 20)}, {q(1, 5), q(4, 5)}}); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Rational apply_word(const IFSystem& ifs, const Word& w, Rational x) {
  for (auto it = w.symbols.rbegin(); it != w.symbols.rend(); ++it) x = ifs[static_cast<std::size_t>(*it)].apply(x);
  return x;
}

// [lo, hi] misses every depth-n cylinder hull of y; plain recursion on (ratio, translation)
bool misses_cover(const IFSystem& y, const Rational& lo, const Rational& hi, int n) {
  std::function<bool(const Rational&, const Rational&, int)> rec = [&](const Rational& r, const Rational& t, int d) {
    const Rational plo = min(t, t + r), phi = max(t, t + r);
    if (hi < plo || phi < lo) return true;
    if (d == n) return false;
    for (const auto& m : y.maps()) {
      if (!rec(r * m.ratio.rational(), r * m.translation.rational() + t, d + 1)) return false;
    }
    return true;
  };
  return rec(Rational(1), Rational(0), 0);
}

struct Box {
  Rational a0, a1, b0, b1;
};

Box closed_box(const DyadicSquare& c) {
  const Rational s = pow2(c.level);
  return {Rational(c.i) / s, Rational(c.i + 1) / s, Rational(c.j) / s, Rational(c.j + 1) / s};
}

bool closure_contains(const DyadicSquare& c, const Rational& a, const Rational& b) {
  const Box x = closed_box(c);
  return x.a0 <= a && a <= x.a1 && x.b0 <= b && b <= x.b1;
}

// every map of the closed cell sends the witness point outside the cover
bool leaf_excludes(const CertificateLeaf& leaf, const IFSystem& x, const IFSystem& y) {
  const Rational p = apply_word(x, leaf.word, Rational(leaf.endpoint_one ? 1 : 0));
  const Box c = closed_box(leaf.cell);
  const Rational v[4] = {c.a0 * p + c.b0, c.a0 * p + c.b1, c.a1 * p + c.b0, c.a1 * p + c.b1};
  Rational lo = v[0], hi = v[0];
  for (const auto& e : v) {
    lo = min(lo, e);
    hi = max(hi, e);
  }
  return misses_cover(y, lo, hi, leaf.cover_depth);
}

// psi_jj o g for |jj| <= depth, g the identity or x -> 1 - x
std::vector<AffineMap1D> cylinder_embeddings(const IFSystem& y, int depth) {
  std::vector<AffineMap1D> out;
  const AffineMap1D reflect{q(-1), q(1)};
  std::vector<AffineMap1D> level{AffineMap1D::identity()};
  for (int d = 0; d <= depth; ++d) {
    for (const auto& psi : level) {
      out.push_back(psi);
      out.push_back(psi * reflect);
    }
    std::vector<AffineMap1D> next;
    for (const auto& psi : level) {
      for (const auto& m : y.maps()) next.push_back(psi * m);
    }
    level = std::move(next);
  }
  return out;
}

bool survives(const CertifyOutcome& out, const Rational& a, const Rational& b) {
  return std::any_of(out.survivors.begin(), out.survivors.end(),
                     [&](const DyadicSquare& s) { return closure_contains(s, a, b); });
}

void check_empty_certificate(Check& c, const std::string& name, const IFSystem& x, const IFSystem& y) {
  CertifyOptions opt;
  opt.max_depth = 30;
  const CertifyOutcome out = certify_empty(x, y, opt);
  c.expect(out.tag == CertifyOutcome::Tag::Empty, name + ": outcome " + to_string(out.tag));
  if (!out.certificate) return;
  const Certificate& cert = *out.certificate;
  c.expect(verify_certificate(cert, x, y).ok, name + ": verify_certificate");
  // independent replay of every leaf
  const Rational inv_rho = compute_rho(y).inverse();
  Rational area(0);
  std::size_t bad = 0;
  for (const auto& leaf : cert.leaves) {
    area += leaf.cell.area();
    if (leaf.kind == CertificateLeaf::Kind::Norm) {
      const Box b = closed_box(leaf.cell);
      if (!(max(b.a0.abs(), b.a1.abs()) < inv_rho)) ++bad;
    } else if (!leaf_excludes(leaf, x, y)) {
      ++bad;
    }
  }
  c.expect(bad == 0, name + ": " + std::to_string(bad) + " leaves fail the independent replay");
  c.expect(area == Rational(2), name + ": leaves do not tile the search region");
  c.note(name + " " + std::to_string(cert.leaves.size()) + " leaves");
}

// ---- criteria ----

Check criterion1() {
  Check c;
  const IFSystem mt = middle_thirds();
  CertifyOptions opt;
  opt.max_depth = 24;
  const CertifyOutcome out = certify_empty(mt, mt, opt);
  c.expect(out.tag != CertifyOutcome::Tag::Empty, "X = Y certified Empty");
  c.expect(!out.certificate, "certificate produced for X = Y");
  c.expect(survives(out, q(1), q(0)), "(1,0) not in the surviving region");
  c.expect(survives(out, q(1, 3), q(0)), "(1/3,0) not in the surviving region");
  // |a| = 1/9 lies below 1/rho: the region keeps it through its norm reduction
  const AffineMap1D small{q(1, 9), q(2, 9)};
  bool small_ok = survives(out, q(1, 9), q(2, 9));
  if (!small_ok) {
    const auto [jj, g] = reduce_embedding(small, mt, mt);
    const bool in_norm_leaf = std::any_of(out.excluded.begin(), out.excluded.end(), [&](const CertificateLeaf& l) {
      return l.kind == CertificateLeaf::Kind::Norm && closure_contains(l.cell, q(1, 9), q(2, 9));
    });
    // psi_jj o g must reproduce the map
    const bool reproduces = compose_word(mt, jj) * g == small;
    small_ok = in_norm_leaf && reproduces && survives(out, g.ratio.rational(), g.translation.rational());
    c.note("(1/9,2/9) kept via reduction to word " + jj.str());
  }
  c.expect(small_ok, "(1/9,2/9) neither survives nor reduces to a survivor");
  std::size_t hits = 0, maps = 0;
  for (const auto& f : cylinder_embeddings(mt, 4)) {
    ++maps;
    for (const auto& leaf : out.excluded) {
      if (leaf.kind == CertificateLeaf::Kind::Witness &&
          closure_contains(leaf.cell, f.ratio.rational(), f.translation.rational())) {
        ++hits;
      }
    }
  }
  c.expect(hits == 0, std::to_string(hits) + " pruned leaves contain a cylinder embedding");
  c.note(std::to_string(maps) + " cylinder embeddings, " + std::to_string(out.excluded.size()) + " leaves, " +
         std::to_string(out.survivors.size()) + " survivors");
  return c;
}

Check criterion2() {
  Check c;
  check_empty_certificate(c, "quarter", middle_thirds(), quarter());
  check_empty_certificate(c, "fifth", middle_thirds(), fifth());
  const double dx = std::log(2.0) / std::log(3.0);
  c.expect(dx > 0.5 && dx > std::log(2.0) / std::log(5.0), "dimension gap");
  return c;
}

Check criterion3() {
  Check c;
  const IFSystem x = three_map();
  c.expect(check_strong_separation(x, 1).status == SeparationStatus::Certified, "strong separation at depth 1");
  c.expect(log_rank({q(1, 3), q(1, 4), q(1, 5)}) == 3, "log rank of X ratios");
  // Moran equation 3^-s + 4^-s + 5^-s = 1 by bisection
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    const double s = (lo + hi) / 2;
    (std::pow(3.0, -s) + std::pow(4.0, -s) + std::pow(5.0, -s) > 1 ? lo : hi) = s;
  }
  const Enclosure dim = similarity_dimension(x);
  c.expect(dim.lo() <= lo + 1e-12 && lo - 1e-12 <= dim.hi(), "similarity dimension disagrees with bisection");
  c.expect(lo > 0.5, "dimension not above 1/2");
  c.note("dim X = " + fmt(lo));
  check_empty_certificate(c, "three-map", x, quarter());
  return c;
}

Check criterion4() {
  Check c;
  const IFSystem x = middle_thirds(), y = two_map_system(q(9, 20));
  const CertifyOutcome out = certify_empty(x, y, {});
  c.expect(!out.stats.empty(), "no per-depth report");
  for (std::size_t k = 0; k < out.stats.size(); ++k) {
    c.expect(out.stats[k].level == static_cast<int>(k), "per-depth rows out of order");
    c.expect(out.stats[k].cells == out.stats[k].pruned + out.stats[k].norm + out.stats[k].live, "row bookkeeping");
    if (k > 0) c.expect(out.stats[k].live_area <= out.stats[k - 1].live_area, "surviving area increased");
  }
  if (out.certificate) c.expect(verify_certificate(*out.certificate, x, y).ok, "certificate does not verify");
  c.note("outcome " + to_string(out.tag) + " after " + std::to_string(out.stats.size()) + " levels");
  return c;
}

Check criterion5() {
  Check c;
  const LogLinear l2 = LogLinear::log_of(q(2)), l3 = LogLinear::log_of(q(3)), l4 = LogLinear::log_of(q(4));
  const auto dep = check_condition_D({l2, l4}, q(1), 6);
  c.expect(!dep.rows.empty() && dep.rows[0].N == 2 && dep.rows[0].status == DioStatus::Violation &&
               dep.rows[0].exact_zero && dep.rows[0].argmin == std::vector<long>{2, -1},
           "{log2, log4}: exact violation (2,-1) at N = 2");

  const int p = default_precision();
  const auto r = check_condition_D({l2, l3}, q(2), 500, p);
  const auto r2 = check_condition_D({l2, l3}, q(2), 500, 2 * p);
  c.expect(r.violations().empty() && r.undecided().empty(), "{log2, log3}: violations or undecided rows");
  c.expect(r.rows.size() == r2.rows.size(), "row count at doubled precision");
  // brute force over the signed box at long double, compared with both runs
  const long double x = std::log(2.0L), y = std::log(3.0L);
  long double best = INFINITY;
  std::size_t row = 0;
  for (long N = 2; N <= 500 && row < r.rows.size(); ++N, ++row) {
    for (long a = 0; a <= N; ++a) {
      for (long b = -N; b <= N; ++b) {
        if ((a == N || std::labs(b) == N) && !(a == 0 && b <= 0)) best = std::min(best, std::fabs(a * x + b * y));
      }
    }
    const double m = static_cast<double>(best);
    if (r.rows[row].status != r2.rows[row].status || std::fabs(m - r2.rows[row].margin.mid()) > 1e-12 ||
        !(best >= std::pow(static_cast<long double>(N), -2.0L))) {
      c.expect(false, "brute force disagrees at N = " + std::to_string(N));
      break;
    }
  }

  const auto d = check_condition_d({Rational(-1) * l3, l2}, q(2), 200);
  c.expect(d.rows.size() == 199 && d.good().size() == 199, "(d) {-log3, log2}: not all N good");
  return c;
}

long det3(const std::vector<long>& a, const std::vector<long>& b, const std::vector<long>& e) {
  return a[0] * (b[1] * e[2] - b[2] * e[1]) - a[1] * (b[0] * e[2] - b[2] * e[0]) + a[2] * (b[0] * e[1] - b[1] * e[0]);
}

Check criterion6() {
  Check c;
  c.expect(log_rank({q(1, 3), q(1, 4), q(1, 5)}) == 3, "rank {1/3,1/4,1/5}");
  c.expect(log_rank({q(1, 2), q(1, 4), q(1, 8)}) == 1, "rank {1/2,1/4,1/8}");
  const SpanWitness w = in_log_span(q(1, 12), {q(1, 2), q(1, 3)});
  c.expect(w.in_span && w.coefficients == std::vector<Rational>{q(2), q(1)}, "span of 1/12");
  c.expect(pow(q(1, 2), 2) * q(1, 3) == q(1, 12), "coefficients reproduce 1/12");

  const IFSystem x = three_map();
  const std::vector<Rational> betas{q(1, 4), q(1, 4)};
  const SubIfs s = build_sub_ifs_auto(x, 0, betas);
  c.expect(s.pairs.size() == 3, "one pair per symbol");
  std::vector<std::vector<long>> counts;
  for (const auto& pair : s.pairs) {
    // counts by direct tally
    std::vector<long> cu(3, 0), cv(3, 0);
    for (int k : pair.u.symbols) ++cu[static_cast<std::size_t>(k)];
    for (int k : pair.v.symbols) ++cv[static_cast<std::size_t>(k)];
    counts.push_back(cu);
    c.expect(cu == cv, "u and v use different symbol counts");
    const AffineMap1D fu = compose_word(x, pair.u), fv = compose_word(x, pair.v);
    c.expect(fu.ratio.rational() == fv.ratio.rational(), "pair ratios differ");
    c.expect(!in_log_span(fu.ratio.rational().abs(), betas).in_span, "pair ratio in the span of Y's ratios");
    const Rational tu = fu.translation.rational() / (Rational(1) - fu.ratio.rational());
    const Rational tv = fv.translation.rational() / (Rational(1) - fv.ratio.rational());
    c.expect(tu != tv, "pair maps coincide");
  }
  if (counts.size() == 3) c.expect(det3(counts[0], counts[1], counts[2]) != 0, "count vectors dependent");
  c.note("sub-IFS at N = " + std::to_string(s.N));
  return c;
}

Check criterion7() {
  Check c;
  const IFSystem mt = middle_thirds();
  const AffineMap1D f{q(1, 3), q(0)};
  const WordSource ones(Word{}, Word::parse("1"));
  const ThetaReport rep = theta_sequence(f, ones, 6, 16, mt, mt);
  c.expect(rep.failures.empty(), "theta_sequence reported failures");
  c.expect(rep.start_level == 6 && rep.rows.size() == 11, "rows for n = 6..16");
  const Rational rho = compute_rho(mt);
  const double floor = (1.0 / 3.0) / (3.0 * rho.to_double() * std::sqrt(std::exp(1.0)));
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const ThetaRow& row = rep.rows[i];
    const std::string at = " at n = " + std::to_string(row.n);
    const Rational tau = apply_word(mt, row.jj, q(0));
    const Rational beta = apply_word(mt, row.jj, q(1)) - tau;
    for (const Rational& t : {q(0), q(1)}) {
      c.expect(row.renormalized.apply(t) == (f.apply(apply_word(mt, row.ii, t)) - tau) / beta, "(a)" + at);
    }
    const Rational phi = (apply_word(mt, row.ii, q(1)) - apply_word(mt, row.ii, q(0))).abs();
    c.expect(row.norm * beta.abs() == f.ratio.rational().abs() * phi, "(b)" + at);
    c.expect(row.renormalized.ratio.rational().abs() == row.norm, "(b) norm" + at);
    if (i > 0) c.expect(row.jj.starts_with(rep.rows[i - 1].jj), "(c)" + at);
    c.expect(row.norm.to_double() >= floor, "(d)" + at);
    if (i > 0) {
      const bool integral = row.theta.exact() && rep.rows[i - 1].theta.exact() &&
                            (row.theta.rational() - rep.rows[i - 1].theta.rational()).is_integer();
      c.expect(integral, "(e)" + at);
    }
    c.expect(verify_embedding(row.renormalized, mt, mt, 10).status == EmbeddingStatus::Verified, "(f)" + at);
  }
  c.note("theta = " + (rep.rows.empty() ? std::string("?") : rep.rows.front().theta.str()));
  return c;
}

Check criterion8() {
  Check c;
  std::vector<double> scales;
  for (int k = 4; k <= 10; ++k) scales.push_back(std::ldexp(1.0, -k));

  const LambdaSet two = make_lambda_set({Scalar(q(2))});
  const auto flat = generate_multirotation(two, Scalar(q(0)), std::vector<int>(1000, 0), 1000);
  std::vector<double> pts;
  for (const auto& t : flat.thetas) pts.push_back(t.approx());
  c.expect(box_dim_estimate(pts, scales).slope == 0, "Lambda = {2} slope not 0");

  const LambdaSet l = lambda_of(Scalar(q(1, 3)), {Scalar(q(1, 2))});
  const std::size_t n = 4096;
  const auto orbit = generate_multirotation(l, Scalar(q(0)), std::vector<int>(n, 0), n);
  // the orbit against n log2/log3 mod 1 in long double
  const long double lam = std::log(2.0L) / std::log(3.0L);
  pts.clear();
  double drift = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const long double v = i * lam - std::floor(i * lam);
    drift = std::max(drift, std::fabs(orbit.thetas[i].approx() - static_cast<double>(v)));
    pts.push_back(static_cast<double>(v));
  }
  c.expect(drift < 1e-9, "orbit disagrees with n log2/log3 mod 1");
  const double slope = box_dim_estimate(pts, scales).slope;
  c.expect(slope >= 0.90 && slope <= 1.00, "log2/log3 orbit slope " + fmt(slope));

  // left endpoints of depth-8 cylinders: sums of 2 d_k 3^-k
  std::vector<Rational> cantor;
  for (long code = 0; code < 256; ++code) {
    Rational v(0);
    for (int k = 0; k < 8; ++k) {
      if ((code >> (7 - k)) & 1) v += Rational(2) * pow(q(1, 3), k + 1);
    }
    cantor.push_back(v);
  }
  std::vector<Rational> tri;
  for (int m = 3; m <= 8; ++m) tri.push_back(pow(q(1, 3), m));
  const double cs = box_dim_estimate(cantor, tri).slope;
  c.expect(cs >= 0.58 && cs <= 0.68, "Cantor slope " + fmt(cs));

  const long N = 200;
  const auto report = check_condition_d({LogLinear::of_constant(q(-1)), l.values[0].enclosure()}, q(2), 2 * N);
  const auto sep_orbit = generate_multirotation(l, Scalar(q(0)), std::vector<int>(N, 0), N);
  std::vector<long> idx;
  for (long i = 1; i <= N; ++i) idx.push_back(i);
  const auto probe = probe_R_conditions(l, sep_orbit, IndexSet::from(idx, N), {1.0 / 8, 1.0 / 64}, report, N);
  c.expect(probe.separation && probe.separation->holds, "separation check did not hold");
  long double best = 1;
  for (long a = 1; a <= N; ++a) {
    for (long b = a + 1; b <= N; ++b) {
      const long double v = (b - a) * lam;
      const long double fr = v - std::floor(v);
      best = std::min(best, std::min(fr, 1 - fr));
    }
  }
  const double sigma = std::max(1.0, static_cast<double>(lam));
  c.expect(best >= std::pow(sigma * N, -2.0), "exhaustive pairwise distance below (sigma N)^-2");
  c.note("slopes " + fmt(slope) + ", " + fmt(cs) + "; min distance " + fmt(static_cast<double>(best)));
  return c;
}

AtomicMeasure random_measure(Rng& rng, int d) {
  const int count = 1 + static_cast<int>(uniform_below(rng, 8));
  std::vector<std::pair<Point, long>> raw;
  long total = 0;
  for (int i = 0; i < count; ++i) {
    Point p;
    for (int k = 0; k < d; ++k) p.push_back(q(static_cast<long>(uniform_below(rng, 1024)), 1024));
    const long w = 1 + static_cast<long>(uniform_below(rng, 5));
    raw.push_back({p, w});
    total += w;
  }
  std::vector<Atom> atoms;
  for (auto& [p, w] : raw) atoms.push_back({p, q(w, total)});
  return AtomicMeasure(std::move(atoms));
}

std::map<Point, Rational> as_map(const AtomicMeasure& mu) {
  std::map<Point, Rational> m;
  for (const auto& a : mu.atoms()) m[a.x] += a.weight;
  return m;
}

// restrict by coordinate comparisons, rescale by 2^n, renormalize
std::map<Point, Rational> oracle_magnify(const AtomicMeasure& mu, int level, const std::vector<long>& k) {
  const Rational side = Rational(1) / pow2(level);
  std::map<Point, Rational> in;
  Rational mass(0);
  for (const auto& a : mu.atoms()) {
    bool inside = true;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const Rational lo = Rational(k[i]) * side;
      if (a.x[i] < lo || !(a.x[i] < lo + side)) inside = false;
    }
    if (!inside) continue;
    Point y;
    for (std::size_t i = 0; i < k.size(); ++i) y.push_back((a.x[i] - Rational(k[i]) * side) * pow2(level));
    in[y] += a.weight;
    mass += a.weight;
  }
  for (auto& [p, w] : in) w /= mass;
  return in;
}

Check criterion9() {
  Check c;
  Rng rng(20240611);
  std::size_t bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + t % 2;
    const auto mu = random_measure(rng, d);
    const auto& anchor = mu.atoms()[uniform_below(rng, mu.size())].x;
    const int level = static_cast<int>(uniform_below(rng, 9));
    const DyadicCell cell = cell_of(anchor, level);
    const auto m = magnify(mu, cell);
    Rational total(0);
    for (const auto& a : m.atoms()) {
      total += a.weight;
      for (const auto& x : a.x) {
        if (x.sign() < 0 || !(x < Rational(1))) ++bad;
      }
    }
    if (total != Rational(1) || as_map(m) != oracle_magnify(mu, level, cell.k)) ++bad;
  }
  c.expect(bad == 0, std::to_string(bad) + " magnify invariant failures");

  Rng rng2(77);
  std::size_t cocycle_bad = 0;
  for (int t = 0; t < 300; ++t) {
    const int d = 1 + t % 2;
    const auto mu = random_measure(rng2, d);
    const auto& anchor = mu.atoms()[uniform_below(rng2, mu.size())].x;
    const int n1 = static_cast<int>(uniform_below(rng2, 5));
    const int n2 = n1 + 1 + static_cast<int>(uniform_below(rng2, 4));
    const DyadicCell d1 = cell_of(anchor, n1), d2 = cell_of(anchor, n2);
    DyadicCell rel;
    rel.level = n2 - n1;
    for (int k = 0; k < d; ++k) {
      const auto i = static_cast<std::size_t>(k);
      rel.k.push_back(d2.k[i] - (d1.k[i] << (n2 - n1)));
    }
    if (as_map(magnify(magnify(mu, d1), rel)) != as_map(magnify(mu, d2))) ++cocycle_bad;
  }
  c.expect(cocycle_bad == 0, std::to_string(cocycle_bad) + " cocycle failures");

  // chi-square with 2 degrees of freedom: mean 2, sd 2, band mean + 4 sd
  const AtomicMeasure nu({{{q(1, 8), q(1, 8)}, q(1, 2)}, {{q(5, 8), q(1, 8)}, q(1, 4)}, {{q(5, 8), q(7, 8)}, q(1, 4)}});
  Rng rng3(12345);
  const int draws = 10000;
  std::map<DyadicCell, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[cp_step(nu, 1, rng3).first];
  double chi2 = 0;
  for (const auto& [cell, n] : counts) {
    const double expect = draws * nu.mass(cell).to_double();
    chi2 += (n - expect) * (n - expect) / expect;
  }
  c.expect(counts.size() == 3, "draws landed outside the support");
  c.expect(chi2 <= 2.0 + 4 * 2.0, "chi-square " + fmt(chi2));
  c.note("chi-square " + fmt(chi2));
  return c;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    double budget_s;
    Check (*run)();
  };
  const Item items[] = {
      {1, "certifier soundness on X = Y", 60, criterion1},
      {2, "Empty for dimension-forced pairs", 600, criterion2},
      {3, "three-map system into the quarter system", 300, criterion3},
      {4, "hard regime reports monotone surviving area", 600, criterion4},
      {5, "Diophantine conditions", 30, criterion5},
      {6, "exact arithmetic and sub-IFS pairs", 60, criterion6},
      {7, "renormalization of the middle-thirds demo", 30, criterion7},
      {8, "multi-rotations and box dimension", 60, criterion8},
      {9, "atomic measures and the CP step", 60, criterion9},
  };
  int failed = 0;
  for (const Item& item : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = item.run();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(secs <= item.budget_s, "runtime " + fmt(secs) + " s over " + fmt(item.budget_s) + " s");
    std::printf("%s %d: %s (%.1f s)", c.ok ? "PASS" : "FAIL", item.id, item.name, secs);
    for (const auto& n : c.notes) std::printf("; %s", n.c_str());
    for (const auto& f : c.failures) std::printf("; %s", f.c_str());
    std::printf("\n");
    std::fflush(stdout);
    if (!c.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
