#include "selfsim/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "selfsim/error.hpp"
#include "selfsim/orbits.hpp"

namespace selfsim {

Rational DyadicCell::lo(int axis) const { return dyadic(k.at(static_cast<std::size_t>(axis)), level); }
Rational DyadicCell::hi(int axis) const { return dyadic(k.at(static_cast<std::size_t>(axis)) + 1, level); }
Rational DyadicCell::side() const { return dyadic(1, level); }

bool DyadicCell::contains(const Point& x) const {
  if (x.size() != k.size()) throw InputError("dimension mismatch between point and cell");
  for (int i = 0; i < dim(); ++i) {
    if (x[static_cast<std::size_t>(i)] < lo(i) || x[static_cast<std::size_t>(i)] >= hi(i)) return false;
  }
  return true;
}

Point DyadicCell::magnify(const Point& x) const {
  if (x.size() != k.size()) throw InputError("dimension mismatch between point and cell");
  const Rational scale = side().inverse();
  Point out;
  for (int i = 0; i < dim(); ++i) out.push_back((x[static_cast<std::size_t>(i)] - lo(i)) * scale);
  return out;
}

std::string DyadicCell::str() const {
  std::string s = "[";
  for (int i = 0; i < dim(); ++i) {
    if (i) s += " x [";
    s += lo(i).str() + ", " + hi(i).str() + ")";
  }
  return s;
}

DyadicCell cell_of(const Point& x, int level) {
  if (x.empty() || x.size() > 2) throw InputError("cells are 1- or 2-dimensional");
  if (level < 0) throw InputError("negative level");
  DyadicCell d;
  d.level = level;
  const Rational scale = pow(Rational(2), level);
  for (const auto& c : x) {
    const mpz_class f = (c * scale).floor();
    if (!f.fits_slong_p()) throw InputError("cell index overflow");
    d.k.push_back(f.get_si());
  }
  return d;
}

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw InputError("a measure needs at least one atom");
  const std::size_t d = atoms.front().x.size();
  std::map<Point, Rational> merged;
  Rational total(0);
  for (auto& a : atoms) {
    if (a.x.size() != d || d == 0) throw InputError("atoms of mixed or zero dimension");
    if (a.weight.sign() <= 0) throw InputError("atom weights must be positive");
    total += a.weight;
    merged[a.x] += a.weight;
  }
  if (total != Rational(1)) throw InputError("atom weights sum to " + total.str() + ", not 1");
  for (auto& [x, w] : merged) atoms_.push_back({x, w});
}

AtomicMeasure AtomicMeasure::uniform(const std::vector<Point>& points) {
  if (points.empty()) throw InputError("a measure needs at least one atom");
  const Rational w(1, static_cast<long>(points.size()));
  std::vector<Atom> atoms;
  for (const auto& p : points) atoms.push_back({p, w});
  return AtomicMeasure(std::move(atoms));
}

Rational AtomicMeasure::mass(const DyadicCell& d) const {
  Rational m(0);
  for (const auto& a : atoms_) {
    if (d.contains(a.x)) m += a.weight;
  }
  return m;
}

AtomicMeasure magnify(const AtomicMeasure& mu, const DyadicCell& d) {
  const Rational m = mu.mass(d);
  if (m.is_zero()) throw DomainError("cell " + d.str() + " has zero mass");
  std::vector<Atom> out;
  for (const auto& a : mu.atoms()) {
    if (d.contains(a.x)) out.push_back({d.magnify(a.x), a.weight / m});
  }
  return AtomicMeasure(std::move(out));
}

std::pair<DyadicCell, AtomicMeasure> cp_step(const AtomicMeasure& mu, int level, Rng& rng) {
  std::map<DyadicCell, Rational> cells;
  for (const auto& a : mu.atoms()) {
    for (const auto& c : a.x) {
      if (c.sign() < 0 || c >= Rational(1)) throw DomainError("cp_step needs a measure on [0,1)^d");
    }
    cells[cell_of(a.x, level)] += a.weight;
  }
  // u is an exact dyadic rational, so the comparison below is exact
  const Rational u = Rational::from_double(uniform01(rng));
  Rational acc(0);
  const DyadicCell* pick = &cells.rbegin()->first;
  for (const auto& [cell, w] : cells) {
    acc += w;
    if (u < acc) {
      pick = &cell;
      break;
    }
  }
  return {*pick, magnify(mu, *pick)};
}

Rational project(const Rational& sigma, const Point& p) {
  if (p.size() != 2) throw InputError("projection needs planar points");
  return sigma * p[0] + p[1];
}

std::vector<Rational> project(const Rational& sigma, const std::vector<Point>& points) {
  std::vector<Rational> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(project(sigma, p));
  return out;
}

AtomicMeasure project(const Rational& sigma, const AtomicMeasure& mu) {
  std::vector<Atom> out;
  for (const auto& a : mu.atoms()) out.push_back({Point{project(sigma, a.x)}, a.weight});
  return AtomicMeasure(std::move(out));
}

std::size_t covering_profile(const std::vector<Point>& e, const Point& x, const Rational& R, const Rational& r) {
  if (R.sign() <= 0) throw InputError("outer radius must be positive");
  if (r.sign() <= 0 || r >= Rational(1)) throw InputError("ratio must lie in (0,1)");
  const Rational len = Rational(2) * R * r;
  if (x.size() == 1) {
    std::vector<Rational> in;
    for (const auto& p : e) {
      if (p.size() != 1) throw InputError("dimension mismatch");
      if ((p[0] - x[0]).abs() <= R) in.push_back(p[0]);
    }
    std::sort(in.begin(), in.end());
    std::size_t count = 0;
    std::optional<Rational> end;
    for (const auto& v : in) {
      if (end && v <= *end) continue;
      ++count;
      end = v + len;
    }
    return count;
  }
  if (x.size() != 2) throw InputError("covering profiles are 1- or 2-dimensional");
  std::set<std::pair<mpz_class, mpz_class>> squares;
  for (const auto& p : e) {
    if (p.size() != 2) throw InputError("dimension mismatch");
    if ((p[0] - x[0]).abs() > R || (p[1] - x[1]).abs() > R) continue;
    squares.insert({(p[0] / len).floor(), (p[1] / len).floor()});
  }
  return squares.size();
}

AssouadEstimate assouad_estimate(const std::vector<Point>& e, const std::vector<Rational>& ratios, int outer_levels,
                                 std::size_t max_centers) {
  if (ratios.size() < 2) throw InputError("at least two ratios are needed");
  if (e.empty()) throw InputError("empty point set");
  AssouadEstimate best;
  best.value = -std::numeric_limits<double>::infinity();
  const std::size_t centers = std::min(max_centers, e.size());
  for (std::size_t c = 0; c < centers; ++c) {
    const Point& x = e[c * e.size() / centers];
    for (int j = 0; j < outer_levels; ++j) {
      const Rational R = dyadic(1, j);
      std::vector<CoverRow> rows;
      std::vector<std::pair<double, std::size_t>> profile;
      for (const auto& r : ratios) {
        const std::size_t n = covering_profile(e, x, R, r);
        rows.push_back({r.to_double(), n});
        profile.push_back({r.to_double(), n});
      }
      const double slope = regression_slope(rows);
      if (slope > best.value) {
        best.value = slope;
        best.center = x;
        best.radius = R;
        best.profile = std::move(profile);
      }
    }
  }
  return best;
}

Rational dyadic_discrepancy(const AtomicMeasure& mu, const AtomicMeasure& nu, int levels) {
  if (mu.dim() != nu.dim()) throw InputError("dimension mismatch");
  Rational total(0);
  for (int l = 0; l <= levels; ++l) {
    std::map<DyadicCell, Rational> diff;
    for (const auto& a : mu.atoms()) diff[cell_of(a.x, l)] += a.weight;
    for (const auto& a : nu.atoms()) diff[cell_of(a.x, l)] -= a.weight;
    Rational sum(0);
    for (const auto& [cell, w] : diff) sum += w.abs();
    total += dyadic(1, l) * sum;
  }
  return total;
}

AtomicMeasure cylinder_measure(const IFSystem& ifs, int depth, const std::vector<Rational>& weights) {
  if (!ifs.exact()) throw DomainError("cylinder measures need exact maps");
  std::vector<Rational> p = weights;
  if (p.empty()) p.assign(ifs.size(), Rational(1, static_cast<long>(ifs.size())));
  if (p.size() != ifs.size()) throw InputError("one weight per map is needed");
  std::vector<std::pair<AffineMap1D, Rational>> level{{AffineMap1D::identity(), Rational(1)}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::pair<AffineMap1D, Rational>> next;
    next.reserve(level.size() * ifs.size());
    for (const auto& [phi, w] : level) {
      for (std::size_t i = 0; i < ifs.size(); ++i) next.push_back({phi * ifs[i], w * p[i]});
    }
    level = std::move(next);
  }
  std::vector<Atom> atoms;
  for (const auto& [phi, w] : level) atoms.push_back({Point{phi.apply(Rational(0))}, w});
  return AtomicMeasure(std::move(atoms));
}

}  // namespace selfsim
