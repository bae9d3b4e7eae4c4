#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/ifs.hpp"
#include "selfsim/rational.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

using Point = std::vector<Rational>;

// Half-open dyadic cell prod [k_i / 2^level, (k_i + 1) / 2^level).
struct DyadicCell {
  int level = 0;
  std::vector<long> k;

  int dim() const { return static_cast<int>(k.size()); }
  Rational lo(int axis) const;
  Rational hi(int axis) const;
  Rational side() const;
  bool contains(const Point& x) const;
  // The homothety H_D onto [0,1)^d.
  Point magnify(const Point& x) const;
  std::string str() const;

  friend bool operator==(const DyadicCell&, const DyadicCell&) = default;
  friend auto operator<=>(const DyadicCell&, const DyadicCell&) = default;
};

DyadicCell cell_of(const Point& x, int level);

struct Atom {
  Point x;
  Rational weight;
};

// Finitely many distinct atoms with positive weights summing to 1.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  // Merges repeated points, drops nothing, and checks the invariants.
  explicit AtomicMeasure(std::vector<Atom> atoms);
  // Equal weights on the given points (repeats add up).
  static AtomicMeasure uniform(const std::vector<Point>& points);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  int dim() const { return atoms_.empty() ? 0 : static_cast<int>(atoms_.front().x.size()); }
  Rational mass(const DyadicCell& d) const;

 private:
  std::vector<Atom> atoms_;  // sorted by point
};

// mu^D = H_D (mu restricted to D, renormalized).
AtomicMeasure magnify(const AtomicMeasure& mu, const DyadicCell& d);

// One step of the CP chain: D in D_n drawn with probability mu(D).
std::pair<DyadicCell, AtomicMeasure> cp_step(const AtomicMeasure& mu, int level, Rng& rng);

// pi_sigma(u, v) = sigma u + v.
Rational project(const Rational& sigma, const Point& p);
std::vector<Rational> project(const Rational& sigma, const std::vector<Point>& points);
AtomicMeasure project(const Rational& sigma, const AtomicMeasure& mu);

// Covering count of E cap B_R(x) by closed intervals of length 2 R r (exact,
// greedy from the left), or in the plane by grid squares of side 2 R r
// (within a factor 4 of optimal).
std::size_t covering_profile(const std::vector<Point>& e, const Point& x, const Rational& R, const Rational& r);

struct AssouadEstimate {
  double value = 0;  // largest covering slope seen; a finite-scale heuristic
  Point center;
  Rational radius;
  std::vector<std::pair<double, std::size_t>> profile;  // (ratio, count) at the maximizer
};

// Slopes of log cov(B_R(x) cap E, R r) against log(1/r) over the ratios,
// maximized over centers x in E (at most max_centers, evenly spread) and
// dyadic outer radii 2^-j, j = 0..outer_levels-1.
AssouadEstimate assouad_estimate(const std::vector<Point>& e, const std::vector<Rational>& ratios,
                                 int outer_levels = 4, std::size_t max_centers = 64);

// Multiscale dyadic discrepancy sum_l 2^-l sum_{D in D_l} |mu(D) - nu(D)| for
// l = 0..levels; a diagnostic distance, zero iff the measures agree on all
// cells up to that level.
Rational dyadic_discrepancy(const AtomicMeasure& mu, const AtomicMeasure& nu, int levels);

// Depth-m discretization of the natural self-similar measure with the given
// weights (uniform when empty): atoms phi_ii(0), |ii| = m.
AtomicMeasure cylinder_measure(const IFSystem& ifs, int depth, const std::vector<Rational>& weights = {});

}  // namespace selfsim
