#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/rational.hpp"
#include "selfsim/scalar.hpp"

namespace selfsim {

// x -> ratio * x + translation
struct AffineMap1D {
  Scalar ratio = Rational(1);
  Scalar translation = Rational(0);

  static AffineMap1D identity() { return {}; }

  bool exact() const { return ratio.exact() && translation.exact(); }
  Scalar norm() const { return ratio.abs(); }
  Scalar operator()(const Scalar& x) const { return ratio * x + translation; }
  Rational apply(const Rational& x) const { return ratio.rational() * x + translation.rational(); }
  // Image of a closed interval, endpoints reordered for negative ratios.
  ScalarInterval image(const ScalarInterval& iv) const;
  RationalInterval image(const RationalInterval& iv) const;
  AffineMap1D inverse() const;
  // Orientation when it is certain.
  std::optional<bool> preserving() const;

  friend bool operator==(const AffineMap1D&, const AffineMap1D&) = default;
};

// (f * g)(x) = f(g(x))
AffineMap1D operator*(const AffineMap1D& f, const AffineMap1D& g);

// Finite word over a map alphabet. Symbols are stored 0-based; the text form
// is 1-based ("12" = first map then second), dot separated once any symbol
// exceeds 9 ("3.11.2").
struct Word {
  std::vector<int> symbols;

  static Word parse(std::string_view text);
  std::string str() const;
  std::size_t size() const { return symbols.size(); }
  bool empty() const { return symbols.empty(); }
  Word operator+(const Word& other) const;
  Word prefix(std::size_t n) const;
  bool starts_with(const Word& other) const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;
};

enum class SeparationStatus { Certified, Refuted, Unknown };

struct Separation {
  SeparationStatus status = SeparationStatus::Unknown;
  int depth = 0;                       // certifying depth, or the depth examined
  std::optional<Rational> common_point;  // witness for Refuted
};

std::string to_string(SeparationStatus s);

class IFSystem {
 public:
  // Validates contraction and computes the attractor hull.
  explicit IFSystem(std::vector<AffineMap1D> maps);

  const std::vector<AffineMap1D>& maps() const { return maps_; }
  std::size_t size() const { return maps_.size(); }
  const AffineMap1D& operator[](std::size_t i) const { return maps_.at(i); }
  const ScalarInterval& hull() const { return hull_; }
  RationalInterval exact_hull() const { return exact_interval(hull_); }

  bool exact() const;
  bool orientation_preserving() const;
  // Common ratio when every map has the same exact ratio.
  std::optional<Rational> homogeneous_ratio() const;
  bool normalized() const;

  friend bool operator==(const IFSystem& a, const IFSystem& b) { return a.maps_ == b.maps_; }

 private:
  struct Trusted {};
  IFSystem(std::vector<AffineMap1D> maps, ScalarInterval hull, Trusted);
  friend IFSystem normalize(const IFSystem& ifs);

  std::vector<AffineMap1D> maps_;
  ScalarInterval hull_;
};

AffineMap1D compose_word(const IFSystem& ifs, const Word& w);
ScalarInterval attractor_hull(const std::vector<AffineMap1D>& maps);
IFSystem normalize(const IFSystem& ifs);
Separation check_strong_separation(const IFSystem& ifs, int max_depth);
std::vector<ScalarInterval> cylinder_cover(const IFSystem& ifs, int depth);
std::vector<RationalInterval> exact_cylinder_cover(const IFSystem& ifs, int depth);

// Longest word jj with z inside psi_jj(hull Y). Single points stop at depth_cap.
Word engulf(const IFSystem& y, const RationalInterval& z, int depth_cap = 64);
// Minimum distance between distinct first-level cylinder hulls.
Scalar first_level_gap(const IFSystem& ifs);
// Hull diameter over the first-level gap, rounded up to a rational when the
// system is only known through enclosures.
Rational compute_rho(const IFSystem& ifs);

// Similarity dimension: the s with sum |r_i|^s = 1, bracketed by bisection.
Enclosure similarity_dimension(const IFSystem& ifs, int precision = default_precision());

// The Cantor middle-thirds system and the two-map system {rx, rx + 1 - r}.
IFSystem middle_thirds();
IFSystem two_map_system(const Rational& r);

}  // namespace selfsim
