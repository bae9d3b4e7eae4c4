#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/embedding.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/measures.hpp"
#include "selfsim/scalar.hpp"

namespace selfsim {

// Closed box [a.lo, a.hi] x [b.lo, b.hi] in parameter space; may be degenerate.
struct ParamBox {
  RationalInterval a;
  RationalInterval b;

  static ParamBox of(const DyadicSquare& cell) { return {cell.a(), cell.b()}; }
  static ParamBox point(const AffineMap1D& f);
  bool contains(const Rational& pa, const Rational& pb) const { return a.contains(pa) && b.contains(pb); }
};

// Level-n dyadic cell [i, i+1) x [j, j+1) / 2^n containing f (floor convention).
DyadicSquare cell_containing(const AffineMap1D& f, int level);

// Upper bound for sup |a| over embeddings in the cell: the cell sup of |a|
// clamped to 1, or the sup over the survivors nested with the cell.
Rational chi_upper(const DyadicSquare& cell, const std::vector<DyadicSquare>* survivors = nullptr);

// The k >= 0 with alpha t <= alpha^k < t, t = 2^-n / chi.
int choose_k(const Scalar& alpha, int n, const Scalar& chi);

// Hull of { a t + b : (a, b) in box, t in phi_ii(hull X) }.
RationalInterval z_hull(const ParamBox& box, const Word& ii, const IFSystem& x);

// Shortest jj with |psi_jj| < rho 3 2^-n and z inside psi_jj(hull Y).
Word choose_jj(const IFSystem& y, const RationalInterval& z, int n, const Rational& rho);

// (a, b) -> (aa a, ba a + bb b + b0)
struct ParamMap {
  Rational aa, ba, bb, b0;

  std::pair<Rational, Rational> operator()(const Rational& a, const Rational& b) const {
    return {aa * a, ba * a + bb * b + b0};
  }
  AffineMap1D operator()(const AffineMap1D& f) const;
};

struct RenormStep {
  int n = 0;
  int k = 0;
  Rational chi;
  Word ii, jj;
  AffineMap1D phi_ii, psi_jj;
  RationalInterval z;
  Rational z_ratio;          // diam Z / (3 2^-n); at most 1 on tight cells
  bool exploratory = false;  // Z left hull(Y) and was clipped
  ParamMap map;
  Rational norm_ratio;       // |alpha_ii| / |beta_jj|
  Rational psi_scale;        // |beta_jj| 2^n; in [3 rho beta_min, 3 rho) once jj is nonempty
  int refinement = 0;        // extra levels of pruning used to shrink Z
};

// Sub-cell levels tried by renormalize when the hull over the whole cell
// cannot be engulfed.
inline constexpr int kMaxRefinement = 8;

// The parameter-space map M_{D,ii} for given words.
RenormStep renorm_map(const ParamBox& box, int n, const Word& ii, const Word& jj, const IFSystem& x,
                      const IFSystem& y);

class WordSource {
 public:
  // prefix then period repeated forever; "1" with empty prefix is 111...
  WordSource(Word prefix, Word period);
  int symbol(std::size_t i) const;
  Word take(std::size_t n) const;
  std::string str() const;

 private:
  Word prefix_, period_;
};

// Choice of k, Z and jj on a level-n cell of a homogeneous X, with ii a prefix of
// the given word source. chi and Z come from the survivors nested with the cell
// when given; otherwise from the cell, or from its unpruned sub-cells if the
// hull over the cell straddles a gap of Y.
RenormStep renormalize(const DyadicSquare& cell, const WordSource& ii, const IFSystem& x, const IFSystem& y,
                       const std::vector<DyadicSquare>* survivors = nullptr);

struct E0Floor {
  Enclosure value;  // alpha / (3 rho sqrt e)
  Rational base;    // alpha / (3 rho); the floor before the sqrt(e) slack
};

E0Floor e0_floor(const Rational& alpha, const Rational& rho, int precision = default_precision());

// Floor implied by the surrogate: |M f| >= alpha |a| / (3 rho chi) for f in the
// cell, so alpha a_min / (3 rho chi) with a_min = inf |a| over the cell.
Rational adjusted_floor(const Rational& alpha, const Rational& rho, const DyadicSquare& cell, const Rational& chi);

struct ThetaRow {
  int n = 0;
  int k = 0;
  Word ii, jj;
  Rational chi;
  AffineMap1D renormalized;  // M f
  Rational norm;             // |M f|
  Scalar theta;              // log |M f| / log alpha
  Word extension;            // jj_n minus jj_{n-1}
  std::optional<Scalar> increment;  // theta_n - theta_{n-1}
  Rational adjusted_floor;
  Rational z_ratio;
  bool exploratory = false;
};

struct ThetaReport {
  std::vector<ThetaRow> rows;
  int start_level = 0;
  std::vector<Scalar> lambda;  // log beta_j / log alpha
  bool jj_nested = true;
  // L: largest l with beta_max^l > beta_min / 2. Minimality of jj gives
  // beta_min 3 rho 2^-n <= |psi_jj| < 3 rho 2^-n, so one extension has at most L symbols.
  int extension_bound = 0;
  int max_extension = 0;
  // theta_n - theta_{n-1} + sum lambda over the extension is an integer (exactly,
  // or within enclosure width) at every step
  bool increments_in_lambda = true;
  // K: smallest K with 2^K >= chi_start / (alpha |a|). Along the nested cells
  // 2^-n / chi shrinks by at least that factor over K levels, so no K + 1
  // consecutive levels share one k.
  int gap_bound = 0;
  int max_gap = 0;  // longest run of consecutive levels with equal k
  E0Floor floor{Enclosure(Rational(0)), Rational(0)};
  bool floor_holds = true;
  std::vector<std::string> failures;
};

// Renormalizes f along D_n(f), n = n_start..n_end, with ii_n a prefix of the
// source. The start level is raised until D_n(f) is pre-compact and 2^-n <= chi.
ThetaReport theta_sequence(const AffineMap1D& f, const WordSource& ii, int n_start, int n_end, const IFSystem& x,
                           const IFSystem& y);

struct Decomposition {
  AffineMap1D h1;  // a' = h1(a)
  AffineMap1D h2;  // b' = h2(pi_sigma(H_D(a, b)))
  bool corners_match = false;
  Rational g1_scale;  // |sigma_ii / beta_jj|
  Rational g2_scale;  // 2^n |sigma_ii|
};

// Exact h1, h2 with M(a, b) = (h1(a), h2(pi_{sigma_ii}(H_D(a, b)))) on the cell.
Decomposition approx_decomposition(const DyadicSquare& cell, const RenormStep& step);

// Pushforward of a planar atomic measure on the step's cell through M.
AtomicMeasure renorm_measure(const AtomicMeasure& mu, const DyadicSquare& cell, const RenormStep& step);

}  // namespace selfsim
