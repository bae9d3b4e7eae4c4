#include "selfsim/renorm.hpp"

#include <algorithm>

#include "selfsim/arithmetic.hpp"
#include "selfsim/error.hpp"
#include "selfsim/orbits.hpp"

namespace selfsim {

namespace {

const Rational& exact_of(const Scalar& s, const char* what) {
  if (!s.exact()) throw DomainError(std::string(what) + " must be exact");
  return s.rational();
}

Rational sup_abs(const RationalInterval& iv) { return max(iv.lo.abs(), iv.hi.abs()); }

Rational inf_abs(const RationalInterval& iv) {
  if (iv.lo.sign() <= 0 && iv.hi.sign() >= 0) return Rational(0);
  return min(iv.lo.abs(), iv.hi.abs());
}

DyadicSquare ancestor(DyadicSquare s, int level) {
  while (s.level > level) s = s.parent();
  return s;
}

Rational homogeneous_alpha(const IFSystem& x) {
  const auto r = x.homogeneous_ratio();
  if (!r) throw DomainError("X must have one common exact ratio");
  return r->abs();
}

bool contains_integer(const Scalar& s) {
  if (s.exact()) return s.rational().is_integer();
  const Enclosure e = s.enclosure();
  return Rational(e.lo_exact().ceil()) <= e.hi_exact();
}

}  // namespace

ParamBox ParamBox::point(const AffineMap1D& f) {
  const Rational& a = exact_of(f.ratio, "map ratio");
  const Rational& b = exact_of(f.translation, "map translation");
  return {{a, a}, {b, b}};
}

DyadicSquare cell_containing(const AffineMap1D& f, int level) {
  if (level < 0) throw InputError("negative level");
  const Rational scale = pow(Rational(2), level);
  const mpz_class i = (exact_of(f.ratio, "map ratio") * scale).floor();
  const mpz_class j = (exact_of(f.translation, "map translation") * scale).floor();
  if (!i.fits_slong_p() || !j.fits_slong_p()) throw InputError("cell index overflow");
  return {level, i.get_si(), j.get_si()};
}

Rational chi_upper(const DyadicSquare& cell, const std::vector<DyadicSquare>* survivors) {
  if (!cell.precompact()) throw DomainError("cell meets a = 0");
  Rational chi;
  if (!survivors) {
    chi = sup_abs(cell.a());
  } else {
    bool any = false;
    for (const auto& s : *survivors) {
      Rational sup;
      if (s.level >= cell.level && ancestor(s, cell.level) == cell) {
        sup = sup_abs(s.a());
      } else if (s.level < cell.level && ancestor(cell, s.level) == s) {
        sup = sup_abs(cell.a());
      } else {
        continue;
      }
      chi = any ? max(chi, sup) : sup;
      any = true;
    }
    if (!any) throw DomainError("empty intersection between the cell and the survivors");
  }
  return min(chi, Rational(1));
}

int choose_k(const Scalar& alpha, int n, const Scalar& chi) {
  if (n < 0) throw InputError("negative level");
  if (!(less_than(Scalar(0), alpha) == std::optional<bool>(true)) ||
      !(less_than(alpha, Scalar(1)) == std::optional<bool>(true))) {
    throw InputError("alpha must lie in (0,1)");
  }
  if (!(less_than(Scalar(0), chi) == std::optional<bool>(true))) throw InputError("chi must be positive");
  const Scalar t = Scalar(dyadic(1, n)) / chi;
  if (decide_less(Scalar(1), t)) throw DomainError("2^-n / chi exceeds 1; refine the level");
  // the intervals [alpha^(k+1), alpha^k) partition (0, 1], so the first k with
  // alpha^k < t is the unique solution
  Scalar p(1);
  for (int k = 0; k < 100000; ++k) {
    if (decide_less(p, t)) return k;
    p = p * alpha;
  }
  throw DomainError("no exponent below the iteration cap");
}

RationalInterval z_hull(const ParamBox& box, const Word& ii, const IFSystem& x) {
  const AffineMap1D phi = compose_word(x, ii);
  if (!phi.exact()) throw DomainError("z_hull needs exact maps");
  const RationalInterval t = phi.image(x.exact_hull());
  const Rational c[4] = {box.a.lo * t.lo, box.a.lo * t.hi, box.a.hi * t.lo, box.a.hi * t.hi};
  const auto [lo, hi] = std::minmax_element(std::begin(c), std::end(c));
  return {*lo + box.b.lo, *hi + box.b.hi};
}

Word choose_jj(const IFSystem& y, const RationalInterval& z, int n, const Rational& rho) {
  if (!y.exact()) throw DomainError("choose_jj needs exact maps");
  if (!y.exact_hull().contains(z)) throw DomainError("Z is not inside hull(Y)");
  const Rational threshold = Rational(3) * rho * dyadic(1, n);
  const Word e = engulf(y, z);
  for (std::size_t l = 0; l <= e.size(); ++l) {
    const Word jj = e.prefix(l);
    if (compose_word(y, jj).ratio.rational().abs() < threshold) return jj;
  }
  throw DomainError("no engulfing word of Z is shorter than " + threshold.str() +
                    " (engulfing depth " + std::to_string(e.size()) + ")");
}

AffineMap1D ParamMap::operator()(const AffineMap1D& f) const {
  const auto [a, b] = (*this)(exact_of(f.ratio, "map ratio"), exact_of(f.translation, "map translation"));
  return {a, b};
}

RenormStep renorm_map(const ParamBox& box, int n, const Word& ii, const Word& jj, const IFSystem& x,
                      const IFSystem& y) {
  if (n < 0) throw InputError("negative level");
  RenormStep s;
  s.n = n;
  s.k = static_cast<int>(ii.size());
  s.ii = ii;
  s.jj = jj;
  s.phi_ii = compose_word(x, ii);
  s.psi_jj = compose_word(y, jj);
  if (!s.phi_ii.exact() || !s.psi_jj.exact()) throw DomainError("renormalization needs exact maps");
  s.chi = min(max(sup_abs(box.a), Rational(0)), Rational(1));
  const Rational& alpha = s.phi_ii.ratio.rational();
  const Rational& sigma = s.phi_ii.translation.rational();
  const Rational& beta = s.psi_jj.ratio.rational();
  const Rational& tau = s.psi_jj.translation.rational();
  s.map = {alpha / beta, sigma / beta, beta.inverse(), -tau / beta};
  s.z = z_hull(box, ii, x);
  s.exploratory = !y.exact_hull().contains(s.z);
  s.z_ratio = s.z.length() / (Rational(3) * dyadic(1, n));
  s.norm_ratio = (alpha / beta).abs();
  s.psi_scale = beta.abs() * pow(Rational(2), n);
  return s;
}

WordSource::WordSource(Word prefix, Word period) : prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty()) throw InputError("a word source needs a nonempty period");
}

int WordSource::symbol(std::size_t i) const {
  if (i < prefix_.size()) return prefix_.symbols[i];
  return period_.symbols[(i - prefix_.size()) % period_.size()];
}

Word WordSource::take(std::size_t n) const {
  Word w;
  w.symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.symbols.push_back(symbol(i));
  return w;
}

std::string WordSource::str() const { return prefix_.str() + "(" + period_.str() + ")"; }

namespace {

// Boxes of the survivors nested with the cell, each clipped to the cell.
std::vector<ParamBox> nested_boxes(const DyadicSquare& cell, const std::vector<DyadicSquare>& survivors) {
  std::vector<ParamBox> out;
  for (const auto& s : survivors) {
    if (s.level >= cell.level && ancestor(s, cell.level) == cell) {
      out.push_back(ParamBox::of(s));
    } else if (s.level < cell.level && ancestor(cell, s.level) == s) {
      out.push_back(ParamBox::of(cell));
    }
  }
  return out;
}

std::optional<RenormStep> step_over(const std::vector<ParamBox>& boxes, int n, const Rational& chi,
                                    const WordSource& source, const IFSystem& x, const IFSystem& y) {
  const int k = choose_k(homogeneous_alpha(x), n, chi);
  const Word ii = source.take(static_cast<std::size_t>(k));
  RationalInterval z = z_hull(boxes.front(), ii, x);
  for (const auto& b : boxes) {
    const RationalInterval zb = z_hull(b, ii, x);
    z = {min(z.lo, zb.lo), max(z.hi, zb.hi)};
  }
  const RationalInterval hy = y.exact_hull();
  const RationalInterval clipped{max(z.lo, hy.lo), min(z.hi, hy.hi)};
  if (clipped.hi < clipped.lo) throw DomainError("Z misses hull(Y); the cell holds no embedding");
  const Rational threshold = Rational(3) * compute_rho(y) * dyadic(1, n);
  const Word e = engulf(y, clipped);
  std::optional<Word> jj;
  for (std::size_t l = 0; l <= e.size() && !jj; ++l) {
    if (compose_word(y, e.prefix(l)).ratio.rational().abs() < threshold) jj = e.prefix(l);
  }
  if (!jj) return std::nullopt;
  RenormStep s = renorm_map(boxes.front(), n, ii, *jj, x, y);
  s.chi = chi;
  s.z = z;
  s.z_ratio = z.length() / (Rational(3) * dyadic(1, n));
  s.exploratory = !(clipped == z);
  return s;
}

Rational boxes_chi(const std::vector<ParamBox>& boxes) {
  Rational chi(0);
  for (const auto& b : boxes) chi = max(chi, sup_abs(b.a));
  return min(chi, Rational(1));
}

}  // namespace

RenormStep renormalize(const DyadicSquare& cell, const WordSource& source, const IFSystem& x, const IFSystem& y,
                       const std::vector<DyadicSquare>* survivors) {
  homogeneous_alpha(x);
  const int n = cell.level;
  const Rational chi = chi_upper(cell, survivors);
  const std::vector<ParamBox> boxes = survivors ? nested_boxes(cell, *survivors) : std::vector{ParamBox::of(cell)};
  if (auto s = step_over(boxes, n, chi, source, x, y)) return *s;
  if (survivors) throw DomainError("no engulfing word of Z below the norm threshold");

  // The hull over the whole cell can straddle a gap of Y because of parameters
  // that are not embeddings. Prune sub-cells and retry over what is left.
  const Pruner pruner(x, y);
  std::vector<DyadicSquare> live{cell};
  for (int extra = 1; extra <= kMaxRefinement; ++extra) {
    std::vector<DyadicSquare> next;
    for (const auto& c : live) {
      for (const auto& child : c.children()) {
        if (!pruner.prune(child, PruneOptions{}).pruned) next.push_back(child);
      }
    }
    if (next.empty()) throw DomainError("every sub-cell is pruned; the cell holds no embedding");
    live = std::move(next);
    std::vector<ParamBox> sub;
    for (const auto& c : live) sub.push_back(ParamBox::of(c));
    if (auto s = step_over(sub, n, boxes_chi(sub), source, x, y)) {
      s->refinement = extra;
      return *s;
    }
  }
  throw DomainError("no engulfing word of Z below the norm threshold after refining the cell");
}

E0Floor e0_floor(const Rational& alpha, const Rational& rho, int precision) {
  if (alpha.sign() <= 0 || alpha >= Rational(1)) throw InputError("alpha must lie in (0,1)");
  if (rho <= Rational(1)) throw InputError("rho must exceed 1");
  E0Floor f{Enclosure(Rational(0)), alpha / (Rational(3) * rho)};
  f.value = Enclosure(f.base, precision) / sqrt(exp(Enclosure(Rational(1), precision)));
  return f;
}

Rational adjusted_floor(const Rational& alpha, const Rational& rho, const DyadicSquare& cell, const Rational& chi) {
  if (chi.sign() <= 0) throw InputError("chi must be positive");
  return alpha * inf_abs(cell.a()) / (Rational(3) * rho * chi);
}

ThetaReport theta_sequence(const AffineMap1D& f, const WordSource& source, int n_start, int n_end, const IFSystem& x,
                           const IFSystem& y) {
  const Rational alpha = homogeneous_alpha(x);
  if (!f.exact()) throw DomainError("theta_sequence needs an exact map");
  if (!y.exact()) throw DomainError("theta_sequence needs an exact Y");
  const EmbeddingCheck check = verify_embedding(f, x, y, 10);
  if (check.status != EmbeddingStatus::Verified) {
    throw DomainError("f is not a verified embedding (" + to_string(check.status) + ")");
  }
  const Rational a_abs = f.ratio.rational().abs();
  const Rational rho = compute_rho(y);

  ThetaReport rep;
  int start = std::max(n_start, 0);
  while (!cell_containing(f, start).precompact()) {
    if (++start > 4096) throw DomainError("no pre-compact level for f");
  }
  rep.start_level = start;

  Rational beta_max(0), beta_min(1);
  for (const auto& m : y.maps()) {
    const Rational b = m.ratio.rational().abs();
    beta_max = max(beta_max, b);
    beta_min = min(beta_min, b);
    rep.lambda.push_back(lambda_of(Scalar(alpha), {Scalar(b)}).values.front());
  }
  {
    int l = 0;
    Rational p(1);
    while (!(p * beta_max <= beta_min / Rational(2))) {
      p *= beta_max;
      ++l;
    }
    rep.extension_bound = l;
  }
  {
    const Rational c = chi_upper(cell_containing(f, start)) / (alpha * a_abs);
    int K = 0;
    while (pow(Rational(2), K) < c) ++K;
    rep.gap_bound = K;
  }
  rep.floor = e0_floor(alpha, rho);

  int run = 0;
  for (int n = start; n <= n_end; ++n) {
    const DyadicSquare cell = cell_containing(f, n);
    const RenormStep s = renormalize(cell, source, x, y);
    ThetaRow row;
    row.n = n;
    row.k = s.k;
    row.ii = s.ii;
    row.jj = s.jj;
    row.chi = s.chi;
    row.renormalized = s.map(f);
    row.norm = row.renormalized.ratio.rational().abs();
    row.z_ratio = s.z_ratio;
    row.exploratory = s.exploratory;
    row.adjusted_floor = adjusted_floor(alpha, rho, cell, s.chi);
    if (row.norm == Rational(1)) {
      row.theta = Rational(0);
    } else if (const SpanWitness w = in_log_span(row.norm, {alpha}); w.in_span) {
      row.theta = w.coefficients.front();
    } else {
      row.theta = log(Enclosure(row.norm)) / log(Enclosure(alpha));
    }

    const std::string at = "n=" + std::to_string(n) + ": ";
    if (!rep.rows.empty()) {
      const ThetaRow& prev = rep.rows.back();
      if (row.jj.starts_with(prev.jj)) {
        row.extension.symbols.assign(row.jj.symbols.begin() + static_cast<std::ptrdiff_t>(prev.jj.size()),
                                     row.jj.symbols.end());
        rep.max_extension = std::max(rep.max_extension, static_cast<int>(row.extension.size()));
        row.increment = row.theta - prev.theta;
        Scalar shifted = *row.increment;
        for (int v : row.extension.symbols) shifted = shifted + rep.lambda[static_cast<std::size_t>(v)];
        if (!contains_integer(shifted)) {
          rep.increments_in_lambda = false;
          rep.failures.push_back(at + "increment plus extension lambdas is not an integer");
        }
      } else {
        rep.jj_nested = false;
        rep.failures.push_back(at + "jj " + row.jj.str() + " does not extend " + prev.jj.str());
        row.increment = row.theta - prev.theta;
      }
      run = row.k == prev.k ? run + 1 : 1;
    } else {
      run = 1;
    }
    rep.max_gap = std::max(rep.max_gap, run);

    if (less_than(Scalar(row.norm), Scalar(rep.floor.value)) != std::optional<bool>(false)) {
      rep.floor_holds = false;
      rep.failures.push_back(at + "norm " + row.norm.str() + " below the E0 floor");
    }
    if (row.norm < row.adjusted_floor) {
      rep.failures.push_back(at + "norm " + row.norm.str() + " below the adjusted floor " + row.adjusted_floor.str());
    }
    rep.rows.push_back(std::move(row));
  }
  if (rep.max_extension > rep.extension_bound) rep.failures.push_back("extension longer than the bound L");
  if (rep.max_gap > rep.gap_bound) rep.failures.push_back("run of equal k longer than the bound K");
  return rep;
}

Decomposition approx_decomposition(const DyadicSquare& cell, const RenormStep& step) {
  if (cell.level != step.n) throw InputError("cell level differs from the step level");
  const Rational& alpha = step.phi_ii.ratio.rational();
  const Rational& sigma = step.phi_ii.translation.rational();
  const Rational& beta = step.psi_jj.ratio.rational();
  const Rational& tau = step.psi_jj.translation.rational();
  const Rational a0 = cell.a().lo, b0 = cell.b().lo;
  const Rational scale = pow(Rational(2), cell.level);
  Decomposition d;
  d.h1 = {alpha / beta, Rational(0)};
  d.h2 = {scale.inverse() / beta, (sigma * a0 + b0 - tau) / beta};
  d.corners_match = true;
  for (const Rational& a : {cell.a().lo, cell.a().hi}) {
    for (const Rational& b : {cell.b().lo, cell.b().hi}) {
      const Rational u = (a - a0) * scale, v = (b - b0) * scale;
      const auto [ma, mb] = step.map(a, b);
      if (d.h1.apply(a) != ma || d.h2.apply(project(sigma, Point{u, v})) != mb) d.corners_match = false;
    }
  }
  d.g1_scale = (sigma / beta).abs();
  d.g2_scale = scale * sigma.abs();
  return d;
}

AtomicMeasure renorm_measure(const AtomicMeasure& mu, const DyadicSquare& cell, const RenormStep& step) {
  if (mu.dim() != 2) throw InputError("renormalized measures live on the parameter plane");
  std::vector<Atom> out;
  for (const auto& atom : mu.atoms()) {
    if (!cell.contains(atom.x[0], atom.x[1])) throw DomainError("atom outside the cell");
    const auto [a, b] = step.map(atom.x[0], atom.x[1]);
    out.push_back({Point{a, b}, atom.weight});
  }
  return AtomicMeasure(std::move(out));
}

}  // namespace selfsim
