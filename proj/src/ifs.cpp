#include "selfsim/ifs.hpp"

#include <algorithm>
#include <set>

#include "selfsim/error.hpp"

namespace selfsim {

namespace {

ScalarInterval ordered(Scalar a, Scalar b) {
  if (a.exact() && b.exact()) {
    if (b.rational() < a.rational()) std::swap(a, b);
    return {a, b};
  }
  // Enclosure endpoints: take the hull of both orders so that each endpoint
  // encloses the true min and max.
  return {min(a, b), max(a, b)};
}

Scalar fixed_point(const AffineMap1D& f) { return f.translation / (Scalar(1) - f.ratio); }

bool certainly(std::optional<bool> b) { return b.has_value() && *b; }

// Exact hull of a rational system with orientation-reversing members. Each
// hull endpoint is the image of an endpoint under some map, so the hull solves
// one of finitely many 2x2 linear systems; it is the smallest invariant solution.
RationalInterval exact_hull_general(const std::vector<AffineMap1D>& maps) {
  std::optional<RationalInterval> best;
  for (const auto& fi : maps) {
    for (const auto& fj : maps) {
      const Rational ai = fi.ratio.rational(), bi = fi.translation.rational();
      const Rational aj = fj.ratio.rational(), bj = fj.translation.rational();
      for (int ei = 0; ei < 2; ++ei) {
        for (int ej = 0; ej < 2; ++ej) {
          // L = ai * (ei ? U : L) + bi,  U = aj * (ej ? U : L) + bj
          const Rational m11 = ei ? Rational(1) : Rational(1) - ai;
          const Rational m12 = ei ? -ai : Rational(0);
          const Rational m21 = ej ? Rational(0) : -aj;
          const Rational m22 = ej ? Rational(1) - aj : Rational(1);
          const Rational det = m11 * m22 - m12 * m21;
          if (det.is_zero()) continue;
          const Rational lo = (bi * m22 - m12 * bj) / det;
          const Rational hi = (m11 * bj - m21 * bi) / det;
          if (hi < lo) continue;
          const RationalInterval cand{lo, hi};
          const bool invariant = std::all_of(maps.begin(), maps.end(),
                                             [&](const AffineMap1D& f) { return cand.contains(f.image(cand)); });
          if (invariant && (!best || cand.length() < best->length())) best = cand;
        }
      }
    }
  }
  if (!best) throw DomainError("could not determine the attractor hull");
  return *best;
}

// Enclosure hull for systems with enclosure coefficients and reversing maps.
// Outer bracket: iterate an invariant interval. Inner bracket: iterate
// enclosures of actual attractor points towards the extremes.
ScalarInterval bracket_hull(const std::vector<AffineMap1D>& maps) {
  const int p = default_precision();
  Enclosure rmax(Rational(0), p), bmax(Rational(0), p);
  for (const auto& f : maps) {
    rmax = max(rmax, abs(f.ratio.enclosure(p)));
    bmax = max(bmax, abs(f.translation.enclosure(p)));
  }
  const Rational R = (bmax / (Enclosure(Rational(1), p) - rmax)).hi_exact();
  Enclosure outer_lo(-R, p), outer_hi(R, p);
  Enclosure inner_lo = fixed_point(maps.front()).enclosure(p);
  Enclosure inner_hi = inner_lo;
  for (int it = 0; it < 4000; ++it) {
    Enclosure next_outer_lo = Enclosure::whole_line(p), next_outer_hi = Enclosure::whole_line(p);
    bool first = true;
    Enclosure next_inner_lo = inner_lo, next_inner_hi = inner_hi;
    for (const auto& f : maps) {
      const Enclosure a = f.ratio.enclosure(p), b = f.translation.enclosure(p);
      const Enclosure img = hull(affine(a, b, outer_lo), affine(a, b, outer_hi));
      if (first) {
        next_outer_lo = img;
        next_outer_hi = img;
        first = false;
      } else {
        next_outer_lo = min(next_outer_lo, img);
        next_outer_hi = max(next_outer_hi, img);
      }
      for (const Enclosure* src : {&inner_lo, &inner_hi}) {
        const Enclosure pt = affine(a, b, *src);
        if (pt.hi() < next_inner_lo.hi()) next_inner_lo = pt;
        if (pt.lo() > next_inner_hi.lo()) next_inner_hi = pt;
      }
    }
    // keep only the lower endpoint of the lower image and the upper of the upper one
    outer_lo = Enclosure(next_outer_lo.lo_exact(), next_outer_lo.lo_exact(), p);
    outer_hi = Enclosure(next_outer_hi.hi_exact(), next_outer_hi.hi_exact(), p);
    const bool settled = next_inner_lo == inner_lo && next_inner_hi == inner_hi;
    inner_lo = next_inner_lo;
    inner_hi = next_inner_hi;
    if (settled && (inner_lo.hi() - outer_lo.lo()) < 1e-15 && (outer_hi.hi() - inner_hi.lo()) < 1e-15) break;
  }
  return {Enclosure(outer_lo.lo_exact(), std::max(outer_lo.lo_exact(), inner_lo.hi_exact()), p),
          Enclosure(std::min(outer_hi.hi_exact(), inner_hi.lo_exact()), outer_hi.hi_exact(), p)};
}

}  // namespace

ScalarInterval AffineMap1D::image(const ScalarInterval& iv) const { return ordered((*this)(iv.lo), (*this)(iv.hi)); }

RationalInterval AffineMap1D::image(const RationalInterval& iv) const {
  Rational lo = apply(iv.lo), hi = apply(iv.hi);
  if (hi < lo) std::swap(lo, hi);
  return {lo, hi};
}

AffineMap1D AffineMap1D::inverse() const {
  if (ratio.sign() == 0) throw DomainError("singular affine map has no inverse");
  const Scalar inv = Scalar(1) / ratio;
  return {inv, -(translation * inv)};
}

std::optional<bool> AffineMap1D::preserving() const {
  const auto s = ratio.sign();
  if (!s) return std::nullopt;
  return *s > 0;
}

AffineMap1D operator*(const AffineMap1D& f, const AffineMap1D& g) {
  return {f.ratio * g.ratio, f.ratio * g.translation + f.translation};
}

Word Word::parse(std::string_view text) {
  Word w;
  if (text.empty()) return w;
  auto symbol = [&](std::string_view s) {
    if (s.empty()) throw InputError("malformed word \"" + std::string(text) + "\"");
    int v = 0;
    for (char c : s) {
      if (c < '0' || c > '9' || v > 100000) throw InputError("malformed word \"" + std::string(text) + "\"");
      v = v * 10 + (c - '0');
    }
    if (v < 1) throw InputError("word symbols are 1-based in \"" + std::string(text) + "\"");
    w.symbols.push_back(v - 1);
  };
  if (text.find('.') != std::string_view::npos) {
    std::size_t start = 0;
    while (true) {
      const auto dot = text.find('.', start);
      symbol(text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
  } else {
    for (std::size_t i = 0; i < text.size(); ++i) symbol(text.substr(i, 1));
  }
  return w;
}

std::string Word::str() const {
  const bool wide = std::any_of(symbols.begin(), symbols.end(), [](int s) { return s >= 9; });
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (wide && i > 0) out += '.';
    out += std::to_string(symbols[i] + 1);
  }
  return out;
}

Word Word::operator+(const Word& other) const {
  Word w = *this;
  w.symbols.insert(w.symbols.end(), other.symbols.begin(), other.symbols.end());
  return w;
}

Word Word::prefix(std::size_t n) const {
  Word w;
  w.symbols.assign(symbols.begin(), symbols.begin() + static_cast<std::ptrdiff_t>(std::min(n, symbols.size())));
  return w;
}

bool Word::starts_with(const Word& other) const {
  return other.size() <= size() && std::equal(other.symbols.begin(), other.symbols.end(), symbols.begin());
}

std::string to_string(SeparationStatus s) {
  switch (s) {
    case SeparationStatus::Certified: return "certified";
    case SeparationStatus::Refuted: return "refuted";
    case SeparationStatus::Unknown: return "unknown";
  }
  return "unknown";
}

IFSystem::IFSystem(std::vector<AffineMap1D> maps) : maps_(std::move(maps)) {
  if (maps_.size() < 2) throw InputError("an IFS needs at least two maps");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const Scalar n = maps_[i].norm();
    if (maps_[i].ratio.sign() == std::optional<int>(0) || !maps_[i].ratio.sign()) {
      throw InputError("map " + std::to_string(i + 1) + " has a ratio that is zero or not separated from zero");
    }
    if (!certainly(less_than(n, Scalar(1)))) {
      throw InputError("map " + std::to_string(i + 1) + " is not a contraction");
    }
  }
  hull_ = attractor_hull(maps_);
}

IFSystem::IFSystem(std::vector<AffineMap1D> maps, ScalarInterval hull, Trusted)
    : maps_(std::move(maps)), hull_(std::move(hull)) {}

bool IFSystem::exact() const {
  return std::all_of(maps_.begin(), maps_.end(), [](const AffineMap1D& f) { return f.exact(); });
}

bool IFSystem::orientation_preserving() const {
  return std::all_of(maps_.begin(), maps_.end(), [](const AffineMap1D& f) { return certainly(f.preserving()); });
}

std::optional<Rational> IFSystem::homogeneous_ratio() const {
  if (!maps_.front().ratio.exact()) return std::nullopt;
  const Rational r = maps_.front().ratio.rational();
  for (const auto& f : maps_) {
    if (!f.ratio.exact() || f.ratio.rational() != r) return std::nullopt;
  }
  return r;
}

bool IFSystem::normalized() const {
  return hull_.exact() && hull_.lo.rational() == Rational(0) && hull_.hi.rational() == Rational(1);
}

AffineMap1D compose_word(const IFSystem& ifs, const Word& w) {
  AffineMap1D f = AffineMap1D::identity();
  for (int s : w.symbols) {
    if (s < 0 || static_cast<std::size_t>(s) >= ifs.size()) {
      throw InputError("word symbol " + std::to_string(s + 1) + " out of range for a " + std::to_string(ifs.size()) +
                       "-map system");
    }
    f = f * ifs[static_cast<std::size_t>(s)];
  }
  return f;
}

ScalarInterval attractor_hull(const std::vector<AffineMap1D>& maps) {
  const bool exact = std::all_of(maps.begin(), maps.end(), [](const AffineMap1D& f) { return f.exact(); });
  const bool preserving =
      std::all_of(maps.begin(), maps.end(), [](const AffineMap1D& f) { return certainly(f.preserving()); });
  if (preserving) {
    Scalar lo = fixed_point(maps.front()), hi = lo;
    for (const auto& f : maps) {
      const Scalar p = fixed_point(f);
      lo = min(lo, p);
      hi = max(hi, p);
    }
    return {lo, hi};
  }
  if (exact) {
    const RationalInterval h = exact_hull_general(maps);
    return {h.lo, h.hi};
  }
  return bracket_hull(maps);
}

IFSystem normalize(const IFSystem& ifs) {
  const ScalarInterval& h = ifs.hull();
  if (ifs.normalized()) return ifs;
  const Scalar width = h.hi - h.lo;
  const auto s = width.sign();
  if (s == std::optional<int>(0)) throw DomainError("trivial self-similar set: all maps share a fixed point");
  if (!s) throw PrecisionError("cannot separate the hull endpoints at the current precision");
  std::vector<AffineMap1D> out;
  out.reserve(ifs.size());
  for (const auto& f : ifs.maps()) {
    // h o f o h^-1 with h(x) = (x - lo) / width
    out.push_back({f.ratio, (f.ratio * h.lo + f.translation - h.lo) / width});
  }
  return IFSystem(std::move(out), ScalarInterval{Rational(0), Rational(1)}, IFSystem::Trusted{});
}

std::vector<ScalarInterval> cylinder_cover(const IFSystem& ifs, int depth) {
  if (depth < 0) throw InputError("cover depth must be nonnegative");
  std::vector<ScalarInterval> level{ifs.hull()};
  for (int d = 0; d < depth; ++d) {
    std::vector<ScalarInterval> next;
    next.reserve(level.size() * ifs.size());
    for (const auto& f : ifs.maps()) {
      for (const auto& iv : level) next.push_back(f.image(iv));
    }
    level = std::move(next);
  }
  return level;
}

std::vector<RationalInterval> exact_cylinder_cover(const IFSystem& ifs, int depth) {
  if (depth < 0) throw InputError("cover depth must be nonnegative");
  std::vector<RationalInterval> level{ifs.exact_hull()};
  for (int d = 0; d < depth; ++d) {
    std::vector<RationalInterval> next;
    next.reserve(level.size() * ifs.size());
    for (const auto& f : ifs.maps()) {
      for (const auto& iv : level) next.push_back(f.image(iv));
    }
    level = std::move(next);
  }
  return level;
}

namespace {

// Exact attractor points of the form phi_i(p), used to refute separation.
std::optional<Rational> common_first_level_point(const IFSystem& ifs) {
  std::vector<Rational> pts{ifs.exact_hull().lo, ifs.exact_hull().hi};
  for (const auto& f : ifs.maps()) {
    pts.push_back(fixed_point(f).rational());
    for (const auto& g : ifs.maps()) pts.push_back(fixed_point(f * g).rational());
  }
  std::vector<std::set<Rational>> images(ifs.size());
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    for (const auto& p : pts) images[i].insert(ifs[i].apply(p));
  }
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    for (std::size_t j = i + 1; j < ifs.size(); ++j) {
      for (const auto& p : images[i]) {
        if (images[j].contains(p)) return p;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Separation check_strong_separation(const IFSystem& ifs, int max_depth) {
  Separation result;
  if (ifs.exact()) {
    if (auto p = common_first_level_point(ifs)) {
      result.status = SeparationStatus::Refuted;
      result.depth = 1;
      result.common_point = *p;
      return result;
    }
  }
  constexpr std::size_t kMaxIntervals = 1u << 20;
  std::size_t count = ifs.size();
  for (int m = 1; m <= max_depth && count <= kMaxIntervals; ++m, count *= ifs.size()) {
    result.depth = m;
    const auto cover = cylinder_cover(ifs, m);
    const std::size_t group_size = cover.size() / ifs.size();
    std::vector<std::size_t> order(cover.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return cover[x].lo.approx() < cover[y].lo.approx();
    });
    // An earlier interval p meets a later q iff p.hi >= q.lo; track the
    // largest hi seen so far per first-level group.
    std::vector<std::optional<Scalar>> max_hi(ifs.size());
    bool disjoint = true;
    for (std::size_t k : order) {
      const std::size_t g = k / group_size;
      for (std::size_t other = 0; other < ifs.size() && disjoint; ++other) {
        if (other == g || !max_hi[other]) continue;
        if (!certainly(less_than(*max_hi[other], cover[k].lo))) disjoint = false;
      }
      if (!disjoint) break;
      max_hi[g] = max_hi[g] ? max(*max_hi[g], cover[k].hi) : cover[k].hi;
    }
    if (disjoint) {
      result.status = SeparationStatus::Certified;
      return result;
    }
  }
  return result;
}

Word engulf(const IFSystem& y, const RationalInterval& z, int depth_cap) {
  if (!y.exact()) throw DomainError("engulf needs exact coefficients");
  const RationalInterval hull = y.exact_hull();
  if (!hull.contains(z)) throw InputError("set to engulf is not inside the hull");
  Word w;
  AffineMap1D cur = AffineMap1D::identity();
  const bool point = z.lo == z.hi;
  while (!point || static_cast<int>(w.size()) < depth_cap) {
    bool descended = false;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const AffineMap1D child = cur * y[j];
      if (child.image(hull).contains(z)) {
        w.symbols.push_back(static_cast<int>(j));
        cur = child;
        descended = true;
        break;
      }
    }
    if (!descended) break;
  }
  return w;
}

Scalar first_level_gap(const IFSystem& ifs) {
  std::vector<ScalarInterval> pieces;
  for (const auto& f : ifs.maps()) pieces.push_back(f.image(ifs.hull()));
  std::sort(pieces.begin(), pieces.end(),
            [](const ScalarInterval& a, const ScalarInterval& b) { return a.lo.approx() < b.lo.approx(); });
  Scalar gap = pieces[1].lo - pieces[0].hi;
  for (std::size_t k = 2; k < pieces.size(); ++k) gap = min(gap, pieces[k].lo - pieces[k - 1].hi);
  return gap;
}

Rational compute_rho(const IFSystem& ifs) {
  const Scalar gap = first_level_gap(ifs);
  if (!certainly(less_than(Scalar(0), gap))) throw DomainError("first-level pieces are not separated by a positive gap");
  const Scalar diam = ifs.hull().hi - ifs.hull().lo;
  if (gap.exact() && diam.exact()) return diam.rational() / gap.rational();
  return diam.enclosure().hi_exact() / gap.enclosure().lo_exact();
}

Enclosure similarity_dimension(const IFSystem& ifs, int precision) {
  std::vector<Enclosure> logs;
  for (const auto& f : ifs.maps()) logs.push_back(log(f.norm().enclosure(precision)));
  auto excess = [&](const Rational& s) {
    Enclosure total(Rational(-1), precision);
    const Enclosure se(s, precision);
    for (const auto& l : logs) total = total + exp(se * l);
    return total;
  };
  Rational lo(0), hi(1);
  while (!excess(hi).certainly_negative()) {
    hi = hi * 2;
    if (hi > Rational(1 << 20)) throw DomainError("similarity dimension is unbounded");
  }
  for (int it = 0; it < precision; ++it) {
    const Rational mid = (lo + hi) / 2;
    const Enclosure v = excess(mid);
    if (v.certainly_positive()) {
      lo = mid;
    } else if (v.certainly_negative()) {
      hi = mid;
    } else {
      break;
    }
  }
  return Enclosure(lo, hi, precision);
}

IFSystem middle_thirds() { return two_map_system(Rational(1, 3)); }

IFSystem two_map_system(const Rational& r) {
  return IFSystem({AffineMap1D{r, Rational(0)}, AffineMap1D{r, Rational(1) - r}});
}

}  // namespace selfsim
