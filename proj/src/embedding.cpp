#include "selfsim/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <set>

#include "selfsim/error.hpp"
#include "selfsim/parallel.hpp"

namespace selfsim {

// ---- dyadic squares and the region ----

RationalInterval DyadicSquare::a() const { return {dyadic(i, level), dyadic(i + 1, level)}; }
RationalInterval DyadicSquare::b() const { return {dyadic(j, level), dyadic(j + 1, level)}; }
Rational DyadicSquare::area() const { return dyadic(1, 2 * level); }

bool DyadicSquare::contains(const Rational& pa, const Rational& pb) const {
  return a().contains(pa) && b().contains(pb);
}

std::array<DyadicSquare, 4> DyadicSquare::children() const {
  const int l = level + 1;
  return {DyadicSquare{l, 2 * i, 2 * j}, DyadicSquare{l, 2 * i, 2 * j + 1}, DyadicSquare{l, 2 * i + 1, 2 * j},
          DyadicSquare{l, 2 * i + 1, 2 * j + 1}};
}

DyadicSquare DyadicSquare::parent() const {
  if (level == 0) throw InputError("level-0 square has no parent");
  // floor division for negative indices
  auto half = [](std::int64_t v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); };
  return {level - 1, half(i), half(j)};
}

bool ParamRegion::contains(const Rational& a, const Rational& b) const {
  if (!b_range.contains(b)) return false;
  return std::any_of(a_ranges.begin(), a_ranges.end(), [&](const RationalInterval& r) { return r.contains(a); });
}

std::vector<DyadicSquare> ParamRegion::roots() const {
  std::vector<DyadicSquare> out;
  if (!orientation_preserving_only) out.push_back({0, -1, 0});
  out.push_back({0, 0, 0});
  return out;
}

ParamRegion initial_region(const IFSystem& x, const IFSystem& y, bool orientation_preserving_only) {
  if (!x.normalized() || !y.normalized()) throw InputError("both systems must be normalized to hull [0,1]");
  if (check_strong_separation(x, 12).status != SeparationStatus::Certified) {
    throw DomainError("strong separation of X is not certified");
  }
  if (check_strong_separation(y, 12).status != SeparationStatus::Certified) {
    throw DomainError("strong separation of Y is not certified");
  }
  ParamRegion r;
  r.rho = compute_rho(y);
  const Rational lo = r.rho.inverse();
  if (!orientation_preserving_only) r.a_ranges.push_back({Rational(-1), -lo});
  r.a_ranges.push_back({lo, Rational(1)});
  r.b_range = {Rational(0), Rational(1)};
  r.orientation_preserving_only = orientation_preserving_only;
  return r;
}

std::string region_justification() {
  return "f(x) = a x + b in E(X,Y) gives b = f(0) in Y, so 0 <= b <= 1; diam f(X) <= diam Y gives |a| <= 1; "
         "if |a| < 1/rho, the smallest cylinder psi_jj(Y) containing f(X) has diameter at most rho |a|, "
         "so psi_jj^-1 o f lies in E(X,Y) with 1/rho <= |a'| <= 1; E(X,Y) is empty iff no map with "
         "1/rho <= |a| <= 1 and 0 <= b <= 1 embeds X in Y";
}

int auto_cover_depth(const IFSystem& y, int level, int cap) {
  Rational beta(0);
  for (const auto& m : y.maps()) {
    if (!m.exact()) throw DomainError("cover depth needs exact Y ratios");
    beta = max(beta, m.ratio.rational().abs());
  }
  const Rational side = dyadic(1, level);
  Rational p(1);
  for (int n = 0; n < cap; ++n) {
    if (p <= side) return n;
    p *= beta;
  }
  return cap;
}

// ---- fast pruning kernel: doubles with outward rounding ----

namespace {

struct Iv {
  double lo, hi;
};

inline double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

inline Iv add(Iv x, Iv y) { return {down(x.lo + y.lo), up(x.hi + y.hi)}; }
inline Iv mul(Iv x, Iv y) {
  const double p0 = x.lo * y.lo, p1 = x.lo * y.hi, p2 = x.hi * y.lo, p3 = x.hi * y.hi;
  return {down(std::min(std::min(p0, p1), std::min(p2, p3))), up(std::max(std::max(p0, p1), std::max(p2, p3)))};
}
inline Iv of(const Rational& q) {
  const double d = q.to_double();  // truncated, so within one ulp
  return {down(d), up(d)};
}
// image of [0,1] under x -> alpha x + tau
inline Iv unit_image(Iv alpha, Iv tau) {
  return {down(tau.lo + std::min(0.0, alpha.lo)), up(tau.hi + std::max(0.0, alpha.hi))};
}
inline bool meets(Iv p, Iv q) { return !(p.hi < q.lo || q.hi < p.lo); }

struct MapIv {
  Iv ratio, translation;
};

}  // namespace

class PruneContext {
 public:
  PruneContext(const IFSystem& x, const IFSystem& y) {
    if (!x.exact() || !y.exact()) throw DomainError("the certifier needs exact rational maps");
    for (const auto& m : x.maps()) xs_.push_back({of(m.ratio.rational()), of(m.translation.rational())});
    for (const auto& m : y.maps()) ys_.push_back({of(m.ratio.rational()), of(m.translation.rational())});
    for (int level = 0; level < static_cast<int>(cover_.size()); ++level) cover_[level] = auto_cover_depth(y, level);
  }

  int cover_for(int level) const {
    return level < static_cast<int>(cover_.size()) ? cover_[level] : cover_.back();
  }

  // True when p misses every depth-n cylinder hull of Y.
  bool misses_cover(Iv p, int n) const {
    if (!meets(p, {0.0, 1.0})) return true;
    if (n == 0) return false;
    struct Frame {
      Iv alpha, tau;
      int depth;
    };
    Frame stack[256];
    int top = 0;
    stack[top++] = {{1.0, 1.0}, {0.0, 0.0}, 0};
    while (top > 0) {
      const Frame f = stack[--top];
      for (const auto& m : ys_) {
        const Iv alpha = mul(f.alpha, m.ratio);
        const Iv tau = add(mul(f.alpha, m.translation), f.tau);
        if (!meets(p, unit_image(alpha, tau))) continue;
        if (f.depth + 1 >= n) return false;
        if (top == 256) return false;  // too many overlapping pieces; treat as a hit
        stack[top++] = {alpha, tau, f.depth + 1};
      }
    }
    return true;
  }

  // Depth of the deepest Y cylinder hull (up to n) containing q.
  int containing_depth(Iv q, int n) const {
    Iv alpha{1.0, 1.0}, tau{0.0, 0.0};
    int d = 0;
    while (d < n) {
      bool found = false;
      for (const auto& m : ys_) {
        const Iv a2 = mul(alpha, m.ratio);
        const Iv t2 = add(mul(alpha, m.translation), tau);
        const Iv h = unit_image(a2, t2);
        if (h.lo <= q.lo && q.hi <= h.hi) {
          alpha = a2;
          tau = t2;
          found = true;
          break;
        }
      }
      if (!found) return d;
      ++d;
    }
    return n;
  }

  PruneResult prune(const DyadicSquare& cell, const PruneOptions& options) const {
    PruneResult out;
    const double a0 = std::ldexp(static_cast<double>(cell.i), -cell.level);
    const double a1 = std::ldexp(static_cast<double>(cell.i + 1), -cell.level);
    const double b0 = std::ldexp(static_cast<double>(cell.j), -cell.level);
    const double b1 = std::ldexp(static_cast<double>(cell.j + 1), -cell.level);
    const Iv A{a0, a1}, B{b0, b1};
    const double width = a1 - a0;
    const double amax = std::max(std::abs(a0), std::abs(a1));
    const int n = options.cover_depth > 0 ? options.cover_depth : cover_for(cell.level);
    out.cover_depth = n;

    struct Node {
      Iv alpha, tau;
      int parent;
      int symbol;
      int depth;
    };
    struct Key {
      int dq;
      int depth;
      std::size_t seq;
      bool operator>(const Key& o) const {
        if (dq != o.dq) return dq > o.dq;
        if (depth != o.depth) return depth > o.depth;
        return seq > o.seq;
      }
    };
    std::vector<Node> nodes;
    nodes.push_back({{1.0, 1.0}, {0.0, 0.0}, -1, -1, 0});
    std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
    queue.push({0, 0, 0});

    auto word_of = [&](std::size_t idx) {
      Word w;
      for (int k = static_cast<int>(idx); nodes[k].parent >= 0; k = nodes[k].parent) w.symbols.push_back(nodes[k].symbol);
      std::reverse(w.symbols.begin(), w.symbols.end());
      return w;
    };

    while (!queue.empty() && out.nodes < options.node_budget) {
      const std::size_t idx = queue.top().seq;
      queue.pop();
      ++out.nodes;
      const Node node = nodes[idx];
      if (misses_cover(add(mul(A, node.tau), B), n)) {
        out.pruned = true;
        out.witness = word_of(idx);
        return out;
      }
      if (options.both_endpoints && misses_cover(add(mul(A, add(node.alpha, node.tau)), B), n)) {
        out.pruned = true;
        out.endpoint_one = true;
        out.witness = word_of(idx);
        return out;
      }
      if (node.depth >= options.witness_depth) continue;
      if (!(amax * std::max(std::abs(node.alpha.lo), std::abs(node.alpha.hi)) > width / 2)) continue;
      for (std::size_t k = 0; k < xs_.size(); ++k) {
        const Iv alpha = mul(node.alpha, xs_[k].ratio);
        const Iv tau = add(mul(node.alpha, xs_[k].translation), node.tau);
        const Iv q = add(mul(A, unit_image(alpha, tau)), B);
        const int dq = containing_depth(q, n);
        if (dq >= n) continue;  // every image point stays inside one cover piece
        nodes.push_back({alpha, tau, static_cast<int>(idx), static_cast<int>(k), node.depth + 1});
        queue.push({dq, node.depth + 1, nodes.size() - 1});
      }
    }
    return out;
  }

 private:
  std::vector<MapIv> xs_, ys_;
  std::array<int, 64> cover_{};
};

Pruner::Pruner(const IFSystem& x, const IFSystem& y) : ctx_(std::make_unique<PruneContext>(x, y)) {}
Pruner::~Pruner() = default;
Pruner::Pruner(Pruner&&) noexcept = default;
Pruner& Pruner::operator=(Pruner&&) noexcept = default;

PruneResult Pruner::prune(const DyadicSquare& cell, const PruneOptions& options) const {
  return ctx_->prune(cell, options);
}

PruneResult prune_cell(const DyadicSquare& cell, const IFSystem& x, const IFSystem& y, const PruneOptions& options) {
  return Pruner(x, y).prune(cell, options);
}

// ---- branch and bound ----

std::string to_string(CertifyOutcome::Tag t) {
  switch (t) {
    case CertifyOutcome::Tag::Empty: return "empty";
    case CertifyOutcome::Tag::Unknown: return "unknown";
    case CertifyOutcome::Tag::NonemptyCandidate: return "nonempty-candidate";
  }
  return "unknown";
}

namespace {

bool norm_too_small(const DyadicSquare& cell, const Rational& inv_rho) {
  const RationalInterval a = cell.a();
  return max(a.lo.abs(), a.hi.abs()) < inv_rho;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string maps_text(const std::vector<AffineMap1D>& maps) {
  std::string s;
  for (const auto& m : maps) s += m.ratio.str() + "," + m.translation.str() + ";";
  return s;
}

}  // namespace

std::string certificate_digest(const Certificate& cert) {
  const std::string header = "x=" + maps_text(cert.x_maps) + "|y=" + maps_text(cert.y_maps) + "|rho=" + cert.rho.str() +
                             "|orient=" + (cert.orientation_preserving_only ? "1" : "0") +
                             "|precision=" + std::to_string(cert.precision) +
                             "|max_depth=" + std::to_string(cert.max_depth) +
                             "|witness_depth=" + std::to_string(cert.witness_depth) +
                             "|budget=" + std::to_string(cert.budget);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(header)));
  return buf;
}

CertifyOutcome certify_empty(const IFSystem& x, const IFSystem& y, const CertifyOptions& options) {
  const ParamRegion region = initial_region(x, y, options.orientation_preserving_only);
  const Rational inv_rho = region.rho.inverse();
  const Pruner pruner(x, y);

  struct Classified {
    enum class Kind { Witness, Norm, Live } kind = Kind::Live;
    PruneResult prune;
  };

  CertifyOutcome out;
  std::vector<CertificateLeaf> leaves;
  std::vector<DyadicSquare> frontier = region.roots();
  std::sort(frontier.begin(), frontier.end());
  std::size_t examined = 0;
  bool exhausted = false;

  for (int level = 0; !frontier.empty(); ++level) {
    if (examined + frontier.size() > options.budget) {
      exhausted = true;
      break;
    }
    const auto results = parallel_map<Classified>(frontier.size(), [&](std::size_t k) {
      Classified c;
      if (norm_too_small(frontier[k], inv_rho)) {
        c.kind = Classified::Kind::Norm;
        return c;
      }
      c.prune = pruner.prune(frontier[k], options.prune);
      c.kind = c.prune.pruned ? Classified::Kind::Witness : Classified::Kind::Live;
      return c;
    });
    examined += frontier.size();

    DepthStats st;
    st.level = level;
    st.cells = frontier.size();
    std::vector<DyadicSquare> live;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      const auto& r = results[k];
      if (r.kind == Classified::Kind::Norm) {
        ++st.norm;
        leaves.push_back({CertificateLeaf::Kind::Norm, frontier[k], Word{}, false, 0});
      } else if (r.kind == Classified::Kind::Witness) {
        ++st.pruned;
        leaves.push_back(
            {CertificateLeaf::Kind::Witness, frontier[k], r.prune.witness, r.prune.endpoint_one, r.prune.cover_depth});
      } else {
        live.push_back(frontier[k]);
      }
    }
    st.live = live.size();
    st.live_area = Rational(static_cast<long>(live.size())) * dyadic(1, 2 * level);
    out.stats.push_back(st);

    if (level >= options.max_depth) {
      frontier = std::move(live);
      break;
    }
    frontier.clear();
    for (const auto& c : live) {
      for (const auto& ch : c.children()) frontier.push_back(ch);
    }
    std::sort(frontier.begin(), frontier.end());
  }

  std::sort(leaves.begin(), leaves.end(),
            [](const CertificateLeaf& p, const CertificateLeaf& q) { return p.cell < q.cell; });
  out.excluded = leaves;
  out.survivors = std::move(frontier);
  out.surviving_area = Rational(0);
  for (const auto& s : out.survivors) out.surviving_area += s.area();

  if (out.survivors.empty()) {
    Certificate cert;
    cert.version = SELFSIM_VERSION;
    cert.x_maps = x.maps();
    cert.y_maps = y.maps();
    cert.rho = region.rho;
    cert.orientation_preserving_only = options.orientation_preserving_only;
    cert.precision = options.precision > 0 ? options.precision : default_precision();
    cert.max_depth = options.max_depth;
    cert.witness_depth = options.prune.witness_depth;
    cert.budget = options.budget;
    cert.justification = region_justification();
    cert.leaves = std::move(leaves);
    cert.digest = certificate_digest(cert);
    const VerifyResult check = verify_certificate(cert, x, y);
    if (check.ok) {
      out.tag = CertifyOutcome::Tag::Empty;
      out.certificate = std::move(cert);
    } else {
      out.tag = CertifyOutcome::Tag::Unknown;
      out.note = "all cells pruned but replay failed: " + check.diagnostic;
    }
    return out;
  }

  if (exhausted) out.note = "cell budget exhausted at level " + std::to_string(out.survivors.front().level);

  const std::size_t probes = std::min<std::size_t>(out.survivors.size(), 64);
  const auto checks = parallel_map<EmbeddingCheck>(probes, [&](std::size_t k) {
    const std::size_t idx = k * out.survivors.size() / probes;
    const auto& s = out.survivors[idx];
    const RationalInterval a = s.a(), b = s.b();
    AffineMap1D f{(a.lo + a.hi) / Rational(2), (b.lo + b.hi) / Rational(2)};
    return verify_embedding(f, x, y, options.verify_depth);
  });
  for (const auto& c : checks) {
    if (c.status == EmbeddingStatus::Verified) {
      out.tag = CertifyOutcome::Tag::NonemptyCandidate;
      out.candidate = c.map;
      out.verified_depth = c.depth;
      return out;
    }
  }
  out.tag = CertifyOutcome::Tag::Unknown;
  return out;
}

// ---- independent replay ----

namespace {

// Exact descent through the Y cylinder tree: true when [lo, hi] misses every
// depth-n cylinder hull.
bool misses_exact_cover(const IFSystem& y, const RationalInterval& p, int n) {
  struct Frame {
    AffineMap1D map;
    int depth;
  };
  std::vector<Frame> stack{{AffineMap1D::identity(), 0}};
  const RationalInterval unit{Rational(0), Rational(1)};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (!f.map.image(unit).intersects(p)) continue;
    if (f.depth >= n) return false;
    for (const auto& m : y.maps()) stack.push_back({f.map * m, f.depth + 1});
  }
  return true;
}

std::optional<std::string> check_tiling(const Certificate& cert, const std::vector<DyadicSquare>& roots) {
  std::set<DyadicSquare> cells;
  for (const auto& leaf : cert.leaves) {
    if (!cells.insert(leaf.cell).second) return "duplicate leaf at level " + std::to_string(leaf.cell.level);
  }
  std::size_t visited = 0;
  std::vector<DyadicSquare> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    const DyadicSquare c = stack.back();
    stack.pop_back();
    if (cells.count(c)) {
      ++visited;
      continue;
    }
    if (c.level >= cert.max_depth) {
      return "gap: cell (" + std::to_string(c.level) + "," + std::to_string(c.i) + "," + std::to_string(c.j) +
             ") is not covered";
    }
    for (const auto& ch : c.children()) stack.push_back(ch);
  }
  if (visited != cert.leaves.size()) return "overlapping or stray leaves";
  return std::nullopt;
}

}  // namespace

VerifyResult verify_certificate(const Certificate& cert, const IFSystem& x, const IFSystem& y, int precision) {
  VerifyResult out;
  auto fail = [&](std::string why) {
    out.ok = false;
    out.diagnostic = std::move(why);
    return out;
  };
  if (cert.x_maps != x.maps() || cert.y_maps != y.maps()) return fail("certificate is for different systems");
  if (certificate_digest(cert) != cert.digest) return fail("instance digest mismatch");
  if (cert.precision < 2) return fail("recorded precision is invalid");
  if (cert.justification != region_justification()) return fail("region justification does not match");
  ParamRegion region;
  try {
    region = initial_region(x, y, cert.orientation_preserving_only);
  } catch (const Error& e) {
    return fail(std::string("initial region: ") + e.what());
  }
  if (region.rho != cert.rho) return fail("recorded rho " + cert.rho.str() + " differs from " + region.rho.str());
  if (auto bad = check_tiling(cert, region.roots())) return fail(*bad);

  const int replay = std::max(precision > 0 ? precision : cert.precision, cert.precision);
  const int target = precision > 0 ? precision : cert.precision;
  const Rational inv_rho = region.rho.inverse();
  const std::size_t alphabet = x.size();

  const auto problems = parallel_map<std::optional<std::string>>(cert.leaves.size(), [&](std::size_t k)
                                                                    -> std::optional<std::string> {
    const auto& leaf = cert.leaves[k];
    const RationalInterval a = leaf.cell.a(), b = leaf.cell.b();
    if (leaf.kind == CertificateLeaf::Kind::Norm) {
      if (max(a.lo.abs(), a.hi.abs()) < inv_rho) return std::nullopt;
      return "norm leaf " + std::to_string(k) + " reaches |a| >= 1/rho";
    }
    if (static_cast<int>(leaf.word.size()) > cert.witness_depth) return "witness word too long at leaf " + std::to_string(k);
    if (leaf.cover_depth < 0 || leaf.cover_depth > 200) return "bad cover depth at leaf " + std::to_string(k);
    AffineMap1D phi = AffineMap1D::identity();
    for (int s : leaf.word.symbols) {
      if (s < 0 || static_cast<std::size_t>(s) >= alphabet) return "bad symbol at leaf " + std::to_string(k);
      phi = phi * x[static_cast<std::size_t>(s)];
    }
    const Rational point = phi.apply(Rational(leaf.endpoint_one ? 1 : 0));
    Enclosure image = affine(Enclosure(a.lo, a.hi, replay), Enclosure(b.lo, b.hi, replay), Enclosure(point, replay));
    if (target < replay) image = image.rounded_to(target);
    if (!image.bounded()) return "unbounded image at leaf " + std::to_string(k);
    if (!misses_exact_cover(y, {image.lo_exact(), image.hi_exact()}, leaf.cover_depth)) {
      return "witness " + leaf.word.str() + " does not exclude leaf " + std::to_string(k);
    }
    return std::nullopt;
  });
  for (const auto& p : problems) {
    if (p) return fail(*p);
  }
  out.ok = true;
  out.leaves_checked = cert.leaves.size();
  return out;
}

// ---- embedding checks ----

std::string to_string(EmbeddingStatus s) {
  switch (s) {
    case EmbeddingStatus::Verified: return "verified";
    case EmbeddingStatus::Refuted: return "refuted";
    case EmbeddingStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Depth at which v leaves the Y cylinder tree, or nullopt if it is still
// inside a cylinder at depth cap.
std::optional<int> exit_depth(const IFSystem& y, const Rational& v, int cap) {
  const RationalInterval unit{Rational(0), Rational(1)};
  if (!unit.contains(v)) return 0;
  struct Piece {
    RationalInterval image;
    Rational ratio, translation;
  };
  std::vector<Piece> pieces;
  for (const auto& m : y.maps()) pieces.push_back({m.image(unit), m.ratio.rational(), m.translation.rational()});
  // pull v back through the cylinder it lies in instead of composing maps
  Rational w = v;
  for (int d = 1; d <= cap; ++d) {
    const Piece* hit = nullptr;
    for (const auto& p : pieces) {
      if (p.image.contains(w)) {
        hit = &p;
        break;
      }
    }
    if (!hit) return d;
    w = (w - hit->translation) / hit->ratio;
  }
  return std::nullopt;
}

Rational max_abs_ratio(const IFSystem& s) {
  Rational r(0);
  for (const auto& m : s.maps()) r = max(r, m.ratio.rational().abs());
  return r;
}

Rational min_abs_ratio(const IFSystem& s) {
  Rational r = s[0].ratio.rational().abs();
  for (const auto& m : s.maps()) r = min(r, m.ratio.rational().abs());
  return r;
}

}  // namespace

EmbeddingCheck verify_embedding(const AffineMap1D& f, const IFSystem& x, const IFSystem& y, int depth) {
  EmbeddingCheck out;
  out.map = f;
  if (!f.exact() || !x.exact() || !y.exact()) return out;
  if (!x.normalized() || !y.normalized()) throw InputError("embedding checks need normalized systems");
  const Rational a = f.ratio.rational();
  if (a.is_zero()) throw InputError("singular map");
  const RationalInterval unit{Rational(0), Rational(1)};
  constexpr int kExitCap = 64;

  // Refutation: images of the cylinder points phi_ii(0), phi_ii(1), |ii| <= depth.
  std::vector<AffineMap1D> level{AffineMap1D::identity()};
  std::optional<int> best;
  for (int d = 0; d <= depth; ++d) {
    for (const auto& phi : level) {
      for (int e = 0; e <= 1; ++e) {
        const Rational pt = phi.apply(Rational(e));
        if (auto k = exit_depth(y, f.apply(pt), kExitCap); k && (!best || *k < *best)) {
          best = k;
          out.witness = pt;
        }
      }
    }
    if (d == depth) break;
    std::vector<AffineMap1D> next;
    next.reserve(level.size() * x.size());
    for (const auto& phi : level) {
      for (const auto& m : x.maps()) next.push_back(phi * m);
    }
    level = std::move(next);
  }
  if (best) {
    out.status = EmbeddingStatus::Refuted;
    out.witness_cover_depth = *best;
    return out;
  }

  // Containment of every depth-d image cylinder in one Y cylinder of depth d'.
  const Rational bound = a.abs() * pow(min_abs_ratio(x), depth);
  const Rational beta = max_abs_ratio(y);
  int target = 0;
  for (Rational p = beta; p <= bound && target < kExitCap; p *= beta) ++target;
  for (const auto& phi : level) {
    const RationalInterval img = (f * phi).image(unit);
    if (!unit.contains(img)) return out;
    if (static_cast<int>(engulf(y, img, target).size()) < target) return out;
  }
  out.status = EmbeddingStatus::Verified;
  out.depth = depth;
  return out;
}

std::vector<EmbeddingCheck> search_embeddings(const IFSystem& x, const IFSystem& y, int candidate_depth,
                                              int verify_depth, const std::vector<AffineMap1D>& extra) {
  struct Candidate {
    AffineMap1D map;
    std::string origin;
  };
  std::vector<Candidate> candidates;
  const AffineMap1D reflect{Rational(-1), Rational(1)};
  std::vector<std::pair<Word, AffineMap1D>> level{{Word{}, AffineMap1D::identity()}};
  for (int d = 0; d <= candidate_depth; ++d) {
    for (const auto& [jj, psi] : level) {
      const std::string name = jj.empty() ? "identity" : "psi_" + jj.str();
      candidates.push_back({psi, name});
      candidates.push_back({psi * reflect, name + " o reflect"});
    }
    if (d == candidate_depth) break;
    std::vector<std::pair<Word, AffineMap1D>> next;
    for (const auto& [jj, psi] : level) {
      for (std::size_t k = 0; k < y.size(); ++k) next.push_back({jj + Word{{static_cast<int>(k)}}, psi * y[k]});
    }
    level = std::move(next);
  }
  for (std::size_t k = 0; k < extra.size(); ++k) candidates.push_back({extra[k], "extra " + std::to_string(k + 1)});

  return parallel_map<EmbeddingCheck>(candidates.size(), [&](std::size_t k) {
    EmbeddingCheck c = verify_embedding(candidates[k].map, x, y, verify_depth);
    c.origin = candidates[k].origin;
    return c;
  });
}

std::pair<Word, AffineMap1D> reduce_embedding(const AffineMap1D& f, const IFSystem& x, const IFSystem& y) {
  if (!f.exact() || !y.exact()) throw DomainError("reduction needs exact maps");
  if (!x.normalized() || !y.normalized()) throw InputError("reduction needs normalized systems");
  const Rational inv_rho = compute_rho(y).inverse();
  if (f.ratio.rational().abs() >= inv_rho) return {Word{}, f};
  const RationalInterval img = f.image(RationalInterval{Rational(0), Rational(1)});
  if (!RationalInterval{Rational(0), Rational(1)}.contains(img)) throw InputError("f(hull X) leaves hull Y");
  const Word jj = engulf(y, img);
  return {jj, compose_word(y, jj).inverse() * f};
}

}  // namespace selfsim
