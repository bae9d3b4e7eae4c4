#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/ifs.hpp"
#include "selfsim/rational.hpp"

namespace selfsim {

// Closed dyadic square [i, i+1] x [j, j+1] scaled by 2^-level in (a, b) coordinates.
struct DyadicSquare {
  int level = 0;
  std::int64_t i = 0;  // a index
  std::int64_t j = 0;  // b index

  RationalInterval a() const;
  RationalInterval b() const;
  Rational area() const;
  bool contains(const Rational& a, const Rational& b) const;
  // pre-compact: closure disjoint from a = 0
  bool precompact() const { return i > 0 || i + 1 < 0; }
  std::array<DyadicSquare, 4> children() const;
  DyadicSquare parent() const;

  friend bool operator==(const DyadicSquare&, const DyadicSquare&) = default;
  friend auto operator<=>(const DyadicSquare&, const DyadicSquare&) = default;
};

struct ParamRegion {
  std::vector<RationalInterval> a_ranges;  // sign-definite, excluding 0
  RationalInterval b_range;
  Rational rho;
  bool orientation_preserving_only = false;

  bool contains(const Rational& a, const Rational& b) const;
  // Level-0 squares whose union contains the region.
  std::vector<DyadicSquare> roots() const;
};

// |a| in [1/rho, 1], b in hull(Y) = [0, 1]. Both systems must be normalized and
// Y strongly separated.
ParamRegion initial_region(const IFSystem& x, const IFSystem& y, bool orientation_preserving_only = false);

// Human-readable justification of the region, recorded in certificates.
std::string region_justification();

struct PruneResult {
  bool pruned = false;
  Word witness;
  bool endpoint_one = false;  // witness point is phi_ii(1) instead of phi_ii(0)
  int cover_depth = 0;
  std::size_t nodes = 0;  // witness-search nodes used
};

struct PruneOptions {
  int witness_depth = 20;
  int cover_depth = 0;  // 0: choose from the cell size
  std::size_t node_budget = 4096;
  bool both_endpoints = false;  // also try phi_ii(1) as witness points
};

// Cover depth for a cell: the smallest n with beta_max^n <= cell diameter.
int auto_cover_depth(const IFSystem& y, int level, int cap = 60);

class PruneContext;

// Reusable precomputation for prune_cell on a fixed (X, Y).
class Pruner {
 public:
  Pruner(const IFSystem& x, const IFSystem& y);
  ~Pruner();
  Pruner(Pruner&&) noexcept;
  Pruner& operator=(Pruner&&) noexcept;

  PruneResult prune(const DyadicSquare& cell, const PruneOptions& options) const;

 private:
  std::unique_ptr<PruneContext> ctx_;
};

PruneResult prune_cell(const DyadicSquare& cell, const IFSystem& x, const IFSystem& y, const PruneOptions& options);

struct CertificateLeaf {
  enum class Kind { Witness, Norm } kind = Kind::Witness;
  DyadicSquare cell;
  Word word;
  bool endpoint_one = false;
  int cover_depth = 0;

  friend bool operator==(const CertificateLeaf&, const CertificateLeaf&) = default;
};

struct CertifyOptions {
  int max_depth = 30;
  PruneOptions prune;
  std::size_t budget = 4'000'000;  // cells examined
  bool orientation_preserving_only = false;
  int precision = 0;  // recorded replay precision; 0 = default
  int verify_depth = 8;  // for nonempty candidates
};

struct Certificate {
  std::string version;
  std::string digest;  // of the instance header
  std::vector<AffineMap1D> x_maps;
  std::vector<AffineMap1D> y_maps;
  Rational rho;
  bool orientation_preserving_only = false;
  int precision = 0;
  int max_depth = 0;
  int witness_depth = 0;
  std::size_t budget = 0;
  std::string justification;
  std::vector<CertificateLeaf> leaves;  // sorted by cell
};

struct DepthStats {
  int level = 0;
  std::size_t cells = 0;
  std::size_t pruned = 0;
  std::size_t norm = 0;
  std::size_t live = 0;
  Rational live_area;
};

struct CertifyOutcome {
  enum class Tag { Empty, Unknown, NonemptyCandidate } tag = Tag::Unknown;
  std::optional<Certificate> certificate;
  std::vector<DyadicSquare> survivors;
  Rational surviving_area;
  std::vector<CertificateLeaf> excluded;  // every leaf closed so far, sorted by cell
  std::optional<AffineMap1D> candidate;
  int verified_depth = 0;
  std::vector<DepthStats> stats;
  std::string note;
};

std::string to_string(CertifyOutcome::Tag t);

CertifyOutcome certify_empty(const IFSystem& x, const IFSystem& y, const CertifyOptions& options);

struct VerifyResult {
  bool ok = false;
  std::string diagnostic;
  std::size_t leaves_checked = 0;
};

// Independent replay with exact rationals and MPFR enclosures. A precision
// below the recorded one replays at the recorded precision and then widens
// every witness image outward to the lower precision.
VerifyResult verify_certificate(const Certificate& cert, const IFSystem& x, const IFSystem& y, int precision = 0);

// Instance digest over the canonical header fields.
std::string certificate_digest(const Certificate& cert);

enum class EmbeddingStatus { Verified, Refuted, Inconclusive };
std::string to_string(EmbeddingStatus s);

struct EmbeddingCheck {
  AffineMap1D map;
  EmbeddingStatus status = EmbeddingStatus::Inconclusive;
  int depth = 0;                      // verified depth
  std::optional<Rational> witness;    // x in X with f(x) outside Y, for Refuted
  int witness_cover_depth = 0;        // f(x) misses the Y cover at this depth
  std::string origin;
};

// Every depth-d cylinder hull of f(X) lies in one cylinder of the depth-d'
// cover of Y, with d' the largest depth whose Y cylinders are no longer than
// the image cylinders; otherwise a point of X is searched whose image leaves Y.
EmbeddingCheck verify_embedding(const AffineMap1D& f, const IFSystem& x, const IFSystem& y, int depth);

// Candidates psi_jj o g with g the identity or the reflection of [0,1]
// (|jj| <= candidate_depth), plus the given extra maps.
std::vector<EmbeddingCheck> search_embeddings(const IFSystem& x, const IFSystem& y, int candidate_depth,
                                              int verify_depth, const std::vector<AffineMap1D>& extra = {});

// Norm reduction: if |a| < 1/rho, engulf f(hull X) in psi_jj(Y) and
// return (jj, psi_jj^-1 o f). Identity reduction otherwise.
std::pair<Word, AffineMap1D> reduce_embedding(const AffineMap1D& f, const IFSystem& x, const IFSystem& y);

}  // namespace selfsim
