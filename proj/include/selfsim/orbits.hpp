#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/arithmetic.hpp"
#include "selfsim/rational.hpp"
#include "selfsim/scalar.hpp"

namespace selfsim {

struct LambdaSet {
  std::vector<Scalar> values;  // log beta_j / log alpha
  Scalar sigma;                // max(1, values)
};

LambdaSet lambda_of(const Scalar& alpha, const std::vector<Scalar>& betas, int precision = default_precision());
LambdaSet make_lambda_set(std::vector<Scalar> values);

// How increments are picked: always index `index`, a repeating pattern, or
// uniformly at random from a recorded seed.
struct ChoiceRule {
  enum class Kind { Constant, Periodic, Random } kind = Kind::Constant;
  int index = 0;
  std::vector<int> pattern;
  std::uint64_t seed = 0;

  std::vector<int> expand(std::size_t n, std::size_t alphabet) const;
  std::string str() const;
};

struct MultiRotation {
  Scalar theta0;
  std::vector<int> choices;          // increment index per step
  std::vector<Scalar> thetas;        // theta_0 .. theta_N, reduced into [0,1)
  std::vector<mpz_class> integer_parts;  // theta0 + sum of increments = integer part + theta
};

// theta_n = theta0 + sum_{k<n} Lambda[choices_k] mod 1 for n = 0..N. The sum is
// formed from symbol counts, so enclosure widths do not accumulate drift.
MultiRotation generate_multirotation(const LambdaSet& lambda, const Scalar& theta0, const std::vector<int>& choices,
                                     std::size_t N);
// Re-checks theta_{i+1} - theta_i - Lambda[choice_i] in Z; returns a diagnostic on failure.
std::optional<std::string> validate_multirotation(const MultiRotation& orbit, const LambdaSet& lambda);

struct CoverRow {
  double scale = 0;
  std::size_t count = 0;
};

struct BoxDimEstimate {
  std::vector<CoverRow> rows;
  double slope = 0;
};

// Minimal number of half-open intervals [x, x + r) covering the points.
std::size_t covering_number(std::vector<double> points, double r);
std::size_t covering_number(std::vector<Rational> points, const Rational& r);

BoxDimEstimate box_dim_estimate(const std::vector<double>& points, const std::vector<double>& scales);
BoxDimEstimate box_dim_estimate(const std::vector<Rational>& points, const std::vector<Rational>& scales);

// Least-squares slope of log count against log(1/scale).
double regression_slope(const std::vector<CoverRow>& rows);

struct IndexSet {
  std::vector<long> members;  // sorted, within [1, horizon]
  long horizon = 0;

  static IndexSet from(std::vector<long> members, long horizon);
};

struct DensityReport {
  double lower = 0;       // min running ratio over the tail window
  double upper = 0;       // max running ratio over the tail window
  double at_horizon = 0;  // |U| / N
  long window_start = 0;
};

// Finite-horizon surrogate for lower/upper density: running ratios
// |U cap [1,n]| / n over the window n in [N/2, N].
DensityReport density(const IndexSet& u);

struct SeparationCheck {
  long N = 0;
  long N_scanned = 0;  // ceil(sigma N), the horizon at which (d) must hold
  Rational c;
  Enclosure bound{Rational(0)};         // N_scanned^-c
  Enclosure min_distance{Rational(0)};  // over pairs among theta_1..theta_N
  bool holds = false;
};

struct RProbe {
  BoxDimEstimate restricted;  // on {theta_i : i in U}
  std::optional<SeparationCheck> separation;
};

// Minimum pairwise distance mod 1 among theta_first..theta_last, enclosed.
Enclosure min_pairwise_distance(const MultiRotation& orbit, std::size_t first, std::size_t last, int precision);

// When `certified` is a Condition (d) report for {-1} + Lambda that is good at
// ceil(sigma N), also checks the separation consequence on theta_1..theta_N.
RProbe probe_R_conditions(const LambdaSet& lambda, const MultiRotation& orbit, const IndexSet& u,
                          const std::vector<double>& scales, const std::optional<DioReport>& certified = std::nullopt,
                          long N = 0);

struct DeltaEstimate {
  double value = 0;  // smallest slope seen; an upper-bound heuristic, not a certified value
  std::string attained_by;
  std::vector<std::pair<std::string, double>> samples;
};

DeltaEstimate delta_estimate(const LambdaSet& lambda, std::size_t N, const std::vector<double>& scales,
                             std::uint64_t seed, int random_orbits = 4);

}  // namespace selfsim
