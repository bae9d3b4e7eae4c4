#include "selfsim/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selfsim/error.hpp"
#include "selfsim/parallel.hpp"
#include "selfsim/rng.hpp"

namespace selfsim {

namespace {

void check_ratio(const Scalar& r) {
  if (!(less_than(Scalar(0), r) == std::optional<bool>(true)) || !(less_than(r, Scalar(1)) == std::optional<bool>(true))) {
    throw DomainError("ratio " + r.str() + " is not certainly in (0,1)");
  }
}

// distance to the nearest integer, for |x| < 2
Scalar circle_distance(const Scalar& d) {
  if (d.exact()) {
    Rational x = d.rational();
    x -= Rational(x.floor());
    return min(x, Rational(1) - x);
  }
  const Enclosure e = d.enclosure();
  const Rational k(mpz_class(e.lo_exact().floor()));
  const Enclosure x = e - Enclosure(k, e.precision());
  return min(abs(x), abs(Enclosure(Rational(1), e.precision()) - x));
}

}  // namespace

LambdaSet make_lambda_set(std::vector<Scalar> values) {
  if (values.empty()) throw InputError("empty Lambda");
  LambdaSet out;
  out.sigma = Scalar(1);
  for (const auto& v : values) {
    if (!(less_than(Scalar(0), v) == std::optional<bool>(true))) throw DomainError("Lambda values must be positive");
    // keep sigma exact whenever the comparison is decided
    const auto below = less_than(v, out.sigma);
    if (!below) {
      out.sigma = max(out.sigma, v);
    } else if (!*below && !(v == out.sigma)) {
      out.sigma = v;
    }
  }
  out.values = std::move(values);
  return out;
}

LambdaSet lambda_of(const Scalar& alpha, const std::vector<Scalar>& betas, int precision) {
  check_ratio(alpha);
  std::vector<Scalar> values;
  for (const auto& b : betas) {
    check_ratio(b);
    if (alpha.exact() && b.exact()) {
      const SpanWitness w = in_log_span(b.rational(), {alpha.rational()});
      if (w.in_span) {
        values.emplace_back(w.coefficients.front());
        continue;
      }
    }
    values.emplace_back(log(b.enclosure(precision)) / log(alpha.enclosure(precision)));
  }
  return make_lambda_set(std::move(values));
}

std::vector<int> ChoiceRule::expand(std::size_t n, std::size_t alphabet) const {
  std::vector<int> out;
  out.reserve(n);
  auto check = [&](int i) {
    if (i < 0 || static_cast<std::size_t>(i) >= alphabet) throw InputError("choice index out of range");
    return i;
  };
  switch (kind) {
    case Kind::Constant:
      out.assign(n, check(index));
      break;
    case Kind::Periodic:
      if (pattern.empty()) throw InputError("empty periodic pattern");
      for (std::size_t k = 0; k < n; ++k) out.push_back(check(pattern[k % pattern.size()]));
      break;
    case Kind::Random: {
      Rng rng(seed);
      for (std::size_t k = 0; k < n; ++k) out.push_back(static_cast<int>(uniform_below(rng, alphabet)));
      break;
    }
  }
  return out;
}

std::string ChoiceRule::str() const {
  switch (kind) {
    case Kind::Constant: return "constant:" + std::to_string(index + 1);
    case Kind::Periodic: {
      std::string s = "periodic:";
      for (std::size_t k = 0; k < pattern.size(); ++k) s += (k ? "," : "") + std::to_string(pattern[k] + 1);
      return s;
    }
    case Kind::Random: return "random:" + std::to_string(seed);
  }
  return "";
}

MultiRotation generate_multirotation(const LambdaSet& lambda, const Scalar& theta0, const std::vector<int>& choices,
                                     std::size_t N) {
  if (choices.size() < N) throw InputError("need N choices for N steps");
  MultiRotation out;
  out.theta0 = theta0;
  out.choices.assign(choices.begin(), choices.begin() + static_cast<std::ptrdiff_t>(N));
  std::vector<long> counts(lambda.values.size(), 0);
  for (std::size_t n = 0; n <= N; ++n) {
    if (n > 0) {
      const int c = out.choices[n - 1];
      if (c < 0 || static_cast<std::size_t>(c) >= counts.size()) throw InputError("choice index out of range");
      ++counts[static_cast<std::size_t>(c)];
    }
    Scalar sum = theta0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      if (counts[j] != 0) sum = sum + Scalar(Rational(counts[j])) * lambda.values[j];
    }
    mpz_class k = sum.exact() ? sum.rational().floor() : sum.enclosure().lo_exact().floor();
    out.integer_parts.push_back(k);
    out.thetas.push_back(sum - Scalar(Rational(k)));
  }
  return out;
}

std::optional<std::string> validate_multirotation(const MultiRotation& orbit, const LambdaSet& lambda) {
  if (orbit.thetas.size() != orbit.choices.size() + 1 || orbit.integer_parts.size() != orbit.thetas.size()) {
    return "inconsistent orbit lengths";
  }
  for (std::size_t i = 0; i < orbit.thetas.size(); ++i) {
    const Scalar& t = orbit.thetas[i];
    if (t.exact()) {
      if (t.rational().sign() < 0 || t.rational() >= Rational(1)) return "theta_" + std::to_string(i) + " not in [0,1)";
    } else if (t.enclosure().hi() < 0 || t.enclosure().lo() >= 1) {
      return "theta_" + std::to_string(i) + " not in [0,1)";
    }
  }
  for (std::size_t i = 0; i + 1 < orbit.thetas.size(); ++i) {
    const Scalar d = orbit.thetas[i + 1] - orbit.thetas[i] - lambda.values.at(static_cast<std::size_t>(orbit.choices[i]));
    if (d.exact()) {
      if (!d.rational().is_integer()) return "increment " + std::to_string(i) + " is not in Lambda mod 1";
      continue;
    }
    const Enclosure e = d.enclosure();
    const double m = std::round(e.mid());
    if (!(e.width() < 0.5) || !e.contains(Rational::from_double(m))) {
      return "increment " + std::to_string(i) + " is not in Lambda mod 1 within enclosure width";
    }
  }
  return std::nullopt;
}

std::size_t covering_number(std::vector<double> points, double r) {
  std::sort(points.begin(), points.end());
  std::size_t count = 0;
  double end = -std::numeric_limits<double>::infinity();
  for (double x : points) {
    if (x < end) continue;
    ++count;
    end = x + r;
  }
  return count;
}

std::size_t covering_number(std::vector<Rational> points, const Rational& r) {
  std::sort(points.begin(), points.end());
  std::size_t count = 0;
  std::optional<Rational> end;
  for (const auto& x : points) {
    if (end && x < *end) continue;
    ++count;
    end = x + r;
  }
  return count;
}

double regression_slope(const std::vector<CoverRow>& rows) {
  if (rows.size() < 2) throw InputError("a slope needs at least two scales");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& row : rows) {
    const double x = std::log(1.0 / row.scale), y = std::log(static_cast<double>(row.count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  const double den = n * sxx - sx * sx;
  if (den == 0) throw InputError("scales must be distinct");
  return (n * sxy - sx * sy) / den;
}

BoxDimEstimate box_dim_estimate(const std::vector<double>& points, const std::vector<double>& scales) {
  if (points.empty()) throw InputError("empty point set");
  if (scales.size() < 2) throw InputError("at least two scales are needed");
  BoxDimEstimate out;
  for (double r : scales) {
    if (!(r > 0)) throw InputError("scales must be positive");
    out.rows.push_back({r, covering_number(points, r)});
  }
  out.slope = regression_slope(out.rows);
  return out;
}

BoxDimEstimate box_dim_estimate(const std::vector<Rational>& points, const std::vector<Rational>& scales) {
  if (points.empty()) throw InputError("empty point set");
  if (scales.size() < 2) throw InputError("at least two scales are needed");
  BoxDimEstimate out;
  for (const auto& r : scales) {
    if (r.sign() <= 0) throw InputError("scales must be positive");
    out.rows.push_back({r.to_double(), covering_number(points, r)});
  }
  out.slope = regression_slope(out.rows);
  return out;
}

IndexSet IndexSet::from(std::vector<long> members, long horizon) {
  if (horizon < 1) throw InputError("horizon must be positive");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (!members.empty() && (members.front() < 1 || members.back() > horizon)) {
    throw InputError("index set members must lie in [1, horizon]");
  }
  return {std::move(members), horizon};
}

DensityReport density(const IndexSet& u) {
  if (u.horizon < 1) throw InputError("empty horizon");
  DensityReport out;
  out.window_start = std::max<long>(1, u.horizon / 2);
  out.lower = std::numeric_limits<double>::infinity();
  out.upper = -std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  long count = 0;
  for (long n = 1; n <= u.horizon; ++n) {
    while (k < u.members.size() && u.members[k] <= n) {
      ++count;
      ++k;
    }
    if (n < out.window_start) continue;
    const double ratio = static_cast<double>(count) / static_cast<double>(n);
    out.lower = std::min(out.lower, ratio);
    out.upper = std::max(out.upper, ratio);
  }
  out.at_horizon = static_cast<double>(count) / static_cast<double>(u.horizon);
  return out;
}

Enclosure min_pairwise_distance(const MultiRotation& orbit, std::size_t first, std::size_t last, int precision) {
  if (first >= last || last >= orbit.thetas.size()) throw InputError("need at least two orbit points in range");
  const bool exact = std::all_of(orbit.thetas.begin() + static_cast<std::ptrdiff_t>(first),
                                 orbit.thetas.begin() + static_cast<std::ptrdiff_t>(last) + 1,
                                 [](const Scalar& t) { return t.exact(); });
  if (exact) {
    // on the circle the closest pair is adjacent in sorted order
    std::vector<Rational> pts;
    for (std::size_t i = first; i <= last; ++i) pts.push_back(orbit.thetas[i].rational());
    std::sort(pts.begin(), pts.end());
    Rational best = pts.front() + Rational(1) - pts.back();
    for (std::size_t i = 1; i < pts.size(); ++i) best = min(best, pts[i] - pts[i - 1]);
    return Enclosure(best, precision);
  }
  const std::size_t n = last - first + 1;
  auto rows = parallel_map<Enclosure>(n - 1, [&](std::size_t a) {
    std::optional<Enclosure> best;
    for (std::size_t b = a + 1; b < n; ++b) {
      const Scalar d = circle_distance(orbit.thetas[first + b] - orbit.thetas[first + a]);
      const Enclosure e = d.enclosure(precision);
      best = best ? min(*best, e) : e;
    }
    return *best;
  });
  Enclosure best = rows.front();
  for (const auto& e : rows) best = min(best, e);
  return best;
}

RProbe probe_R_conditions(const LambdaSet& lambda, const MultiRotation& orbit, const IndexSet& u,
                          const std::vector<double>& scales, const std::optional<DioReport>& certified, long N) {
  if (!u.members.empty() && static_cast<std::size_t>(u.members.back()) >= orbit.thetas.size()) {
    throw InputError("index set exceeds the orbit length");
  }
  if (u.members.empty()) throw InputError("empty index set");
  RProbe out;
  std::vector<double> pts;
  for (long i : u.members) pts.push_back(orbit.thetas[static_cast<std::size_t>(i)].approx());
  out.restricted = box_dim_estimate(pts, scales);
  if (!certified) return out;

  if (certified->kind != DioKind::Nonnegative || certified->gammas.size() != lambda.values.size() + 1) {
    throw InputError("separation needs a Condition (d) report for {-1} together with Lambda");
  }
  if (N < 2 || static_cast<std::size_t>(N) >= orbit.thetas.size()) throw InputError("separation horizon out of range");
  SeparationCheck sep;
  sep.N = N;
  sep.c = certified->c;
  const Enclosure sn = lambda.sigma.enclosure() * Enclosure(Rational(N));
  sep.N_scanned = static_cast<long>(std::ceil(sn.hi()));
  if (lambda.sigma.exact()) sep.N_scanned = (lambda.sigma.rational() * Rational(N)).ceil().get_si();
  const auto row = std::find_if(certified->rows.begin(), certified->rows.end(),
                                [&](const DioRow& r) { return r.N == sep.N_scanned; });
  if (row == certified->rows.end() || row->status != DioStatus::Pass) {
    throw InputError("Condition (d) is not certified at N = " + std::to_string(sep.N_scanned));
  }
  sep.bound = row->threshold;
  sep.min_distance = min_pairwise_distance(orbit, 1, static_cast<std::size_t>(N), certified->precision);
  sep.holds = certainly_less(sep.bound, sep.min_distance);
  out.separation = sep;
  return out;
}

DeltaEstimate delta_estimate(const LambdaSet& lambda, std::size_t N, const std::vector<double>& scales,
                             std::uint64_t seed, int random_orbits) {
  std::vector<ChoiceRule> rules;
  for (std::size_t j = 0; j < lambda.values.size(); ++j) {
    ChoiceRule c;
    c.index = static_cast<int>(j);
    rules.push_back(c);
  }
  if (lambda.values.size() > 1) {
    ChoiceRule alt;
    alt.kind = ChoiceRule::Kind::Periodic;
    for (std::size_t j = 0; j < lambda.values.size(); ++j) alt.pattern.push_back(static_cast<int>(j));
    rules.push_back(alt);
    for (int r = 0; r < random_orbits; ++r) {
      ChoiceRule rnd;
      rnd.kind = ChoiceRule::Kind::Random;
      rnd.seed = seed + static_cast<std::uint64_t>(r);
      rules.push_back(rnd);
    }
  }
  auto slopes = parallel_map<double>(rules.size(), [&](std::size_t k) {
    const auto orbit = generate_multirotation(lambda, Scalar(0), rules[k].expand(N, lambda.values.size()), N);
    std::vector<double> pts;
    for (const auto& t : orbit.thetas) pts.push_back(t.approx());
    return box_dim_estimate(pts, scales).slope;
  });
  DeltaEstimate out;
  out.value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rules.size(); ++k) {
    out.samples.emplace_back(rules[k].str(), slopes[k]);
    if (slopes[k] < out.value) {
      out.value = slopes[k];
      out.attained_by = rules[k].str();
    }
  }
  return out;
}

}  // namespace selfsim
