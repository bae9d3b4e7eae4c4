#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "selfsim/enclosure.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/rational.hpp"

namespace selfsim {

// Prime factorization of a positive rational: r = prod p^e.
struct LogVector {
  std::map<mpz_class, long> exponents;

  static LogVector of(const Rational& r);
  Rational value() const;
};

// Exact integer matrix rank over Q.
std::size_t rank(const std::vector<std::vector<Rational>>& rows);

// Rank over Q of {log r}; every ratio must lie in (0,1).
std::size_t log_rank(const std::vector<Rational>& ratios);

struct SpanWitness {
  bool in_span = false;
  std::vector<Rational> coefficients;  // log r = sum c_k log basis_k when in_span
};

SpanWitness in_log_span(const Rational& r, const std::vector<Rational>& basis);

// q_0 + sum_p q_p log p with rational q. Because 1 and the logarithms of the
// primes are linearly independent over Q, such a value is zero exactly when
// every coefficient is.
struct LogLinear {
  Rational constant;
  std::map<mpz_class, Rational> logs;

  static LogLinear log_of(const Rational& r);
  static LogLinear of_constant(const Rational& q) { return {q, {}}; }

  bool is_zero() const;
  Enclosure enclosure(int precision = default_precision()) const;
  LogLinear& operator+=(const LogLinear& o);
  friend LogLinear operator*(const Rational& k, const LogLinear& x);
  friend LogLinear operator+(LogLinear a, const LogLinear& b) { return a += b; }
  std::string str() const;
};

// A real number entering a Diophantine scan: exact log-linear form, or an
// opaque enclosure.
using Gamma = std::variant<LogLinear, Enclosure>;

Enclosure gamma_enclosure(const Gamma& g, int precision);
std::string gamma_str(const Gamma& g);

enum class DioKind { MixedSign, Nonnegative };
enum class DioStatus { Pass, Violation, Undecided };

std::string to_string(DioStatus s);

struct DioRow {
  int N = 0;
  // Bounds on min |sum n_i gamma_i| over admissible vectors with max |n_i| <= N.
  Enclosure margin{Rational(0)};
  bool exact_zero = false;  // argmin combination vanishes exactly
  std::vector<long> argmin;  // vector attaining the smallest upper bound
  Enclosure threshold{Rational(0)};  // N^-c
  DioStatus status = DioStatus::Undecided;
};

struct DioReport {
  DioKind kind = DioKind::MixedSign;
  std::vector<Gamma> gammas;
  Rational c;
  int n_max = 0;
  int precision = 0;
  std::vector<DioRow> rows;  // N = 2 .. n_max

  std::vector<int> violations() const;
  std::vector<int> good() const;
  std::vector<int> undecided() const;
  bool all_pass() const;
};

// Exhaustive scan. Condition (D): coefficients in [-N, N], not all zero.
DioReport check_condition_D(const std::vector<Gamma>& gammas, const Rational& c, int n_max,
                            int precision = default_precision());
// Condition (d): coefficients in [0, N], not all zero.
DioReport check_condition_d(const std::vector<Gamma>& gammas, const Rational& c, int n_max,
                            int precision = default_precision());

// Symbol counts of a word over an alphabet of the given size.
std::vector<long> count_vector(const Word& w, std::size_t alphabet);

struct SubIfsPair {
  Word u;
  Word v;
  // When the beta list is not rational both candidates are reported and the
  // caller has to decide which one avoids the span; u/v hold the first.
  std::optional<Word> alternative_u;
  std::optional<Word> alternative_v;
};

struct SubIfs {
  int p = 0, q = 0, r = 0;  // 0-based indices
  int N = 0;
  bool selected_by_span = false;
  std::vector<SubIfsPair> pairs;
};

// Words (pq) i^N r^m and (qp) i^N r^m for every symbol i. Throws InputError
// when the count vectors are dependent for this N.
SubIfs build_sub_ifs(const IFSystem& x, int r, int N, const std::optional<std::vector<Rational>>& betas);
// Smallest N >= 1 (up to n_limit) for which the construction succeeds.
SubIfs build_sub_ifs_auto(const IFSystem& x, int r, const std::optional<std::vector<Rational>>& betas,
                          int n_limit = 256);

}  // namespace selfsim
