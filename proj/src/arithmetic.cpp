#include "selfsim/arithmetic.hpp"

#include <algorithm>
#include <set>

#include "selfsim/error.hpp"
#include "selfsim/parallel.hpp"

namespace selfsim {

namespace {

void factor_into(mpz_class n, long sign, std::map<mpz_class, long>& out) {
  if (n <= 0) throw DomainError("cannot factor a non-positive integer");
  auto take = [&](const mpz_class& p) {
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      out[p] += sign;
    }
  };
  take(mpz_class(2));
  for (unsigned long d = 3; d <= 1000000 && mpz_class(d) * d <= n; d += 2) take(mpz_class(d));
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) {
      throw DomainError("factorization needs a cofactor beyond trial division: " + n.get_str());
    }
    out[n] += sign;
  }
}

void check_unit_interval(const Rational& r) {
  if (r.sign() <= 0 || r >= Rational(1)) throw DomainError("ratio " + r.str() + " is not in (0,1)");
}

// Row echelon form in place; returns pivot columns.
std::vector<std::size_t> eliminate(std::vector<std::vector<Rational>>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col].is_zero()) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const Rational inv = m[row][col].inverse();
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      const Rational f = m[r][col];
      for (std::size_t k = 0; k < m[r].size(); ++k) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<mpz_class> prime_support(const std::vector<LogVector>& vs) {
  std::set<mpz_class> primes;
  for (const auto& v : vs) {
    for (const auto& [p, e] : v.exponents) {
      if (e != 0) primes.insert(p);
    }
  }
  return {primes.begin(), primes.end()};
}

long exponent_of(const LogVector& v, const mpz_class& p) {
  auto it = v.exponents.find(p);
  return it == v.exponents.end() ? 0 : it->second;
}

}  // namespace

LogVector LogVector::of(const Rational& r) {
  if (r.sign() <= 0) throw DomainError("logarithm of a non-positive rational");
  LogVector v;
  factor_into(r.num(), 1, v.exponents);
  factor_into(r.den(), -1, v.exponents);
  std::erase_if(v.exponents, [](const auto& kv) { return kv.second == 0; });
  return v;
}

Rational LogVector::value() const {
  Rational out(1);
  for (const auto& [p, e] : exponents) out *= pow(Rational(p), e);
  return out;
}

std::size_t rank(const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty()) return 0;
  auto m = rows;
  return eliminate(m, m.front().size()).size();
}

std::size_t log_rank(const std::vector<Rational>& ratios) {
  std::vector<LogVector> vs;
  for (const auto& r : ratios) {
    check_unit_interval(r);
    vs.push_back(LogVector::of(r));
  }
  const auto primes = prime_support(vs);
  std::vector<std::vector<Rational>> rows;
  for (const auto& v : vs) {
    std::vector<Rational> row;
    for (const auto& p : primes) row.emplace_back(exponent_of(v, p));
    rows.push_back(std::move(row));
  }
  return primes.empty() ? 0 : rank(rows);
}

SpanWitness in_log_span(const Rational& r, const std::vector<Rational>& basis) {
  check_unit_interval(r);
  std::vector<LogVector> vs;
  for (const auto& b : basis) {
    check_unit_interval(b);
    vs.push_back(LogVector::of(b));
  }
  const LogVector target = LogVector::of(r);
  auto all = vs;
  all.push_back(target);
  const auto primes = prime_support(all);
  // one equation per prime: sum_k c_k e_p(b_k) = e_p(r)
  const std::size_t n = basis.size();
  std::vector<std::vector<Rational>> m;
  for (const auto& p : primes) {
    std::vector<Rational> row;
    for (const auto& v : vs) row.emplace_back(exponent_of(v, p));
    row.emplace_back(exponent_of(target, p));
    m.push_back(std::move(row));
  }
  const auto pivots = eliminate(m, n);
  SpanWitness w;
  for (std::size_t row = pivots.size(); row < m.size(); ++row) {
    if (!m[row][n].is_zero()) return w;
  }
  w.in_span = true;
  w.coefficients.assign(n, Rational(0));
  for (std::size_t k = 0; k < pivots.size(); ++k) w.coefficients[pivots[k]] = m[k][n];
  return w;
}

LogLinear LogLinear::log_of(const Rational& r) {
  LogLinear out;
  for (const auto& [p, e] : LogVector::of(r).exponents) out.logs[p] = Rational(e);
  return out;
}

bool LogLinear::is_zero() const {
  return constant.is_zero() && std::all_of(logs.begin(), logs.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

Enclosure LogLinear::enclosure(int precision) const {
  Enclosure total(constant, precision);
  for (const auto& [p, q] : logs) {
    if (q.is_zero()) continue;
    total = total + Enclosure(q, precision) * log(Enclosure(Rational(p), precision));
  }
  return total;
}

LogLinear& LogLinear::operator+=(const LogLinear& o) {
  constant += o.constant;
  for (const auto& [p, q] : o.logs) logs[p] += q;
  std::erase_if(logs, [](const auto& kv) { return kv.second.is_zero(); });
  return *this;
}

LogLinear operator*(const Rational& k, const LogLinear& x) {
  LogLinear out;
  if (k.is_zero()) return out;
  out.constant = k * x.constant;
  for (const auto& [p, q] : x.logs) out.logs[p] = k * q;
  return out;
}

std::string LogLinear::str() const {
  std::string out;
  if (!constant.is_zero() || logs.empty()) out = constant.str();
  for (const auto& [p, q] : logs) {
    if (!out.empty()) out += " + ";
    out += (q == Rational(1) ? std::string() : q.str() + "*") + "log(" + p.get_str() + ")";
  }
  return out;
}

Enclosure gamma_enclosure(const Gamma& g, int precision) {
  if (const auto* l = std::get_if<LogLinear>(&g)) return l->enclosure(precision);
  return std::get<Enclosure>(g).rounded_to(std::max(precision, std::get<Enclosure>(g).precision()));
}

std::string gamma_str(const Gamma& g) {
  if (const auto* l = std::get_if<LogLinear>(&g)) return l->str();
  const auto& e = std::get<Enclosure>(g);
  return "[" + e.lo_str() + ", " + e.hi_str() + "]";
}

std::string to_string(DioStatus s) {
  switch (s) {
    case DioStatus::Pass: return "pass";
    case DioStatus::Violation: return "violation";
    case DioStatus::Undecided: return "undecided";
  }
  return "undecided";
}

std::vector<int> DioReport::violations() const {
  std::vector<int> out;
  for (const auto& r : rows) {
    if (r.status == DioStatus::Violation) out.push_back(r.N);
  }
  return out;
}

std::vector<int> DioReport::good() const {
  std::vector<int> out;
  for (const auto& r : rows) {
    if (r.status == DioStatus::Pass) out.push_back(r.N);
  }
  return out;
}

std::vector<int> DioReport::undecided() const {
  std::vector<int> out;
  for (const auto& r : rows) {
    if (r.status == DioStatus::Undecided) out.push_back(r.N);
  }
  return out;
}

bool DioReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const DioRow& r) { return r.status == DioStatus::Pass; });
}

namespace {

using detail::BigFloat;

struct ShellMin {
  bool seen = false;
  BigFloat lo;      // smallest lower bound over the shell
  BigFloat arg_lo;  // bounds of the argmin vector
  BigFloat arg_hi;
  bool arg_zero = false;
  std::vector<long> arg;

  explicit ShellMin(int p) : lo(p), arg_lo(p), arg_hi(p) {}
};

struct Scanner {
  const std::vector<Gamma>& gammas;
  DioKind kind;
  int n_max;
  int precision;
  std::vector<BigFloat> g_lo, g_hi;
  bool all_log_linear;

  Scanner(const std::vector<Gamma>& g, DioKind k, int n, int p)
      : gammas(g), kind(k), n_max(n), precision(p), all_log_linear(true) {
    for (const auto& x : gammas) {
      const Enclosure e = gamma_enclosure(x, precision);
      g_lo.emplace_back(precision);
      g_hi.emplace_back(precision);
      mpfr_set(g_lo.back().get(), e.lo_float().get(), MPFR_RNDD);
      mpfr_set(g_hi.back().get(), e.hi_float().get(), MPFR_RNDU);
      if (!std::holds_alternative<LogLinear>(x)) all_log_linear = false;
    }
  }

  // Bounds of |sum n_i gamma_i| into lo/hi; returns true when exactly zero.
  bool margin(const std::vector<long>& n, BigFloat& lo, BigFloat& hi, BigFloat& t) const {
    mpfr_set_zero(lo.get(), 1);
    mpfr_set_zero(hi.get(), 1);
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (n[i] == 0) continue;
      const bool pos = n[i] > 0;
      mpfr_mul_si(t.get(), (pos ? g_lo : g_hi)[i].get(), n[i], MPFR_RNDD);
      mpfr_add(lo.get(), lo.get(), t.get(), MPFR_RNDD);
      mpfr_mul_si(t.get(), (pos ? g_hi : g_lo)[i].get(), n[i], MPFR_RNDU);
      mpfr_add(hi.get(), hi.get(), t.get(), MPFR_RNDU);
    }
    absolute(lo, hi, t);
    if (mpfr_sgn(lo.get()) > 0) return false;
    return refine(n, lo, hi);
  }

  static void absolute(BigFloat& lo, BigFloat& hi, BigFloat& t) {
    if (mpfr_sgn(lo.get()) >= 0) return;
    if (mpfr_sgn(hi.get()) <= 0) {
      mpfr_neg(t.get(), lo.get(), MPFR_RNDU);
      mpfr_neg(lo.get(), hi.get(), MPFR_RNDD);
      mpfr_set(hi.get(), t.get(), MPFR_RNDU);
      return;
    }
    mpfr_neg(t.get(), lo.get(), MPFR_RNDU);
    mpfr_max(hi.get(), hi.get(), t.get(), MPFR_RNDU);
    mpfr_set_zero(lo.get(), 1);
  }

  // The enclosure touches zero: decide exactly for log-linear data, otherwise
  // retry at higher precision.
  bool refine(const std::vector<long>& n, BigFloat& lo, BigFloat& hi) const {
    if (all_log_linear) {
      LogLinear sum;
      for (std::size_t i = 0; i < n.size(); ++i) sum += Rational(n[i]) * std::get<LogLinear>(gammas[i]);
      if (sum.is_zero()) {
        mpfr_set_zero(lo.get(), 1);
        mpfr_set_zero(hi.get(), 1);
        return true;
      }
    }
    for (int p = 2 * precision; p <= 16 * precision; p *= 2) {
      Enclosure sum(Rational(0), p);
      for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] != 0) sum = sum + Enclosure(Rational(n[i]), p) * gamma_enclosure(gammas[i], p);
      }
      const Enclosure m = abs(sum);
      if (m.certainly_positive()) {
        mpfr_set(lo.get(), m.lo_float().get(), MPFR_RNDD);
        mpfr_set(hi.get(), m.hi_float().get(), MPFR_RNDU);
        return false;
      }
    }
    return false;
  }

  // All admissible vectors whose first coordinate lies in [first_lo, first_hi].
  std::vector<ShellMin> scan_block(long first_lo, long first_hi) const {
    std::vector<ShellMin> shells;
    shells.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int s = 0; s <= n_max; ++s) shells.emplace_back(precision);
    const std::size_t k = gammas.size();
    const long low = kind == DioKind::MixedSign ? -n_max : 0;
    std::vector<long> n(k, low);
    BigFloat lo(precision), hi(precision), t(precision);
    for (long first = first_lo; first <= first_hi; ++first) {
      n[0] = first;
      for (std::size_t i = 1; i < k; ++i) n[i] = low;
      while (true) {
        long shell = 0;
        long first_nonzero = 0;
        for (long x : n) {
          shell = std::max(shell, x < 0 ? -x : x);
          if (first_nonzero == 0) first_nonzero = x;
        }
        // skip zero and, in the mixed-sign case, the negated duplicates
        if (shell != 0 && first_nonzero > 0) {
          const bool zero = margin(n, lo, hi, t);
          ShellMin& s = shells[static_cast<std::size_t>(shell)];
          if (!s.seen || mpfr_less_p(lo.get(), s.lo.get())) mpfr_set(s.lo.get(), lo.get(), MPFR_RNDD);
          if (!s.seen || mpfr_less_p(hi.get(), s.arg_hi.get())) {
            mpfr_set(s.arg_lo.get(), lo.get(), MPFR_RNDD);
            mpfr_set(s.arg_hi.get(), hi.get(), MPFR_RNDU);
            s.arg = n;
            s.arg_zero = zero;
          }
          s.seen = true;
        }
        std::size_t i = k;
        while (i > 1) {
          --i;
          if (n[i] < n_max) {
            ++n[i];
            break;
          }
          n[i] = low;
          if (i == 1) i = 0;
        }
        if (i == 0 || k == 1) break;
      }
    }
    return shells;
  }
};

Enclosure threshold(int N, const Rational& c, int precision) {
  if (c.is_integer() && c.sign() >= 0) return Enclosure(pow(Rational(N), -c.num().get_si()), precision);
  return exp(-(Enclosure(c, precision) * log(Enclosure(Rational(N), precision))));
}

DioReport scan(const std::vector<Gamma>& gammas, const Rational& c, int n_max, int precision, DioKind kind) {
  if (gammas.empty()) throw InputError("empty gamma list");
  if (n_max < 2) throw InputError("horizon must be at least 2");
  if (c.sign() <= 0) throw InputError("exponent c must be positive");
  const Scanner scanner(gammas, kind, n_max, precision);
  // The first coordinate ranges over [0, n_max] in both regimes: negative
  // first coordinates are negations of canonical vectors.
  const long total = n_max + 1L;
  const long chunks = std::min<long>(total, std::max(1, 4 * jobs()));
  auto blocks = parallel_map<std::vector<ShellMin>>(static_cast<std::size_t>(chunks), [&](std::size_t b) {
    const long lo = total * static_cast<long>(b) / chunks;
    const long hi = total * static_cast<long>(b + 1) / chunks - 1;
    return scanner.scan_block(lo, hi);
  });
  // Merge in block order; strict comparisons keep the earliest minimizer.
  std::vector<ShellMin> shells;
  for (int s = 0; s <= n_max; ++s) shells.emplace_back(precision);
  for (auto& block : blocks) {
    for (std::size_t s = 0; s < shells.size(); ++s) {
      ShellMin& dst = shells[s];
      ShellMin& src = block[s];
      if (!src.seen) continue;
      if (!dst.seen || mpfr_less_p(src.lo.get(), dst.lo.get())) mpfr_set(dst.lo.get(), src.lo.get(), MPFR_RNDD);
      if (!dst.seen || mpfr_less_p(src.arg_hi.get(), dst.arg_hi.get())) {
        mpfr_set(dst.arg_lo.get(), src.arg_lo.get(), MPFR_RNDD);
        mpfr_set(dst.arg_hi.get(), src.arg_hi.get(), MPFR_RNDU);
        dst.arg = src.arg;
        dst.arg_zero = src.arg_zero;
      }
      dst.seen = true;
    }
  }

  DioReport report;
  report.kind = kind;
  report.gammas = gammas;
  report.c = c;
  report.n_max = n_max;
  report.precision = precision;
  BigFloat run_lo(precision), run_hi(precision);
  std::vector<long> run_arg;
  bool run_zero = false, started = false;
  for (int N = 1; N <= n_max; ++N) {
    const ShellMin& s = shells[static_cast<std::size_t>(N)];
    if (s.seen) {
      if (!started || mpfr_less_p(s.lo.get(), run_lo.get())) mpfr_set(run_lo.get(), s.lo.get(), MPFR_RNDD);
      if (!started || mpfr_less_p(s.arg_hi.get(), run_hi.get())) {
        mpfr_set(run_hi.get(), s.arg_hi.get(), MPFR_RNDU);
        run_arg = s.arg;
        run_zero = s.arg_zero;
      }
      started = true;
    }
    // Condition (D)/(d) quantify over N >= 2; at N = 1 the bound N^-c is 1.
    if (N < 2) continue;
    DioRow row;
    row.N = N;
    row.threshold = threshold(N, c, precision);
    {
      mpq_class lo_q, hi_q;
      mpfr_get_q(lo_q.get_mpq_t(), run_lo.get());
      mpfr_get_q(hi_q.get_mpq_t(), run_hi.get());
      row.margin = Enclosure(Rational(lo_q), Rational(hi_q), precision);
    }
    row.argmin = run_arg;
    row.exact_zero = run_zero;
    if (certainly_less(row.threshold, Enclosure(row.margin.lo_exact(), row.margin.lo_exact(), precision))) {
      row.status = DioStatus::Pass;
    } else if (row.margin.hi_exact() <= row.threshold.lo_exact()) {
      row.status = DioStatus::Violation;
    } else {
      row.status = DioStatus::Undecided;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

DioReport check_condition_D(const std::vector<Gamma>& gammas, const Rational& c, int n_max, int precision) {
  return scan(gammas, c, n_max, precision, DioKind::MixedSign);
}

DioReport check_condition_d(const std::vector<Gamma>& gammas, const Rational& c, int n_max, int precision) {
  return scan(gammas, c, n_max, precision, DioKind::Nonnegative);
}

std::vector<long> count_vector(const Word& w, std::size_t alphabet) {
  std::vector<long> out(alphabet, 0);
  for (int s : w.symbols) {
    if (s < 0 || static_cast<std::size_t>(s) >= alphabet) throw InputError("word symbol out of range");
    ++out[static_cast<std::size_t>(s)];
  }
  return out;
}

namespace {

Word sub_word(int a, int b, int i, int N, int r, int r_power) {
  Word w;
  w.symbols = {a, b};
  w.symbols.insert(w.symbols.end(), static_cast<std::size_t>(N), i);
  w.symbols.insert(w.symbols.end(), static_cast<std::size_t>(r_power), r);
  return w;
}

Rational word_norm(const IFSystem& x, const Word& w) { return compose_word(x, w).norm().rational(); }

bool independent(const std::vector<Word>& words, std::size_t alphabet) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& w : words) {
    std::vector<Rational> row;
    for (long c : count_vector(w, alphabet)) row.emplace_back(c);
    rows.push_back(std::move(row));
  }
  return rank(rows) == alphabet;
}

}  // namespace

SubIfs build_sub_ifs(const IFSystem& x, int r, int N, const std::optional<std::vector<Rational>>& betas) {
  if (!x.exact()) throw DomainError("sub-IFS construction needs rational coefficients");
  const std::size_t M = x.size();
  if (r < 0 || static_cast<std::size_t>(r) >= M) throw InputError("index r out of range");
  if (N < 1) throw InputError("N must be positive");
  std::vector<Rational> norms;
  for (const auto& f : x.maps()) norms.push_back(f.norm().rational());
  if (betas && in_log_span(norms[static_cast<std::size_t>(r)], *betas).in_span) {
    throw InputError("log of ratio " + std::to_string(r + 1) + " lies in the span of the beta logarithms");
  }

  SubIfs out;
  out.r = r;
  out.N = N;
  out.selected_by_span = betas.has_value();
  // first pair with distinct fixed points (non-commuting maps)
  bool found = false;
  for (std::size_t a = 0; a < M && !found; ++a) {
    for (std::size_t b = a + 1; b < M && !found; ++b) {
      if (!((x[a] * x[b]) == (x[b] * x[a]))) {
        out.p = static_cast<int>(a);
        out.q = static_cast<int>(b);
        found = true;
      }
    }
  }
  if (!found) throw DomainError("all maps commute; no pair with distinct fixed points");

  std::vector<Word> firsts, seconds, chosen;
  for (std::size_t i = 0; i < M; ++i) {
    const int ii = static_cast<int>(i);
    const Word u1 = sub_word(out.p, out.q, ii, N, r, 1);
    const Word u2 = sub_word(out.p, out.q, ii, N, r, 2);
    firsts.push_back(u1);
    seconds.push_back(u2);
    SubIfsPair pair;
    if (betas) {
      const bool first_ok = !in_log_span(word_norm(x, u1), *betas).in_span;
      pair.u = first_ok ? u1 : u2;
      if (!first_ok && in_log_span(word_norm(x, u2), *betas).in_span) {
        throw DomainError("neither candidate avoids the span");  // impossible when log alpha_r is outside it
      }
    } else {
      pair.u = u1;
      pair.alternative_u = u2;
    }
    pair.v = pair.u;
    std::swap(pair.v.symbols[0], pair.v.symbols[1]);
    if (pair.alternative_u) {
      pair.alternative_v = *pair.alternative_u;
      std::swap(pair.alternative_v->symbols[0], pair.alternative_v->symbols[1]);
    }
    chosen.push_back(pair.u);
    out.pairs.push_back(std::move(pair));
  }

  bool ok = independent(chosen, M);
  if (!betas) {
    // every combination of candidates has to work
    for (std::size_t mask = 0; ok && mask < (std::size_t{1} << std::min<std::size_t>(M, 12)); ++mask) {
      std::vector<Word> combo;
      for (std::size_t i = 0; i < M; ++i) combo.push_back(((mask >> i) & 1) ? seconds[i] : firsts[i]);
      ok = independent(combo, M);
    }
  }
  if (!ok) throw InputError("count vectors are dependent at N = " + std::to_string(N) + "; use a larger N");

  for (const auto& pair : out.pairs) {
    const AffineMap1D fu = compose_word(x, pair.u), fv = compose_word(x, pair.v);
    if (fu.norm().rational() != fv.norm().rational()) throw DomainError("sub-IFS norms differ");
    const Rational pu = fu.translation.rational() / (Rational(1) - fu.ratio.rational());
    const Rational pv = fv.translation.rational() / (Rational(1) - fv.ratio.rational());
    if (pu == pv) throw DomainError("sub-IFS maps share a fixed point");
  }
  return out;
}

SubIfs build_sub_ifs_auto(const IFSystem& x, int r, const std::optional<std::vector<Rational>>& betas, int n_limit) {
  for (int N = 1; N <= n_limit; ++N) {
    try {
      return build_sub_ifs(x, r, N, betas);
    } catch (const InputError& e) {
      if (std::string(e.what()).find("dependent") == std::string::npos) throw;
    }
  }
  throw InputError("no N up to " + std::to_string(n_limit) + " gives independent count vectors");
}

}  // namespace selfsim
