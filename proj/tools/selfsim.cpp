#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "selfsim/arithmetic.hpp"
#include "selfsim/embedding.hpp"
#include "selfsim/error.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/io.hpp"
#include "selfsim/measures.hpp"
#include "selfsim/orbits.hpp"
#include "selfsim/parallel.hpp"
#include "selfsim/renorm.hpp"
#include "selfsim/rng.hpp"

using namespace selfsim;

namespace {

constexpr int kExitEmpty = 0;
constexpr int kExitUnknown = 2;
constexpr int kExitRefuted = 3;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

struct Globals {
  int jobs = 1;
  int precision = 0;
};

int precision_of(const Globals& g) { return g.precision > 0 ? g.precision : default_precision(); }

Json meta(const std::string& command, const Json& config, const Globals& g, std::optional<std::uint64_t> seed) {
  Json m{{"tool", "selfsim"},
         {"version", SELFSIM_VERSION},
         {"command", command},
         {"config_digest", config_digest(config)},
         {"precision", precision_of(g)}};
  m["seed"] = seed ? Json(*seed) : Json();
  return m;
}

void emit(Json body, const std::string& command, const Json& config, const Globals& g,
          std::optional<std::uint64_t> seed = std::nullopt) {
  body["meta"] = meta(command, config, g, seed);
  std::cout << body.dump(2) << "\n";
}

void require_positive(long value, const char* name) {
  if (value <= 0) throw InputError(std::string(name) + " must be positive");
}

std::vector<Rational> rationals(const std::vector<std::string>& items) {
  std::vector<Rational> out;
  for (const auto& s : items) out.push_back(Rational::parse(s));
  return out;
}

// 2^-lo .. 2^-hi
std::vector<double> dyadic_scales(int lo, int hi) {
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

std::vector<double> scales_from(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& q : rationals(items)) {
    if (q.sign() <= 0) throw InputError("scales must be positive");
    out.push_back(q.to_double());
  }
  return out;
}

ChoiceRule parse_choice(const std::string& text, std::uint64_t seed) {
  ChoiceRule rule;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto indices = [&] {
    std::vector<int> v;
    for (const auto& s : split_list(arg)) {
      try {
        v.push_back(std::stoi(s) - 1);
      } catch (const std::exception&) {
        throw InputError("bad index \"" + s + "\" in choice rule");
      }
    }
    return v;
  };
  if (kind == "constant") {
    rule.kind = ChoiceRule::Kind::Constant;
    rule.index = arg.empty() ? 0 : indices().at(0);
  } else if (kind == "periodic") {
    rule.kind = ChoiceRule::Kind::Periodic;
    if (arg.empty()) throw InputError("periodic choice needs a pattern, e.g. periodic:1,2,2");
    rule.pattern = indices();
  } else if (kind == "random") {
    rule.kind = ChoiceRule::Kind::Random;
    rule.seed = seed;
  } else {
    throw InputError("unknown choice rule \"" + text + "\" (constant[:i], periodic:i,j,..., random)");
  }
  return rule;
}

// ---- certify ----

struct CertifyArgs {
  std::string x, y, out;
  int max_depth = CertifyOptions{}.max_depth;
  int witness_depth = PruneOptions{}.witness_depth;
  long budget = static_cast<long>(CertifyOptions{}.budget);
  long node_budget = static_cast<long>(PruneOptions{}.node_budget);
  int verify_depth = CertifyOptions{}.verify_depth;
  bool orientation = false;
};

int run_certify(const CertifyArgs& a, const Globals& g) {
  require_positive(a.max_depth, "--max-depth");
  require_positive(a.witness_depth, "--witness-depth");
  require_positive(a.budget, "--budget");
  const int p = precision_of(g);
  const IFSystem x0 = load_ifs(a.x, p), y0 = load_ifs(a.y, p);
  const IFSystem x = normalize(x0), y = normalize(y0);
  CertifyOptions opt;
  opt.max_depth = a.max_depth;
  opt.prune.witness_depth = a.witness_depth;
  opt.prune.node_budget = static_cast<std::size_t>(a.node_budget);
  opt.budget = static_cast<std::size_t>(a.budget);
  opt.orientation_preserving_only = a.orientation;
  opt.precision = p;
  opt.verify_depth = a.verify_depth;

  const Json config{{"x", to_json(x)}, {"y", to_json(y)}, {"max_depth", a.max_depth},
                    {"witness_depth", a.witness_depth}, {"budget", a.budget}, {"node_budget", a.node_budget},
                    {"verify_depth", a.verify_depth}, {"orientation_preserving", a.orientation}};
  const CertifyOutcome outcome = certify_empty(x, y, opt);
  Json body = to_json(outcome);
  body["normalized"] = !(x == x0 && y == y0);
  if (!a.out.empty()) {
    Json artifact;
    if (outcome.certificate) {
      artifact = to_json(*outcome.certificate);
    } else {
      artifact = Json{{"format", "selfsim-survivors"}, {"x", to_json(x)}, {"y", to_json(y)},
                      {"outcome", to_string(outcome.tag)}, {"survivors", body["survivors"]}};
    }
    artifact["meta"] = meta("certify", config, g, std::nullopt);
    write_text(a.out, artifact.dump(2) + "\n");
    body["written"] = a.out;
  }
  emit(body, "certify", config, g);
  return outcome.tag == CertifyOutcome::Tag::Empty ? kExitEmpty : kExitUnknown;
}

// ---- verify ----

int run_verify(const std::string& path, const Globals& g) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("certificate is not JSON: ") + e.what());
  }
  const Certificate cert = certificate_from_json(j);
  const IFSystem x(cert.x_maps), y(cert.y_maps);
  const VerifyResult r = verify_certificate(cert, x, y, g.precision);
  const Json config{{"certificate_digest", certificate_digest(cert)}};
  emit(Json{{"ok", r.ok}, {"diagnostic", r.diagnostic}, {"leaves_checked", r.leaves_checked}}, "verify", config, g);
  return r.ok ? kExitEmpty : kExitRefuted;
}

// ---- search ----

struct SearchArgs {
  std::string x, y;
  int candidate_depth = 3;
  int verify_depth = 8;
  std::vector<std::string> maps;
};

int run_search(const SearchArgs& a, const Globals& g) {
  require_positive(a.verify_depth, "--verify-depth");
  if (a.candidate_depth < 0) throw InputError("--candidate-depth must be non-negative");
  const int p = precision_of(g);
  const IFSystem x = normalize(load_ifs(a.x, p)), y = normalize(load_ifs(a.y, p));
  std::vector<AffineMap1D> extra;
  Json extra_json = Json::array();
  for (const auto& m : a.maps) {
    extra.push_back(parse_map(m));
    extra_json.push_back(to_json(extra.back()));
  }
  const Json config{{"x", to_json(x)}, {"y", to_json(y)}, {"candidate_depth", a.candidate_depth},
                    {"verify_depth", a.verify_depth}, {"extra", extra_json}};
  const auto checks = search_embeddings(x, y, a.candidate_depth, a.verify_depth, extra);
  Json rows = Json::array();
  std::size_t verified = 0;
  for (const auto& c : checks) {
    rows.push_back(to_json(c));
    if (c.status == EmbeddingStatus::Verified) ++verified;
  }
  emit(Json{{"candidates", rows}, {"verified", verified}}, "search", config, g);
  return 0;
}

// ---- rank / span ----

int run_rank(const std::vector<std::string>& items, const Globals& g) {
  const auto ratios = rationals(items);
  for (const auto& r : ratios) {
    if (r.sign() <= 0) throw InputError("ratios must be positive");
  }
  Json input = Json::array();
  for (const auto& r : ratios) input.push_back(to_json(r));
  const Json config{{"ratios", input}};
  emit(Json{{"rank", log_rank(ratios)}, {"ratios", input}}, "rank", config, g);
  return 0;
}

int run_span(const std::string& value, const std::vector<std::string>& basis_items, const Globals& g) {
  const Rational r = Rational::parse(value);
  const auto basis = rationals(basis_items);
  if (r.sign() <= 0) throw InputError("r must be positive");
  for (const auto& b : basis) {
    if (b.sign() <= 0) throw InputError("basis entries must be positive");
  }
  Json basis_json = Json::array();
  for (const auto& b : basis) basis_json.push_back(to_json(b));
  const Json config{{"r", to_json(r)}, {"basis", basis_json}};
  // the search works with ratios in (0,1); log(1/q) = -log q
  auto below_one = [](const Rational& q) { return Rational(1) < q ? q.inverse() : q; };
  std::vector<Rational> small;
  for (const auto& b : basis) {
    if (b == Rational(1)) throw InputError("basis entries must differ from 1");
    small.push_back(below_one(b));
  }
  SpanWitness w;
  if (r == Rational(1)) {
    w.in_span = true;
    w.coefficients.assign(basis.size(), Rational(0));
  } else {
    w = in_log_span(below_one(r), small);
  }
  Json coeffs = Json::array();
  for (std::size_t k = 0; k < w.coefficients.size(); ++k) {
    const bool flip = (Rational(1) < r) != (Rational(1) < basis[k]);
    coeffs.push_back(to_json(flip ? -w.coefficients[k] : w.coefficients[k]));
  }
  emit(Json{{"in_span", w.in_span}, {"coefficients", coeffs}}, "span", config, g);
  return 0;
}

// ---- dioph ----

struct DiophArgs {
  std::vector<std::string> gammas;
  std::string c = "2";
  int n_max = 100;
  std::string condition = "D";
  std::string csv;
};

int run_dioph(const DiophArgs& a, const Globals& g) {
  require_positive(a.n_max, "--n-max");
  if (a.gammas.empty()) throw InputError("at least one --gamma is required");
  if (a.condition != "D" && a.condition != "d") throw InputError("--condition is D or d");
  const int p = precision_of(g);
  std::vector<Gamma> gammas;
  Json gamma_json = Json::array();
  for (const auto& s : a.gammas) {
    gammas.push_back(parse_gamma(s, p));
    gamma_json.push_back(gamma_str(gammas.back()));
  }
  const Rational c = Rational::parse(a.c);
  if (c.sign() <= 0) throw InputError("c must be positive");
  const Json config{{"gammas", gamma_json}, {"c", to_json(c)}, {"n_max", a.n_max}, {"condition", a.condition}};
  const DioReport report =
      a.condition == "D" ? check_condition_D(gammas, c, a.n_max, p) : check_condition_d(gammas, c, a.n_max, p);
  if (!a.csv.empty()) write_text(a.csv, dio_csv(report));
  emit(to_json(report), "dioph", config, g);
  return 0;
}

// ---- multirot ----

struct MultirotArgs {
  std::vector<std::string> lambda;
  std::string theta0 = "0";
  long n = 1000;
  std::string choice = "constant";
  std::uint64_t seed = 1;
  std::vector<std::string> scales;
  std::string csv;
  bool full = false;
};

int run_multirot(const MultirotArgs& a, const Globals& g) {
  require_positive(a.n, "--N");
  if (a.lambda.empty()) throw InputError("at least one --lambda is required");
  const int p = precision_of(g);
  std::vector<Scalar> values;
  Json lambda_json = Json::array();
  for (const auto& s : a.lambda) {
    values.push_back(parse_real(s, p));
    lambda_json.push_back(to_json(values.back()));
  }
  const LambdaSet lambda = make_lambda_set(values);
  const Scalar theta0 = parse_real(a.theta0, p);
  const ChoiceRule rule = parse_choice(a.choice, a.seed);
  const bool random = rule.kind == ChoiceRule::Kind::Random;
  std::vector<double> scales;
  if (a.scales.empty()) {
    const int finest = std::max(4, static_cast<int>(std::floor(std::log2(static_cast<double>(a.n)))) - 1);
    scales = dyadic_scales(3, finest);
  } else {
    scales = scales_from(a.scales);
  }
  Json scales_json = Json::array();
  for (double s : scales) scales_json.push_back(decimal(Scalar(Rational::from_double(s))));

  Json config{{"lambda", lambda_json}, {"theta0", to_json(theta0)}, {"N", a.n}, {"choice", rule.str()},
              {"scales", scales_json}};
  if (random) config["seed"] = a.seed;

  const auto n = static_cast<std::size_t>(a.n);
  const MultiRotation orbit = generate_multirotation(lambda, theta0, rule.expand(n, values.size()), n);
  const auto problem = validate_multirotation(orbit, lambda);
  std::vector<double> points;
  for (std::size_t i = 1; i < orbit.thetas.size(); ++i) {
    const Scalar& t = orbit.thetas[i];
    points.push_back(t.exact() ? t.rational().to_double() : t.enclosure().mid());
  }
  const BoxDimEstimate est = box_dim_estimate(points, scales);
  if (!a.csv.empty()) write_text(a.csv, orbit_csv(orbit));

  Json body = to_json(orbit);
  if (!a.full) {
    body.erase("thetas");
    body.erase("choices");
  }
  body["choice"] = rule.str();
  body["box_dim"] = to_json(est);
  body["valid"] = !problem.has_value();
  if (problem) body["diagnostic"] = *problem;
  emit(body, "multirot", config, g, random ? std::optional<std::uint64_t>(a.seed) : std::nullopt);
  return problem ? kExitData : 0;
}

// ---- boxdim ----

struct BoxdimArgs {
  std::string x;
  std::string points;
  int depth = 8;
  std::vector<std::string> scales;
  std::string csv;
};

int run_boxdim(const BoxdimArgs& a, const Globals& g) {
  if (a.x.empty() == a.points.empty()) throw InputError("give exactly one of --x or --points");
  std::vector<Rational> pts;
  Json config;
  if (!a.x.empty()) {
    require_positive(a.depth, "--depth");
    const IFSystem x = load_ifs(a.x, precision_of(g));
    if (!x.exact()) throw InputError("boxdim needs exact maps");
    // left endpoints of the depth-n cylinders
    for (const auto& iv : exact_cylinder_cover(x, a.depth)) pts.push_back(iv.lo);
    config = Json{{"x", to_json(x)}, {"depth", a.depth}};
  } else {
    const std::string text = read_text(a.points);
    std::size_t start = 0;
    while (start < text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(start, end - start);
      start = end + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      pts.push_back(Rational::parse(line));
    }
    Json list = Json::array();
    for (const auto& q : pts) list.push_back(to_json(q));
    config = Json{{"points", list}};
  }
  std::vector<Rational> scales;
  if (a.scales.empty()) {
    for (int k = 2; k <= 10; ++k) scales.push_back(dyadic(1, k));
  } else {
    scales = rationals(a.scales);
    for (const auto& s : scales) {
      if (s.sign() <= 0) throw InputError("scales must be positive");
    }
  }
  Json scales_json = Json::array();
  for (const auto& s : scales) scales_json.push_back(to_json(s));
  config["scales"] = scales_json;
  const BoxDimEstimate est = box_dim_estimate(pts, scales);
  if (!a.csv.empty()) write_text(a.csv, cover_csv(est));
  Json body = to_json(est);
  body["points"] = pts.size();
  emit(body, "boxdim", config, g);
  return 0;
}

// ---- renorm ----

struct RenormArgs {
  std::string x, y;
  std::string f = "1/3,0";
  std::string word = "1";
  std::string prefix;
  int n_start = 6;
  int n_end = 16;
  std::string csv;
};

int run_renorm(const RenormArgs& a, const Globals& g) {
  if (a.n_start < 0 || a.n_end < a.n_start) throw InputError("need 0 <= --n-start <= --n-end");
  const int p = precision_of(g);
  const IFSystem x = normalize(load_ifs(a.x, p));
  const IFSystem y = a.y.empty() ? x : normalize(load_ifs(a.y, p));
  const AffineMap1D f = parse_map(a.f);
  const WordSource source(Word::parse(a.prefix), Word::parse(a.word));
  const Json config{{"x", to_json(x)}, {"y", to_json(y)}, {"f", to_json(f)}, {"ii", source.str()},
                    {"n_start", a.n_start}, {"n_end", a.n_end}};
  const ThetaReport report = theta_sequence(f, source, a.n_start, a.n_end, x, y);
  if (!a.csv.empty()) write_text(a.csv, theta_csv(report));
  emit(to_json(report), "renorm", config, g);
  return report.failures.empty() ? 0 : kExitData;
}

// ---- cpstep ----

struct CpstepArgs {
  std::string x;
  int depth = 6;
  int level = 1;
  int steps = 8;
  std::vector<std::string> weights;
  std::uint64_t seed = 1;
  std::string atoms_csv;
};

int run_cpstep(const CpstepArgs& a, const Globals& g) {
  require_positive(a.depth, "--depth");
  require_positive(a.level, "--level");
  require_positive(a.steps, "--steps");
  const IFSystem x = normalize(load_ifs(a.x, precision_of(g)));
  const auto weights = rationals(a.weights);
  Json weights_json = Json::array();
  for (const auto& w : weights) weights_json.push_back(to_json(w));
  const Json config{{"x", to_json(x)}, {"depth", a.depth}, {"level", a.level}, {"steps", a.steps},
                    {"weights", weights_json}, {"seed", a.seed}};
  AtomicMeasure mu = cylinder_measure(x, a.depth, weights);
  Rng rng(a.seed);
  // JSON lines: a header with the metadata, then one line per step
  std::cout << Json{{"meta", meta("cpstep", config, g, a.seed)}, {"atoms", mu.size()}}.dump() << "\n";
  for (int s = 1; s <= a.steps; ++s) {
    auto [cell, next] = cp_step(mu, a.level, rng);
    mu = std::move(next);
    std::cout << Json{{"step", s}, {"cell", to_json(cell)}, {"atoms", mu.size()}}.dump() << "\n";
  }
  if (!a.atoms_csv.empty()) write_text(a.atoms_csv, atoms_csv(mu));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for strongly separated self-similar sets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SELFSIM_VERSION));
  Globals g;
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--precision", g.precision, "enclosure precision in bits (default 64 or SELFSIM_PRECISION)")
      ->check(CLI::Range(2, 1 << 16));

  std::function<int()> action;

  CertifyArgs ca;
  auto* certify = app.add_subcommand("certify", "branch-and-bound certificate that no affine embedding exists");
  certify->add_option("--x", ca.x, "IFS config for X")->required();
  certify->add_option("--y", ca.y, "IFS config for Y")->required();
  certify->add_option("--max-depth", ca.max_depth);
  certify->add_option("--witness-depth", ca.witness_depth);
  certify->add_option("--budget", ca.budget, "cells examined");
  certify->add_option("--node-budget", ca.node_budget, "per-cell witness search nodes");
  certify->add_option("--verify-depth", ca.verify_depth, "depth for checking a surviving candidate");
  certify->add_flag("--orientation-preserving", ca.orientation);
  certify->add_option("--out", ca.out, "certificate, or surviving cells when not empty");
  certify->callback([&] { action = [&] { return run_certify(ca, g); }; });

  std::string cert_path;
  auto* verify = app.add_subcommand("verify", "replay a certificate");
  verify->add_option("certificate", cert_path)->required();
  verify->callback([&] { action = [&] { return run_verify(cert_path, g); }; });

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "look for embeddings among simple candidates");
  search->add_option("--x", sa.x)->required();
  search->add_option("--y", sa.y)->required();
  search->add_option("--candidate-depth", sa.candidate_depth);
  search->add_option("--verify-depth", sa.verify_depth);
  search->add_option("--map", sa.maps, "extra candidate \"ratio,translation\"");
  search->callback([&] { action = [&] { return run_search(sa, g); }; });

  std::vector<std::string> rank_ratios;
  auto* rank = app.add_subcommand("rank", "rank of the logarithms of positive rationals over Q");
  rank->add_option("ratios", rank_ratios)->required()->delimiter(',');
  rank->callback([&] { action = [&] { return run_rank(rank_ratios, g); }; });

  std::string span_r;
  std::vector<std::string> span_basis;
  auto* span = app.add_subcommand("span", "is log r a rational combination of log basis");
  span->add_option("--r", span_r)->required();
  span->add_option("--basis", span_basis)->required()->delimiter(',');
  span->callback([&] { action = [&] { return run_span(span_r, span_basis, g); }; });

  DiophArgs da;
  auto* dioph = app.add_subcommand("dioph", "scan a Diophantine condition up to a horizon");
  dioph->add_option("--gamma", da.gammas, "e.g. log2, -log3, 1, log(2)/log(3)")->required()->delimiter(',');
  dioph->add_option("--c", da.c);
  dioph->add_option("--n-max", da.n_max);
  dioph->add_option("--condition", da.condition, "D (signed) or d (non-negative)");
  dioph->add_option("--csv", da.csv);
  dioph->callback([&] { action = [&] { return run_dioph(da, g); }; });

  MultirotArgs ma;
  auto* multirot = app.add_subcommand("multirot", "multi-rotation orbit and covering numbers");
  multirot->add_option("--lambda", ma.lambda, "increments, e.g. log2/log3")->required()->delimiter(',');
  multirot->add_option("--theta0", ma.theta0);
  multirot->add_option("--N", ma.n);
  multirot->add_option("--choice", ma.choice, "constant[:i], periodic:i,j,..., random");
  multirot->add_option("--seed", ma.seed);
  multirot->add_option("--scales", ma.scales)->delimiter(',');
  multirot->add_option("--csv", ma.csv);
  multirot->add_flag("--full", ma.full, "include the orbit in the JSON");
  multirot->callback([&] { action = [&] { return run_multirot(ma, g); }; });

  BoxdimArgs ba;
  auto* boxdim = app.add_subcommand("boxdim", "covering numbers and box-dimension slope");
  boxdim->add_option("--x", ba.x, "IFS config; uses cylinder endpoints");
  boxdim->add_option("--points", ba.points, "file with one rational per line");
  boxdim->add_option("--depth", ba.depth);
  boxdim->add_option("--scales", ba.scales)->delimiter(',');
  boxdim->add_option("--csv", ba.csv);
  boxdim->callback([&] { action = [&] { return run_boxdim(ba, g); }; });

  RenormArgs ra;
  auto* renorm = app.add_subcommand("renorm", "renormalization trajectory of an embedding");
  renorm->add_option("--x", ra.x)->required();
  renorm->add_option("--y", ra.y, "defaults to X");
  renorm->add_option("--f", ra.f, "\"ratio,translation\"");
  renorm->add_option("--word", ra.word, "period of the X address");
  renorm->add_option("--prefix", ra.prefix);
  renorm->add_option("--n-start", ra.n_start);
  renorm->add_option("--n-end", ra.n_end);
  renorm->add_option("--csv", ra.csv);
  renorm->callback([&] { action = [&] { return run_renorm(ra, g); }; });

  CpstepArgs pa;
  auto* cpstep = app.add_subcommand("cpstep", "steps of the magnification chain on a cylinder measure");
  cpstep->add_option("--x", pa.x)->required();
  cpstep->add_option("--depth", pa.depth);
  cpstep->add_option("--level", pa.level);
  cpstep->add_option("--steps", pa.steps);
  cpstep->add_option("--weights", pa.weights)->delimiter(',');
  cpstep->add_option("--seed", pa.seed);
  cpstep->add_option("--atoms-csv", pa.atoms_csv);
  cpstep->callback([&] { action = [&] { return run_cpstep(pa, g); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (g.precision > 0) setenv("SELFSIM_PRECISION", std::to_string(g.precision).c_str(), 1);
  set_jobs(g.jobs);
  try {
    return action();
  } catch (const InputError& e) {
    std::cerr << "selfsim: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    std::cerr << "selfsim: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "selfsim: " << e.what() << "\n";
    return kExitData;
  }
}
