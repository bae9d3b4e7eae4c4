#include "selfsim/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "selfsim/error.hpp"

namespace selfsim {

Json to_json(const Rational& q) { return q.str(); }

Json to_json(const Enclosure& e) { return Json{{"lo", e.lo_str()}, {"hi", e.hi_str()}}; }

Json to_json(const Scalar& s) {
  if (s.exact()) return to_json(s.rational());
  return to_json(s.enclosure());
}

Json to_json(const AffineMap1D& f) { return Json{{"ratio", to_json(f.ratio)}, {"translation", to_json(f.translation)}}; }

Json to_json(const IFSystem& ifs) {
  Json maps = Json::array();
  for (const auto& m : ifs.maps()) maps.push_back(to_json(m));
  return Json{{"maps", maps}};
}

Json to_json(const DyadicSquare& c) { return Json{{"level", c.level}, {"i", c.i}, {"j", c.j}}; }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InputError("expected a rational string, got " + j.dump());
}

Scalar scalar_from_json(const Json& j, int precision) {
  if (j.is_object()) {
    if (!j.contains("lo") || !j.contains("hi") || !j["lo"].is_string() || !j["hi"].is_string()) {
      throw InputError("an enclosure needs string fields lo and hi: " + j.dump());
    }
    return Enclosure::parse(j["lo"].get<std::string>(), j["hi"].get<std::string>(), precision);
  }
  if (j.is_number_float()) throw InputError("write real coefficients as quoted strings, got " + j.dump());
  return rational_from_json(j);
}

IFSystem ifs_from_json(const Json& j, int precision) {
  if (!j.is_object() || !j.contains("maps") || !j["maps"].is_array()) {
    throw InputError("an IFS config needs a \"maps\" array");
  }
  std::vector<AffineMap1D> maps;
  for (const auto& m : j["maps"]) {
    if (!m.is_object() || !m.contains("ratio") || !m.contains("translation")) {
      throw InputError("each map needs ratio and translation: " + m.dump());
    }
    maps.push_back({scalar_from_json(m["ratio"], precision), scalar_from_json(m["translation"], precision)});
  }
  return IFSystem(std::move(maps));
}

DyadicSquare square_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("level") || !j.contains("i") || !j.contains("j")) {
    throw InputError("a cell needs level, i and j: " + j.dump());
  }
  return {j["level"].get<int>(), j["i"].get<std::int64_t>(), j["j"].get<std::int64_t>()};
}

namespace {

class TomlLine {
 public:
  TomlLine(std::string_view s, int line) : s_(s), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("config line " + std::to_string(line_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  bool eat(char c) {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string key() {
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == '"') return string();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string string() {
    expect('"');
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        if (++pos_ >= s_.size()) break;
        switch (s_[pos_]) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail("unsupported escape");
        }
      } else {
        out += s_[pos_];
      }
      ++pos_;
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  Json value() {
    skip_space();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return string();
    if (c == '{') {
      ++pos_;
      Json t = Json::object();
      if (eat('}')) return t;
      do {
        const std::string k = key();
        expect('=');
        t[k] = value();
      } while (eat(','));
      expect('}');
      return t;
    }
    if (c == '[') {
      ++pos_;
      Json a = Json::array();
      if (eat(']')) return a;
      do {
        if (eat(']')) return a;  // trailing comma
        a.push_back(value());
      } while (eat(','));
      expect(']');
      return a;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']' && s_[pos_] != ' ' &&
           s_[pos_] != '\t' && s_[pos_] != '#') {
      ++pos_;
    }
    const std::string word(s_.substr(start, pos_ - start));
    if (word == "true") return true;
    if (word == "false") return false;
    if (!word.empty() && word.find_first_not_of("+-0123456789") == std::string::npos &&
        word.find_first_of("0123456789") != std::string::npos) {
      try {
        return std::stoll(word);
      } catch (const std::exception&) {
        fail("integer out of range: " + word);
      }
    }
    fail("unsupported value \"" + word + "\" (quote rationals and decimals as strings)");
  }

 private:
  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace

Json parse_toml_subset(std::string_view text) {
  Json root = Json::object();
  Json* current = &root;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    TomlLine l(raw, line);
    if (l.done()) continue;
    if (l.eat('[')) {
      const bool array = l.eat('[');
      const std::string name = l.key();
      l.expect(']');
      if (array) l.expect(']');
      if (!l.done()) l.fail("trailing characters after header");
      if (array) {
        Json& arr = root[name];
        if (arr.is_null()) arr = Json::array();
        if (!arr.is_array()) l.fail("\"" + name + "\" is already a table");
        arr.push_back(Json::object());
        current = &arr.back();
      } else {
        if (root.contains(name)) l.fail("duplicate table \"" + name + "\"");
        root[name] = Json::object();
        current = &root[name];
      }
      continue;
    }
    const std::string k = l.key();
    l.expect('=');
    Json v = l.value();
    if (!l.done()) l.fail("trailing characters after value");
    if (current->contains(k)) l.fail("duplicate key \"" + k + "\"");
    (*current)[k] = std::move(v);
  }
  return root;
}

Json parse_config_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("malformed JSON: ") + e.what());
    }
  }
  return parse_toml_subset(text);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f) throw InputError("write failed for " + path.string());
}

Json load_config(const std::filesystem::path& path) { return parse_config_text(read_text(path)); }

IFSystem load_ifs(const std::filesystem::path& path, int precision) {
  return ifs_from_json(load_config(path), precision);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    std::string item(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InputError("empty item in list \"" + std::string(text) + "\"");
    out.push_back(item.substr(b, e - b + 1));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

namespace {

// "log2", "log(2/3)" -> the argument; nullopt if the text is not a logarithm
std::optional<Rational> log_argument(std::string_view t) {
  if (t.substr(0, 3) != "log") return std::nullopt;
  t.remove_prefix(3);
  if (!t.empty() && t.front() == '(') {
    if (t.back() != ')') throw InputError("unbalanced parenthesis in log(...)");
    t = t.substr(1, t.size() - 2);
  }
  const Rational r = Rational::parse(t);
  if (r.sign() <= 0) throw InputError("log of a non-positive number");
  return r;
}

}  // namespace

Gamma parse_gamma(std::string_view text, int precision) {
  std::string_view t = text;
  bool negative = false;
  if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
    negative = t.front() == '-';
    t.remove_prefix(1);
  }
  if (t.substr(0, 3) == "log" && t.find("/log") == std::string_view::npos) {
    const LogLinear l = LogLinear::log_of(*log_argument(t));
    return negative ? Rational(-1) * l : l;
  }
  const Scalar s = parse_real(text, precision);
  if (s.exact()) return LogLinear::of_constant(s.rational());
  return s.enclosure(precision);
}

Scalar parse_real(std::string_view text, int precision) {
  std::string_view t = text;
  bool negative = false;
  if (!t.empty() && (t.front() == '-' || t.front() == '+')) {
    negative = t.front() == '-';
    t.remove_prefix(1);
  }
  Scalar v;
  if (t.substr(0, 3) == "log") {
    // log(p)/log(q), log p / log q
    const auto slash = t.find("/log");
    if (slash == std::string_view::npos) throw InputError("expected log(p)/log(q) in \"" + std::string(text) + "\"");
    const auto p = log_argument(t.substr(0, slash));
    const auto q = log_argument(t.substr(slash + 1));
    if (*q == Rational(1)) throw InputError("log(1) in a denominator");
    const bool p_small = *p < Rational(1), q_small = *q < Rational(1);
    const Rational pp = p_small ? *p : (*p == Rational(1) ? Rational(1) : p->inverse());
    const Rational qq = q_small ? *q : q->inverse();
    const int sign = (p_small == q_small) ? 1 : -1;
    if (pp == Rational(1)) {
      v = Rational(0);
    } else if (const SpanWitness w = in_log_span(pp, {qq}); w.in_span) {
      v = Rational(sign) * w.coefficients.front();
    } else {
      v = log(Enclosure(*p, precision)) / log(Enclosure(*q, precision));
    }
  } else {
    v = Rational::parse(t);
  }
  return negative ? -v : v;
}

AffineMap1D parse_map(std::string_view text) {
  const auto items = split_list(text);
  if (items.size() != 2) throw InputError("a map is written \"ratio,translation\", got \"" + std::string(text) + "\"");
  return {Rational::parse(items[0]), Rational::parse(items[1])};
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_digest(const Json& config) { return fnv1a_hex(config.dump()); }

namespace {

Json leaf_json(const CertificateLeaf& leaf) {
  Json j{{"cell", to_json(leaf.cell)}};
  if (leaf.kind == CertificateLeaf::Kind::Norm) {
    j["kind"] = "norm";
  } else {
    j["kind"] = "witness";
    j["word"] = leaf.word.str();
    j["endpoint"] = leaf.endpoint_one ? 1 : 0;
    j["cover_depth"] = leaf.cover_depth;
  }
  return j;
}

template <class T>
T field(const Json& j, const char* name) {
  if (!j.contains(name)) throw InputError(std::string("missing field \"") + name + "\"");
  try {
    return j[name].get<T>();
  } catch (const Json::exception& e) {
    throw InputError(std::string("bad field \"") + name + "\": " + e.what());
  }
}

std::vector<AffineMap1D> maps_from(const Json& j) { return ifs_from_json(j).maps(); }

}  // namespace

Json to_json(const Certificate& cert) {
  Json leaves = Json::array();
  for (const auto& l : cert.leaves) leaves.push_back(leaf_json(l));
  Json x = Json::array(), y = Json::array();
  for (const auto& m : cert.x_maps) x.push_back(to_json(m));
  for (const auto& m : cert.y_maps) y.push_back(to_json(m));
  return Json{{"format", "selfsim-certificate"},
              {"version", cert.version},
              {"digest", cert.digest},
              {"x", Json{{"maps", x}}},
              {"y", Json{{"maps", y}}},
              {"rho", to_json(cert.rho)},
              {"orientation_preserving_only", cert.orientation_preserving_only},
              {"precision", cert.precision},
              {"max_depth", cert.max_depth},
              {"witness_depth", cert.witness_depth},
              {"budget", cert.budget},
              {"justification", cert.justification},
              {"leaves", leaves}};
}

Certificate certificate_from_json(const Json& j) {
  if (!j.is_object() || field<std::string>(j, "format") != "selfsim-certificate") {
    throw InputError("not a certificate file");
  }
  Certificate c;
  c.version = field<std::string>(j, "version");
  c.digest = field<std::string>(j, "digest");
  c.x_maps = maps_from(j["x"]);
  c.y_maps = maps_from(j["y"]);
  c.rho = rational_from_json(j["rho"]);
  c.orientation_preserving_only = field<bool>(j, "orientation_preserving_only");
  c.precision = field<int>(j, "precision");
  c.max_depth = field<int>(j, "max_depth");
  c.witness_depth = field<int>(j, "witness_depth");
  c.budget = field<std::size_t>(j, "budget");
  c.justification = field<std::string>(j, "justification");
  if (!j.contains("leaves") || !j["leaves"].is_array()) throw InputError("missing leaves");
  for (const auto& l : j["leaves"]) {
    CertificateLeaf leaf;
    leaf.cell = square_from_json(l.at("cell"));
    const std::string kind = field<std::string>(l, "kind");
    if (kind == "norm") {
      leaf.kind = CertificateLeaf::Kind::Norm;
    } else if (kind == "witness") {
      leaf.kind = CertificateLeaf::Kind::Witness;
      leaf.word = Word::parse(field<std::string>(l, "word"));
      leaf.endpoint_one = field<int>(l, "endpoint") != 0;
      leaf.cover_depth = field<int>(l, "cover_depth");
    } else {
      throw InputError("unknown leaf kind \"" + kind + "\"");
    }
    c.leaves.push_back(std::move(leaf));
  }
  return c;
}

Json to_json(const CertifyOutcome& o) {
  Json survivors = Json::array();
  for (const auto& s : o.survivors) survivors.push_back(to_json(s));
  Json stats = Json::array();
  for (const auto& s : o.stats) {
    stats.push_back(Json{{"level", s.level},
                         {"cells", s.cells},
                         {"pruned", s.pruned},
                         {"norm", s.norm},
                         {"live", s.live},
                         {"live_area", to_json(s.live_area)}});
  }
  Json j{{"outcome", to_string(o.tag)},
         {"note", o.note},
         {"surviving_area", to_json(o.surviving_area)},
         {"survivors", survivors},
         {"excluded_leaves", o.excluded.size()},
         {"stats", stats},
         {"verified_depth", o.verified_depth}};
  j["candidate"] = o.candidate ? to_json(*o.candidate) : Json();
  return j;
}

Json to_json(const EmbeddingCheck& c) {
  Json j{{"map", to_json(c.map)}, {"status", to_string(c.status)}, {"depth", c.depth}, {"origin", c.origin}};
  if (c.witness) {
    j["witness"] = to_json(*c.witness);
    j["witness_cover_depth"] = c.witness_cover_depth;
  }
  return j;
}

Json to_json(const DioReport& r) {
  Json gammas = Json::array();
  for (const auto& g : r.gammas) gammas.push_back(gamma_str(g));
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"N", row.N},
                        {"margin", to_json(row.margin)},
                        {"exact_zero", row.exact_zero},
                        {"argmin", row.argmin},
                        {"threshold", to_json(row.threshold)},
                        {"status", to_string(row.status)}});
  }
  return Json{{"condition", r.kind == DioKind::MixedSign ? "D" : "d"},
              {"gammas", gammas},
              {"c", to_json(r.c)},
              {"n_max", r.n_max},
              {"precision", r.precision},
              {"rows", rows},
              {"violations", r.violations()},
              {"undecided", r.undecided()},
              {"all_pass", r.all_pass()}};
}

Json to_json(const ThetaReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"n", row.n},
           {"k", row.k},
           {"ii", row.ii.str()},
           {"jj", row.jj.str()},
           {"chi", to_json(row.chi)},
           {"renormalized", to_json(row.renormalized)},
           {"norm", to_json(row.norm)},
           {"theta", to_json(row.theta)},
           {"extension", row.extension.str()},
           {"adjusted_floor", to_json(row.adjusted_floor)},
           {"z_ratio", to_json(row.z_ratio)},
           {"exploratory", row.exploratory}};
    j["increment"] = row.increment ? to_json(*row.increment) : Json();
    rows.push_back(std::move(j));
  }
  Json lambda = Json::array();
  for (const auto& l : r.lambda) lambda.push_back(to_json(l));
  return Json{{"start_level", r.start_level},
              {"lambda", lambda},
              {"jj_nested", r.jj_nested},
              {"extension_bound", r.extension_bound},
              {"max_extension", r.max_extension},
              {"increments_in_lambda", r.increments_in_lambda},
              {"gap_bound", r.gap_bound},
              {"max_gap", r.max_gap},
              {"e0_floor", to_json(r.floor.value)},
              {"floor_holds", r.floor_holds},
              {"failures", r.failures},
              {"rows", rows}};
}

Json to_json(const MultiRotation& o) {
  Json thetas = Json::array();
  for (const auto& t : o.thetas) thetas.push_back(to_json(t));
  return Json{{"theta0", to_json(o.theta0)}, {"choices", o.choices}, {"N", o.choices.size()}, {"thetas", thetas}};
}

Json to_json(const BoxDimEstimate& e) {
  Json rows = Json::array();
  for (const auto& r : e.rows) rows.push_back(Json{{"r", decimal(Scalar(Rational::from_double(r.scale)))}, {"cov", r.count}});
  return Json{{"covers", rows}, {"slope", decimal(Scalar(Rational::from_double(e.slope)))}};
}

Json to_json(const AtomicMeasure& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) {
    Json x = Json::array();
    for (const auto& c : a.x) x.push_back(to_json(c));
    atoms.push_back(Json{{"x", x}, {"weight", to_json(a.weight)}});
  }
  return Json{{"dim", mu.dim()}, {"atoms", atoms}};
}

Json to_json(const DyadicCell& cell) { return Json{{"level", cell.level}, {"k", cell.k}}; }

std::string decimal(const Scalar& s) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", s.exact() ? s.rational().to_double() : s.enclosure().mid());
  return buf;
}

std::string dio_csv(const DioReport& r) {
  std::string out = "N,margin_lo,margin_hi,scaled_lo,status\n";
  for (const auto& row : r.rows) {
    // margin N^c = margin / threshold
    const Enclosure scaled = row.margin / row.threshold;
    out += std::to_string(row.N) + "," + row.margin.lo_str() + "," + row.margin.hi_str() + "," + scaled.lo_str() +
           "," + to_string(row.status) + "\n";
  }
  return out;
}

std::string theta_csv(const ThetaReport& r) {
  std::string out = "n,k,jj_len,theta,norm\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.n) + "," + std::to_string(row.k) + "," + std::to_string(row.jj.size()) + "," +
           decimal(row.theta) + "," + decimal(Scalar(row.norm)) + "\n";
  }
  return out;
}

std::string orbit_csv(const MultiRotation& o) {
  std::string out = "n,theta_lo,theta_hi\n";
  for (std::size_t n = 0; n < o.thetas.size(); ++n) {
    const Enclosure e = o.thetas[n].enclosure();
    out += std::to_string(n) + "," + e.lo_str() + "," + e.hi_str() + "\n";
  }
  return out;
}

std::string atoms_csv(const AtomicMeasure& mu) {
  std::string out;
  for (int c = 0; c < mu.dim(); ++c) out += "x" + std::to_string(c) + ",";
  out += "weight\n";
  for (const auto& a : mu.atoms()) {
    for (const auto& c : a.x) out += c.str() + ",";
    out += a.weight.str() + "\n";
  }
  return out;
}

std::string cover_csv(const BoxDimEstimate& e) {
  std::string out = "r,cov\n";
  for (const auto& r : e.rows) out += decimal(Scalar(Rational::from_double(r.scale))) + "," + std::to_string(r.count) + "\n";
  return out;
}

}  // namespace selfsim
