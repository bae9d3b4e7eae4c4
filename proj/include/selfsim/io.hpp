#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "selfsim/arithmetic.hpp"
#include "selfsim/embedding.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/measures.hpp"
#include "selfsim/orbits.hpp"
#include "selfsim/renorm.hpp"

namespace selfsim {

using Json = nlohmann::json;

// Rationals as "p/q" strings, enclosures as {"lo": decimal, "hi": decimal}.
Json to_json(const Rational& q);
Json to_json(const Enclosure& e);
Json to_json(const Scalar& s);
Json to_json(const AffineMap1D& f);
Json to_json(const IFSystem& ifs);
Json to_json(const DyadicSquare& c);

Rational rational_from_json(const Json& j);
// A string (rational or finite decimal), an integer, or {"lo", "hi"}.
Scalar scalar_from_json(const Json& j, int precision = default_precision());
IFSystem ifs_from_json(const Json& j, int precision = default_precision());
DyadicSquare square_from_json(const Json& j);

// The TOML subset used by configs: comments, blank lines, key = value pairs with
// string, integer, boolean or inline-table values, [table] headers and
// [[array]] headers one level deep. Anything else is rejected.
Json parse_toml_subset(std::string_view text);

// JSON when the text starts with '{', the TOML subset otherwise.
Json parse_config_text(std::string_view text);
Json load_config(const std::filesystem::path& path);
IFSystem load_ifs(const std::filesystem::path& path, int precision = default_precision());

// "log2", "-log(4/3)", "1/2" (a constant) as exact log-linear forms; anything
// else is read as a real via parse_real and kept as an enclosure.
Gamma parse_gamma(std::string_view text, int precision = default_precision());
// A rational or decimal, or "log(p)/log(q)" (exact when the quotient is rational).
Scalar parse_real(std::string_view text, int precision = default_precision());
// "a,b" as the map x -> a x + b.
AffineMap1D parse_map(std::string_view text);
// Comma separated list, blanks trimmed, empty items rejected.
std::vector<std::string> split_list(std::string_view text);

// 16 hex digits of FNV-1a over the text.
std::string fnv1a_hex(std::string_view text);
// Digest of the canonical (sorted-key, compact) serialization.
std::string config_digest(const Json& config);

Json to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);
Json to_json(const CertifyOutcome& outcome);
Json to_json(const EmbeddingCheck& check);
Json to_json(const DioReport& report);
Json to_json(const ThetaReport& report);
Json to_json(const MultiRotation& orbit);
Json to_json(const BoxDimEstimate& estimate);
Json to_json(const AtomicMeasure& mu);
Json to_json(const DyadicCell& cell);

// CSV exports, header line first.
std::string dio_csv(const DioReport& report);        // N, margin bounds, margin N^c lower bound
std::string theta_csv(const ThetaReport& report);    // n, k, |jj|, theta, |M f|
std::string orbit_csv(const MultiRotation& orbit);   // n, theta bounds
std::string atoms_csv(const AtomicMeasure& mu);      // coordinates, weight
std::string cover_csv(const BoxDimEstimate& estimate);

// Decimal rendering with 17 significant digits; enclosures by their midpoint.
std::string decimal(const Scalar& s);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace selfsim
