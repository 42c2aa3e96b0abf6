#pragma once

// JSON forms of the library types. Every document carries "schema":"v1";
// rationals are strings "p/q" and angles are in units of pi.

#include "cfa/harmonic.hpp"
#include "cfa/intervals.hpp"
#include "cfa/kahane.hpp"
#include "cfa/modulus.hpp"
#include "cfa/names.hpp"
#include "cfa/schnorr.hpp"
#include "cfa/trigpoly.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace cfa::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "v1";

/// Malformed or out-of-schema input.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json to_json(const TrigPoly& p);
TrigPoly trigpoly_from_json(const Json& j);

/// {"value":"<decimal>","radius":"p/q"}; the decimal round-trips at the value's precision.
Json to_json(const CertifiedReal& x);
Json to_json(const Ball& x);
CertifiedReal certified_from_json(const Json& j);

/// {"intervals":[["a","b"],...]}.
Json to_json(const IntervalSet& G);
IntervalSet interval_set_from_json(const Json& j);

/// {"arcs":[{"t1":..,"t2":..}],"total":"p/q"}.
Json to_json(const ArcSet& F);
ArcSet arc_set_from_json(const Json& j);

Json to_json(const KKCertificate& c);

/// {"eta":[[k,m,value],...],"provenance":...}.
Json to_json(const AeModulus& eta, long k_max, long m_max);

/// {"kind":"rational_point","t0":"p/q"} or {"levels":[{"n":0,"intervals":[["a","b"],...]},...]}.
SchnorrTest schnorr_test_from_json(const Json& j);

/// {"terms":[TrigPoly,...],"p":"2"} or {"generator":"geometric"}.
CauchyName name_from_json(const Json& j);

Json to_json(const Schedule& s);
Json to_json(const AssemblyReport& r);
Json to_json(const GapResult& g);

/// Parses a file; ParseError on I/O or syntax errors.
Json read_json_file(const std::string& path);
/// Indented dump with a trailing newline.
void write_json_file(const std::string& path, const Json& j);

}  // namespace cfa::io
