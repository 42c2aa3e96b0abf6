#include "cfa/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cfa::io {

namespace {

Rational rational_field(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

long integer_field(const Json& j, const char* key) {
  const Json& v = member(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer");
  return v.get<long>();
}

void check_schema(const Json& j) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  if (j.contains("schema") && j.at("schema") != kSchema) throw ParseError("unsupported schema " + j.at("schema").dump());
}

Json interval_pair(const Interval& I) { return Json::array({to_string(I.a), to_string(I.b)}); }

std::vector<Interval> interval_list(const Json& j) {
  if (!j.is_array()) throw ParseError("intervals must be an array");
  std::vector<Interval> out;
  for (const Json& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("interval must be a pair [a, b]");
    Interval I{rational_field(pair[0]), rational_field(pair[1])};
    if (I.b < I.a) throw ParseError("interval endpoints out of order");
    out.push_back(std::move(I));
  }
  return out;
}

Json claim(const std::string& what, const Ball& target, const CertifiedReal& measured, bool pass) {
  Json c;
  c["claim"] = what;
  c["target"] = to_json(target);
  c["measured"] = to_json(measured);
  c["pass"] = pass;
  return c;
}

}  // namespace

Json to_json(const TrigPoly& p) {
  Json coeffs = Json::array();
  for (const auto& [n, c] : p.coeffs()) coeffs.push_back({{"n", n}, {"re", to_string(c.re)}, {"im", to_string(c.im)}});
  Json j;
  j["schema"] = kSchema;
  j["coeffs"] = std::move(coeffs);
  return j;
}

TrigPoly trigpoly_from_json(const Json& j) {
  check_schema(j);
  const Json& coeffs = member(j, "coeffs");
  if (!coeffs.is_array()) throw ParseError("coeffs must be an array");
  TrigPoly::Coeffs out;
  for (const Json& c : coeffs) {
    const long n = integer_field(c, "n");
    QComplex v(c.contains("re") ? rational_field(c.at("re")) : Rational(0),
               c.contains("im") ? rational_field(c.at("im")) : Rational(0));
    if (out.count(n)) throw ParseError("duplicate frequency " + std::to_string(n));
    out[n] = v;
  }
  return TrigPoly(out);
}

Json to_json(const CertifiedReal& x) {
  const int digits = static_cast<int>(std::ceil(x.value.precision() * 0.30103)) + 2;
  Json j;
  j["value"] = x.value.to_string(digits);
  j["radius"] = to_string(x.radius);
  return j;
}

Json to_json(const Ball& x) { return to_json(CertifiedReal::from_ball(x)); }

CertifiedReal certified_from_json(const Json& j) {
  const Json& v = member(j, "value");
  if (!v.is_string()) throw ParseError("value must be a decimal string");
  CertifiedReal out;
  if (mpfr_set_str(out.value.get(), v.get<std::string>().c_str(), 10, MPFR_RNDN) != 0)
    throw ParseError("malformed decimal " + v.dump());
  out.radius = rational_field(member(j, "radius"));
  if (out.radius < 0) throw ParseError("negative radius");
  return out;
}

Json to_json(const IntervalSet& G) {
  Json list = Json::array();
  for (const Interval& I : G.intervals()) list.push_back(interval_pair(I));
  Json j;
  j["schema"] = kSchema;
  j["intervals"] = std::move(list);
  return j;
}

IntervalSet interval_set_from_json(const Json& j) {
  check_schema(j);
  for (const Interval& I : interval_list(member(j, "intervals")))
    if (I.a < -1 || I.b > 1) throw ParseError("interval outside [-1, 1]");
  return IntervalSet(interval_list(j.at("intervals")));
}

Json to_json(const ArcSet& F) {
  Json arcs = Json::array();
  for (const Arc& a : F.arcs()) arcs.push_back({{"t1", to_string(a.t1)}, {"t2", to_string(a.t2)}});
  Json j;
  j["schema"] = kSchema;
  j["arcs"] = std::move(arcs);
  j["total"] = to_string(F.total());
  return j;
}

ArcSet arc_set_from_json(const Json& j) {
  check_schema(j);
  const Json& arcs = member(j, "arcs");
  if (!arcs.is_array()) throw ParseError("arcs must be an array");
  std::vector<Arc> out;
  for (const Json& a : arcs) out.push_back({rational_field(member(a, "t1")), rational_field(member(a, "t2"))});
  try {
    return ArcSet(std::move(out));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const KKCertificate& c) {
  Json j;
  j["schema"] = kSchema;
  j["bound_target"] = to_json(c.bound_target);
  j["measured_min"] = to_json(c.measured_min);
  j["sup_norm"] = to_json(c.sup_norm);
  j["degree"] = c.degree;
  j["r0"] = to_string(c.r0);
  j["N"] = c.N;
  j["rotation"] = to_string(c.rotation);
  j["passes"] = c.passes();
  return j;
}

Json to_json(const AeModulus& eta, long k_max, long m_max) {
  Json rows = Json::array();
  for (const auto& row : eta.table(k_max, m_max)) rows.push_back({row[0], row[1], row[2]});
  Json j;
  j["schema"] = kSchema;
  j["eta"] = std::move(rows);
  j["provenance"] = eta.provenance();
  return j;
}

SchnorrTest schnorr_test_from_json(const Json& j) {
  check_schema(j);
  if (j.contains("kind")) {
    if (j.at("kind") != "rational_point") throw ParseError("unknown test kind " + j.at("kind").dump());
    const Rational t0 = rational_field(member(j, "t0"));
    if (abs(t0) > Rational(7, 8)) throw ParseError("rational_point needs |t0| <= 7/8");
    return SchnorrTest::rational_point(t0);
  }
  const Json& levels = member(j, "levels");
  if (!levels.is_array() || levels.empty()) throw ParseError("levels must be a non-empty array");
  std::vector<std::vector<Interval>> out(levels.size());
  std::vector<bool> seen(levels.size(), false);
  for (const Json& level : levels) {
    const long n = integer_field(level, "n");
    if (n < 0 || n >= static_cast<long>(levels.size()) || seen[n]) throw ParseError("levels must be numbered 0..L-1");
    seen[n] = true;
    out[n] = interval_list(member(level, "intervals"));
  }
  return SchnorrTest::from_levels(std::move(out));
}

CauchyName name_from_json(const Json& j) {
  check_schema(j);
  const Rational p = j.contains("p") ? rational_field(j.at("p")) : Rational(2);
  if (j.contains("terms")) {
    std::vector<TrigPoly> terms;
    for (const Json& t : j.at("terms")) terms.push_back(trigpoly_from_json(t));
    if (terms.empty()) throw ParseError("terms must be non-empty");
    return CauchyName::from_terms(std::move(terms), p);
  }
  const Json& gen = member(j, "generator");
  if (gen == "geometric") return CauchyName::geometric();
  if (gen == "constant") return CauchyName::constant(trigpoly_from_json(member(j, "poly")), p);
  throw ParseError("unknown generator " + gen.dump());
}

Json to_json(const Schedule& s) {
  Json cells = Json::array();
  for (const ScheduleCell& c : s.cells) {
    Json cell;
    cell["n"] = c.n;
    cell["k"] = c.k;
    cell["pairing"] = c.pairing;
    cell["r"] = c.r;
    cell["empty"] = c.empty;
    if (!c.empty) cell["spectrum"] = {c.lo, c.hi};
    cell["G"] = to_json(c.G)["intervals"];
    cells.push_back(std::move(cell));
  }
  Json j;
  j["schema"] = kSchema;
  j["pairing"] = s.pairing;
  j["cells"] = std::move(cells);
  return j;
}

Json to_json(const AssemblyReport& r) {
  const Ball eighth = Ball(1) / (Ball(8) * Ball::pi());
  Json cells = Json::array();
  for (const CellReport& c : r.cells) {
    Json cell;
    cell["n"] = c.n;
    cell["k"] = c.k;
    cell["pairing"] = c.pairing;
    cell["indices"] = {c.j_first, c.j_last};
    cell["G"] = to_json(c.G)["intervals"];
    cell["lebesgue_upper"] = to_string(c.G.lebesgue_upper());
    cell["measure_bound"] = "2^-" + std::to_string(1L << (c.n + c.k));
    cell["measure_ok"] = c.measure_ok;
    cell["empty"] = c.empty;
    if (!c.empty) {
      const Ball scale = Ball::from_rational(pow2(-(c.n + c.k + 1)));
      cell["certificate"] = to_json(c.certificate);
      cell["claims"] = {claim("scaled_min > 1/(8 pi)", eighth, c.scaled_min, c.scaled_ok),
                        claim("scaled_sup < 2^-(n+k+1)", scale, c.scaled_sup, c.sup_ok)};
    }
    cells.push_back(std::move(cell));
  }
  Json j;
  j["schema"] = kSchema;
  j["n_max"] = r.n_max;
  j["k_max"] = r.k_max;
  j["uniform_tail"] = to_string(r.uniform_tail);
  j["all_pass"] = r.all_pass();
  j["cells"] = std::move(cells);
  return j;
}

Json to_json(const GapResult& g) {
  Json j;
  j["schema"] = kSchema;
  j["captured"] = g.captured;
  if (g.captured) {
    j["n"] = g.n;
    j["k"] = g.k;
    j["M"] = g.M;
    j["N"] = g.N;
    j["claim"] = claim("|S_N f(t0) - S_M f(t0)| > 1/(8 pi)", Ball(1) / (Ball(8) * Ball::pi()), g.gap, g.exceeds);
  }
  j["exceeds"] = g.exceeds;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace cfa::io
