#include "cfa/io.hpp"
#include "cfa/kahane.hpp"
#include "cfa/maximal.hpp"
#include "cfa/schnorr.hpp"
#include "cfa/trigpoly.hpp"
#include "suites.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace cfa;
using io::Json;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;
constexpr int kNotCaptured = 3;

struct Common {
  long precision = 128;
  std::string out = ".";
  std::uint64_t seed = 1;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string out_path(const Common& c, const std::string& file) {
  std::filesystem::create_directories(c.out);
  return (std::filesystem::path(c.out) / file).string();
}

Rational parse_arg_rational(const std::string& s, const char* what) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string("malformed ") + what + " \"" + s + "\"");
  }
}

std::string csv_number(const Real& x) { return x.to_string(20); }

// Radius of a printed value: the enclosure radius plus the 20-digit print error.
double csv_radius(double rad, double re, double im) { return round_up(rad + (std::fabs(re) + std::fabs(im)) * 1e-19); }

std::string csv_row(long N, const CBall& v) {
  char rad[40];
  std::snprintf(rad, sizeof rad, "%.17g", csv_radius(v.re.rad() + v.im.rad(), v.re.to_double(), v.im.to_double()));
  return std::to_string(N) + "," + csv_number(v.re.mid()) + "," + csv_number(v.im.mid()) + "," + rad + "\n";
}

void write_csv(const std::string& path, const std::vector<std::string>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "N,re,im,radius\n";
  for (const std::string& r : rows) out << r;
}

Json report(const std::string& command, Json parameters, Json outputs, Json certificates, double seconds) {
  Json j;
  j["schema"] = io::kSchema;
  j["command"] = command;
  j["parameters"] = std::move(parameters);
  j["outputs"] = std::move(outputs);
  j["certificates"] = std::move(certificates);
  j["wall_time"] = seconds;
  return j;
}

Json bound_claim(const std::string& what, const std::string& relation, const Json& target, const Json& measured,
                 bool pass) {
  return {{"claim", what}, {"relation", relation}, {"target", target}, {"measured", measured}, {"pass", pass}};
}

int cmd_kk(const Common& c, const std::string& input, Json& rep) {
  IntervalSet G = io::interval_set_from_json(io::read_json_file(input));
  if (G.empty()) throw io::ParseError("G is empty");
  Json outputs = Json::array(), certs = Json::array();
  int code = kOk;
  KKCertificate cert;
  try {
    auto [p, ok] = build_p(G);
    cert = ok;
    const std::string p_path = out_path(c, "p.json");
    io::write_json_file(p_path, io::to_json(p));
    outputs.push_back(p_path);
  } catch (const CertificateError& e) {
    std::cerr << "cfa kk: " << e.what() << "\n";
    cert = e.certificate();
    code = kFailed;
  }
  const std::string cert_path = out_path(c, "certificate.json");
  io::write_json_file(cert_path, io::to_json(cert));
  outputs.push_back(cert_path);
  const Json cj = io::to_json(cert);
  certs.push_back(bound_claim("||p||_inf < 1", "<", io::to_json(Ball(1)), cj["sup_norm"],
                              certainly_less(cert.sup_norm.to_ball(), Ball(1))));
  certs.push_back(bound_claim("min_G |S_N p| >= -(1/4pi) ln a", ">=", cj["bound_target"], cj["measured_min"],
                              cert.passes()));
  rep["outputs"] = outputs;
  rep["certificates"] = certs;
  rep["parameters"]["N"] = cert.N;
  return code;
}

int cmd_diverge(const Common& c, const std::string& input, const std::string& grid, const std::string& t0_text,
                Json& rep) {
  const Json spec = io::read_json_file(input);
  SchnorrTest test = io::schnorr_test_from_json(spec);
  long n_max = 0, k_max = 0;
  {
    char comma = 0;
    std::istringstream g(grid);
    if (!(g >> n_max >> comma >> k_max) || comma != ',' || n_max < 0 || k_max < 0 || !g.eof())
      throw UsageError("--grid expects n_max,k_max");
  }
  Rational t0;
  if (!t0_text.empty()) {
    t0 = parse_arg_rational(t0_text, "--t0");
  } else if (spec.contains("t0")) {
    t0 = parse_rational(spec.at("t0").get<std::string>());
  } else {
    throw UsageError("--t0 is required for this test");
  }
  if (t0 < -1 || t0 > 1) throw UsageError("--t0 must lie in [-1, 1]");

  Assembly A = assemble_divergence(test, n_max, k_max);
  Json outputs = Json::array(), certs = Json::array();
  const std::string f_path = out_path(c, "f.json"), s_path = out_path(c, "schedule.json");
  io::write_json_file(f_path, io::to_json(A.f));
  io::write_json_file(s_path, io::to_json(A.schedule));

  std::set<long> floors;
  for (long n = 0; n <= n_max; ++n) floors.insert(cantor_pair(n, 0));
  Json gaps = Json::array();
  bool captured = true, exceeds = true;
  for (long floor : floors) {
    GapResult g = verify_gap(A.f, A.schedule, t0, floor);
    Json gj = io::to_json(g);
    gj["N_floor"] = floor;
    gaps.push_back(gj);
    if (floor == 0) captured = g.captured;
    if (g.captured) {
      exceeds = exceeds && g.exceeds;
      certs.push_back(gj["claim"]);
    }
  }
  Json report_json = io::to_json(A.report);
  report_json["t0"] = to_string(t0);
  report_json["gaps"] = gaps;
  const std::string r_path = out_path(c, "report.json");
  io::write_json_file(r_path, report_json);

  std::vector<std::string> rows;
  TrigPolyEvaluator ev(A.f);
  const std::vector<Disc> sums = ev.partial_sums(pi_times(t0));
  for (long N = 0; N <= A.f.degree(); ++N) {
    if (ev.is_zero() || N >= static_cast<long>(sums.size())) {
      rows.push_back(csv_row(N, CBall()));
    } else {
      rows.push_back(csv_row(N, sums[N].to_cball()));
    }
  }
  const std::string csv_path = out_path(c, "partial_sums.csv");
  write_csv(csv_path, rows);

  for (const Json& cell : report_json["cells"])
    if (cell.contains("claims"))
      for (const Json& cl : cell["claims"]) certs.push_back(cl);
  rep["outputs"] = {f_path, s_path, r_path, csv_path};
  rep["certificates"] = certs;
  rep["parameters"]["t0"] = to_string(t0);
  if (!captured) {
    std::cerr << "cfa diverge: t0 = " << to_string(t0) << " is not captured by any cell\n";
    return kNotCaptured;
  }
  return A.report.all_pass() && exceeds ? kOk : kFailed;
}

int cmd_fejer(const Common& c, const std::string& input, const std::string& t0_text, long n_max, long depth,
              Json& rep) {
  if (n_max < 0) throw UsageError("--nmax must be >= 0");
  const Rational t0 = parse_arg_rational(t0_text, "--t0");
  const Json in = io::read_json_file(input);
  std::vector<std::string> rows;
  if (in.contains("coeffs")) {
    TrigPoly p = io::trigpoly_from_json(in);
    const Ball t = pi_times(t0);
    for (long N = 0; N <= n_max; ++N) rows.push_back(csv_row(N, eval(cesaro_mean(p, N), t)));
  } else {
    if (!in.contains("kind") || in.at("kind") != "lsc" || !in.contains("test"))
      throw io::ParseError("expected a TrigPoly or {\"kind\":\"lsc\",\"test\":{...}}");
    if (depth < 1) throw UsageError("--depth must be >= 1");
    IntegralTest T = lsc_from_null_cover(io::schnorr_test_from_json(in.at("test")));
    for (const auto& [N, v] : cesaro_divergence_demo(T, t0, n_max, depth)) rows.push_back(csv_row(N, CBall(v.to_ball())));
    rep["parameters"]["depth"] = depth;
  }
  const std::string path = out_path(c, "fejer.csv");
  write_csv(path, rows);
  rep["outputs"] = {path};
  rep["parameters"]["t0"] = to_string(t0);
  rep["parameters"]["N_max"] = n_max;
  return kOk;
}

int cmd_carleson(const Common& c, const std::string& input, const std::string& t0_text, Json& rep) {
  const Rational t0 = parse_arg_rational(t0_text, "--t0");
  TrigPoly p = io::trigpoly_from_json(io::read_json_file(input));
  const Ball t = pi_times(t0);
  Ball m = carleson_max(p, t);
  std::vector<std::string> rows;
  for (long N = 0; N <= p.degree(); ++N) rows.push_back(csv_row(N, eval(partial_sum(p, N), t)));
  const std::string csv_path = out_path(c, "carleson.csv");
  write_csv(csv_path, rows);
  Json value;
  value["schema"] = io::kSchema;
  value["t0"] = to_string(t0);
  value["max_N_abs_S_N"] = io::to_json(m);
  const std::string json_path = out_path(c, "carleson.json");
  io::write_json_file(json_path, value);
  rep["outputs"] = {json_path, csv_path};
  rep["parameters"]["t0"] = to_string(t0);
  return kOk;
}

int cmd_verify(const Common& c, const std::string& suite, bool write, Json& rep) {
  suites::SuiteResult r;
  try {
    r = suites::run_suite(suite, c.seed);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Json certs = Json::array();
  for (const suites::Claim& cl : r.claims)
    certs.push_back(bound_claim(cl.name, cl.relation, io::to_json(cl.target), io::to_json(cl.measured), cl.pass));
  rep["certificates"] = certs;
  rep["pass"] = r.pass();
  if (!r.error.empty()) rep["error"] = r.error;
  rep["parameters"]["criterion"] = r.number;
  if (write) {
    const std::string path = out_path(c, "verify_" + suite + ".json");
    rep["outputs"] = {path};
    rep["wall_time"] = r.seconds;
    io::write_json_file(path, rep);
  }
  return r.pass() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified Fourier analysis: constructions, certificates and verification suites"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--precision", common.precision, "working precision in bits")->check(CLI::Range(53L, 100000L));
  auto* out_opt = app.add_option("--out", common.out, "output directory");
  app.add_option("--seed", common.seed, "seed for randomized suites");

  std::string input, grid = "1,1", t0_text, suite;
  std::string fejer_t0 = "0";
  long n_max = 64, depth = 6;

  auto* kk = app.add_subcommand("kk", "Kahane-Katznelson polynomial for a closed set G");
  kk->add_option("G", input, "IntervalSet JSON")->required();

  auto* diverge = app.add_subcommand("diverge", "assemble a divergent series for a Schnorr test");
  diverge->add_option("test", input, "SchnorrTest JSON")->required();
  diverge->add_option("--grid", grid, "n_max,k_max");
  diverge->add_option("--t0", t0_text, "point p/q in units of pi");

  auto* fejer = app.add_subcommand("fejer", "Cesaro means of a TrigPoly or an integral test");
  fejer->add_option("input", input, "TrigPoly or integral test JSON")->required();
  fejer->add_option("--t0", fejer_t0, "point p/q in units of pi");
  fejer->add_option("--nmax", n_max, "largest N");
  fejer->add_option("--depth", depth, "terms of the integral test");

  auto* carleson = app.add_subcommand("carleson", "max_N |S_N p(t0)| and the partial sums");
  carleson->add_option("input", input, "TrigPoly JSON")->required();
  carleson->add_option("--t0", fejer_t0, "point p/q in units of pi");

  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("suite", suite, "parseval, harmonic, taylor, kahane, divergence, lemma32, integral, theorem54, fejer")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  PrecisionScope scope(common.precision);
  const auto start = std::chrono::steady_clock::now();
  CLI::App* sub = app.get_subcommands().front();
  Json rep = report(sub->get_name(), {{"precision", common.precision}, {"seed", common.seed}}, Json::array(),
                    Json::array(), 0);
  if (!input.empty()) rep["parameters"]["input"] = input;
  int code = kOk;
  try {
    if (sub == kk) code = cmd_kk(common, input, rep);
    if (sub == diverge) {
      rep["parameters"]["grid"] = grid;
      code = cmd_diverge(common, input, grid, t0_text, rep);
    }
    if (sub == fejer) code = cmd_fejer(common, input, fejer_t0, n_max, depth, rep);
    if (sub == carleson) code = cmd_carleson(common, input, fejer_t0, rep);
    if (sub == verify) {
      rep["parameters"]["suite"] = suite;
      code = cmd_verify(common, suite, out_opt->count() > 0, rep);
    }
  } catch (const UsageError& e) {
    std::cerr << "cfa " << sub->get_name() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "cfa " << sub->get_name() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "cfa " << sub->get_name() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "cfa " << sub->get_name() << ": " << e.what() << "\n";
    return kFailed;
  }
  if (sub != verify || out_opt->count() == 0)
    rep["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << rep.dump(2) << "\n";
  return code;
}
