#include "cfa/maximal.hpp"

#include "mp_util.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfa {

namespace {

// Upper bound on pi as a double, for cell widths and measure totals.
const double kPiUp = 3.1415926535897936;

struct Point {
  double re;
  double im;
  double rad;
};

Point to_point(const Disc& d) {
  double re = mpfr_get_d(d.re(), MPFR_RNDN), im = mpfr_get_d(d.im(), MPFR_RNDN);
  // conversion error is at most one ulp per component
  double err = 0x1p-52 * (std::fabs(re) + std::fabs(im));
  return {re, im, round_up(d.rad + err)};
}

double distance_upper(const Point& a, const Point& b) {
  return round_up(std::hypot(a.re - b.re, a.im - b.im) * (1 + 0x1p-50) + a.rad + b.rad);
}

double modulus_upper(const Point& a) { return round_up(std::hypot(a.re, a.im) * (1 + 0x1p-50) + a.rad); }

double modulus_lower(const Point& a) { return std::max(0.0, std::hypot(a.re, a.im) * (1 - 0x1p-50) - a.rad); }

// Cell i of the uniform grid on [-1, 1] (units of pi).
Rational cell_center(long i, long grid) { return Rational(-1) + ratio(2 * i + 1, grid); }

double cell_half_width(long grid) { return round_up(kPiUp / double(grid)); }

void require_grid(long grid) {
  if (grid < 2) throw std::invalid_argument("grid must be at least 2");
}

}  // namespace

void FeffermanConfig::validate() const {
  if (C < 1) throw std::invalid_argument("Fefferman constant must be a positive integer");
  if (!(p > 1)) throw std::invalid_argument("Fefferman exponent must exceed 1");
}

Ball carleson_max(const TrigPoly& p, const Ball& t) {
  if (p.is_zero()) return Ball();
  TrigPolyEvaluator ev(p);
  Ball best;
  bool first = true;
  for (const Disc& s : ev.partial_sums(t)) {
    Ball a = abs(s.to_cball());
    best = first ? a : max(best, a);
    first = false;
  }
  return best;
}

CertifiedReal maximal_l1_norm(const TrigPoly& p, long grid) {
  require_grid(grid);
  if (p.is_zero()) return CertifiedReal{};
  TrigPolyEvaluator ev(p);
  const double h = cell_half_width(grid);
  const double drift = round_up(ev.d1() * h);
  double lower = 0, upper = 0;
  for (long i = 0; i < grid; ++i) {
    double lo = 0, hi = 0;
    for (const Disc& s : ev.partial_sums(pi_times(cell_center(i, grid)))) {
      Point pt = to_point(s);
      lo = std::max(lo, modulus_lower(pt));
      hi = std::max(hi, modulus_upper(pt));
    }
    lower += std::max(0.0, lo - drift);
    upper += hi + drift;
  }
  // the double sums carry at most grid relative roundings each
  const double fuzz = 1 + 4 * double(grid) * 0x1p-53;
  Rational lo_q(lower / double(grid) / fuzz), hi_q(round_up(upper / double(grid) * fuzz));
  Rational mid = (lo_q + hi_q) / 2;
  CertifiedReal out;
  mpfr_set_q(out.value.get(), mid.get_mpq_t(), MPFR_RNDN);
  Rational back = out.value.to_rational();
  out.radius = (hi_q - lo_q) / 2 + abs(back - mid);
  return out;
}

Ball estimate_fefferman(const std::vector<TrigPoly>& samples, const Rational& exponent, long grid) {
  if (samples.empty()) throw std::invalid_argument("estimate_fefferman needs at least one sample");
  Ball best;
  bool first = true;
  for (const TrigPoly& f : samples) {
    if (f.is_zero()) throw std::invalid_argument("estimate_fefferman samples must be nonzero");
    Ball ratio = maximal_l1_norm(f, grid).to_ball() / lp_norm(f, exponent, Rational(1, 1000000000000L)).to_ball();
    best = first ? ratio : max(best, ratio);
    first = false;
  }
  return best;
}

long lemma32_index(const CauchyName& name, const FeffermanConfig& cfg, long k, long m) {
  cfg.validate();
  if (k < 0 || m < 0) throw std::invalid_argument("lemma32 arguments must be nonnegative");
  if (cfg.p > name.exponent()) {
    throw std::invalid_argument("the name converges in a weaker norm than the configured exponent");
  }
  const Rational threshold = pow2(-(m + k + 3)) / cfg.C;
  const bool exact = cfg.p == 2 && name.exponent() == 2 && name.tail_l2_squared(0).has_value();
  // the distance bound reaches any threshold by index m + k + 3 + log2 C
  const long cap = m + k + 3 + long(std::ceil(std::log2(double(cfg.C)))) + 64;
  for (long j = 0; j <= cap; ++j) {
    bool close = exact ? *name.tail_l2_squared(j) <= threshold * threshold : name.distance_bound(j) <= threshold;
    if (close) return j;
  }
  throw std::runtime_error("lemma32_index: name never reaches the threshold");
}

AeModulus lemma32_modulus(const CauchyName& name, const FeffermanConfig& cfg) {
  cfg.validate();
  return AeModulus([name, cfg](long k, long m) { return name.term(lemma32_index(name, cfg, k, m)).degree(); },
                   "fefferman-truncation");
}

double exceptional_measure_estimate(const TrigPoly& f_approx, long k, long N0, long Nmax, long grid, double slack) {
  require_grid(grid);
  if (N0 < 0 || Nmax < N0) throw std::invalid_argument("need 0 <= N0 <= Nmax");
  const double level = std::ldexp(1.0, -k);
  TrigPolyEvaluator ev(f_approx);
  const long deg = f_approx.degree();
  // S_N = f_approx for N >= deg, so the distinct indices are N0..min(Nmax, deg)
  const long lo = std::min(N0, deg), hi = std::min(Nmax, deg);
  const double drift = round_up(ev.d1() * cell_half_width(grid));
  long count = 0;
  for (long i = 0; i < grid; ++i) {
    bool hit = slack >= level;
    if (!hit && hi > lo && !f_approx.is_zero()) {
      auto sums = ev.partial_sums(pi_times(cell_center(i, grid)));
      std::vector<Point> pts;
      for (long N = lo; N <= hi; ++N) pts.push_back(to_point(sums[N]));
      for (std::size_t a = 0; a < pts.size() && !hit; ++a) {
        for (std::size_t b = a + 1; b < pts.size() && !hit; ++b) {
          hit = distance_upper(pts[a], pts[b]) + drift + slack >= level;
        }
      }
    }
    if (hit) ++count;
  }
  return round_up(2 * kPiUp * double(count) / double(grid));
}

double sequence_exceptional_measure(const std::vector<TrigPoly>& seq, long k, long grid, double slack) {
  require_grid(grid);
  const double level = std::ldexp(1.0, -k);
  const double h = cell_half_width(grid);
  std::vector<TrigPolyEvaluator> evs;
  for (const TrigPoly& p : seq) evs.emplace_back(p);
  long count = 0;
  for (long i = 0; i < grid; ++i) {
    Ball t = pi_times(cell_center(i, grid));
    std::vector<Point> pts;
    for (const auto& ev : evs) pts.push_back(to_point(ev.value(t)));
    bool hit = slack >= level && !seq.empty();
    for (std::size_t a = 0; a < pts.size() && !hit; ++a) {
      for (std::size_t b = a + 1; b < pts.size() && !hit; ++b) {
        hit = distance_upper(pts[a], pts[b]) + round_up((evs[a].d1() + evs[b].d1()) * h) + slack >= level;
      }
    }
    if (hit) ++count;
  }
  return round_up(2 * kPiUp * double(count) / double(grid));
}

double level_set_measure(const TrigPoly& h, double level, long grid) {
  require_grid(grid);
  TrigPolyEvaluator ev(h);
  const double drift = round_up(ev.d1() * cell_half_width(grid));
  long count = 0;
  for (long i = 0; i < grid; ++i) {
    if (modulus_upper(to_point(ev.value(pi_times(cell_center(i, grid))))) + drift >= level) ++count;
  }
  return double(count) / double(grid);
}

double maximal_level_set_measure(const TrigPoly& g, double level, long grid) {
  require_grid(grid);
  TrigPolyEvaluator ev(g);
  const double drift = round_up(ev.d1() * cell_half_width(grid));
  long count = 0;
  for (long i = 0; i < grid; ++i) {
    double hi = 0;
    for (const Disc& s : ev.partial_sums(pi_times(cell_center(i, grid)))) hi = std::max(hi, modulus_upper(to_point(s)));
    if (hi + drift > level) ++count;
  }
  return double(count) / double(grid);
}

}  // namespace cfa
