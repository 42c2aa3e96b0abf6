#include "cfa/kahane.hpp"

#include "mp_util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace cfa {

namespace {

using detail::upper_double;

const double kPiUp = 3.1415926535897936;
const double kPiDown = 3.1415926535897927;

void require_measure(const IntervalSet& G) {
  const Rational a = G.normalized_measure();
  if (!(a > 0 && a < 1)) throw std::invalid_argument("G must have measure strictly between 0 and 2 pi");
}

Rational grid_round(mpfr_srcptr x, long bits) {
  Real scaled(mpfr_get_prec(x) + 8);
  mpfr_mul_2si(scaled.get(), x, bits, MPFR_RNDN);
  mpfr_round(scaled.get(), scaled.get());
  return scaled.to_rational() * pow2(-bits);
}

// Largest power of two not above a positive rational.
Rational power_of_two_below(const Rational& x) {
  long e = std::lround(std::floor(std::log2(x.get_d())));
  while (pow2(e) > x) --e;
  while (pow2(e + 1) <= x) ++e;
  return pow2(e);
}

// Rational lower bound on a^{3/4} on the grid 2^-64.
Rational three_quarter_power_lower(const Rational& a) {
  PrecisionScope scope(160);
  Real x, y;
  mpfr_set_q(x.get(), a.get_mpq_t(), MPFR_RNDD);
  mpfr_pow_si(y.get(), x.get(), 3, MPFR_RNDD);
  mpfr_rootn_ui(y.get(), y.get(), 4, MPFR_RNDD);
  mpfr_mul_2si(y.get(), y.get(), 64, MPFR_RNDD);
  mpfr_floor(y.get(), y.get());
  return y.to_rational() * pow2(-64);
}

Ball from_doubles(double lo, double hi) {
  Ball l = Ball::from_double(lo), h = Ball::from_double(hi);
  return Ball::from_endpoints(l.mid(), h.mid());
}

// Pieces of G after rotation, with the cover margin.
struct Cover {
  Rational rotation;
  IntervalSet rotated;
  ArcSet F;
  Rational margin;
};

Cover make_cover(const IntervalSet& G) {
  require_measure(G);
  Cover out;
  out.rotation = kahane_rotation(G);
  out.rotated = G.rotated(out.rotation);
  const auto& pieces = out.rotated.intervals();
  const Rational a = G.normalized_measure();
  const Rational a34 = three_quarter_power_lower(a);
  // extra length (units of pi) the cover may add
  const Rational budget = 2 * (a34 - a);
  if (!(budget > pow2(-60))) throw InfeasibleError("measure of G too close to 2 pi for a cover of measure a^{3/4}");

  // fill the shortest internal gaps with up to half the budget
  const std::size_t count = pieces.size();
  std::vector<std::size_t> order(count > 0 ? count - 1 : 0);
  std::iota(order.begin(), order.end(), 0);
  auto gap = [&](std::size_t i) { return pieces[i + 1].a - pieces[i].b; };
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return gap(i) < gap(j); });
  std::vector<bool> merged(order.size(), false);
  Rational filled;
  for (std::size_t i : order) {
    if (filled + gap(i) > budget / 2) break;
    filled += gap(i);
    merged[i] = true;
  }
  std::vector<Interval> comps;
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0 && merged[i - 1]) {
      comps.back().b = pieces[i].b;
    } else {
      comps.push_back(pieces[i]);
    }
  }
  // half the remaining budget, so that a' < a^{3/4} strictly
  Rational m = (budget - filled) / (4 * long(comps.size()));
  m = std::min<Rational>(m, (comps.front().a + 1) / 3);
  m = std::min<Rational>(m, (1 - comps.back().b) / 3);
  for (std::size_t i = 0; i + 1 < comps.size(); ++i) m = std::min<Rational>(m, (comps[i + 1].a - comps[i].b) / 3);
  out.margin = power_of_two_below(m);
  std::vector<Arc> arcs;
  for (const Interval& c : comps) arcs.push_back({c.a - out.margin, c.b + out.margin});
  out.F = ArcSet(std::move(arcs));
  if (out.F.total() > a34) throw std::logic_error("cover exceeds a^{3/4}");
  return out;
}

// Adaptive certification of a lower bound on a quantity Q(q(t)) over unions of
// intervals (units of pi). Cells are accepted once their lower bound exceeds the
// target and are split otherwise, down to a minimum width.
struct Scan {
  bool ok = true;
  double lower = std::numeric_limits<double>::infinity();
  double sample = std::numeric_limits<double>::infinity();
};

struct CellValue {
  double lower;
  double sample;
};

template <class Quantity>
Scan scan_cells(const TrigPoly& q, const std::vector<Interval>& pieces, double target, Quantity quantity) {
  TrigPolyEvaluator ev(q);
  const double d2 = ev.d2();
  const long per_unit = std::max<long>(8, 2 * ev.degree());
  const Rational min_width = pow2(-44);
  const std::size_t budget = 1u << 21;
  std::size_t used = 0;
  Scan out;
  std::vector<Interval> stack;
  for (const Interval& piece : pieces) {
    const long n0 = std::max<long>(1, std::lround(std::ceil(piece.length().get_d() * double(per_unit))));
    for (long i = n0 - 1; i >= 0; --i) {
      stack.push_back({piece.a + piece.length() * ratio(i, n0), piece.a + piece.length() * ratio(i + 1, n0)});
    }
  }
  while (!stack.empty()) {
    Interval cell = stack.back();
    stack.pop_back();
    ++used;
    const Rational c = (cell.a + cell.b) / 2;
    const double h = round_up(kPiUp * upper_double(cell.length() / 2));
    TrigPolyEvaluator::Jet j = ev.jet(pi_times(c));
    const double re = mpfr_get_d(j.value.re(), MPFR_RNDN), im = mpfr_get_d(j.value.im(), MPFR_RNDN);
    const double conv = 0x1p-52 * (std::fabs(re) + std::fabs(im));
    const double err = round_up(j.value.rad + conv + round_up(j.derivative.mag() * h) + round_up(d2 * h * h / 2));
    const double center_err = round_up(j.value.rad + conv);
    CellValue v = quantity(re, im, err, center_err);
    out.sample = std::min(out.sample, v.sample);
    if (v.lower > target) {
      out.lower = std::min(out.lower, v.lower);
    } else if (cell.length() > min_width && used < budget) {
      const Rational mid = (cell.a + cell.b) / 2;
      stack.push_back({mid, cell.b});
      stack.push_back({cell.a, mid});
    } else {
      out.lower = std::min(out.lower, v.lower);
      out.ok = false;
    }
  }
  return out;
}

double down(double x) { return std::nextafter(x, -INFINITY); }

CellValue real_part_bound(double re, double, double err, double center_err) {
  return {down(re - err), re + center_err};
}

CellValue neg_abs_imag_bound(double, double im, double err, double center_err) {
  return {-round_up(std::fabs(im) + err), -down(std::fabs(im) - center_err)};
}

CellValue modulus_bound(double re, double im, double err, double center_err) {
  const double m = std::hypot(re, im);
  return {down(m * (1 - 0x1p-50) - err), round_up(m * (1 + 0x1p-50) + center_err)};
}

// Re psi(r0 zeta) > target for zeta on the rotated G, certified on ball cells.
bool certify_r0(const PsiHandle& psi, const Rational& r0, const Ball& target) {
  const Ball r = Ball::from_rational(r0);
  const double goal = target.upper_d();
  std::size_t used = 0;
  std::vector<Interval> stack;
  for (const Interval& piece : psi.G_rotated.intervals()) {
    for (long i = 7; i >= 0; --i) {
      stack.push_back({piece.a + piece.length() * ratio(i, 8), piece.a + piece.length() * ratio(i + 1, 8)});
    }
  }
  while (!stack.empty()) {
    Interval cell = stack.back();
    stack.pop_back();
    if (++used > (1u << 18)) return false;
    const Rational c = (cell.a + cell.b) / 2;
    // a failing center rules the candidate out
    if (psi.value(cis(pi_times(c)) * r).re.upper_d() <= goal) return false;
    Ball t = pi_times(c);
    t.add_error(round_up(kPiUp * upper_double(cell.length() / 2)));
    bool certified = false;
    try {
      certified = psi.value(cis(t) * r).re.lower_d() > goal;
    } catch (const std::domain_error&) {
      // the cell enclosure of omega_hat is too wide for the logarithm
    }
    if (certified) continue;
    if (cell.length() < pow2(-30)) return false;
    stack.push_back({c, cell.b});
    stack.push_back({cell.a, c});
  }
  return true;
}

Rational find_r0(const PsiHandle& psi) {
  const Ball target = Ball(-5) / Ball(8) * log(Ball::from_rational(psi.a));
  for (long j = 1; j <= 40; ++j) {
    for (const Rational& d : {pow2(-j), Rational(3 * pow2(-j - 2))}) {
      if (certify_r0(psi, 1 - d, target)) return 1 - d;
    }
  }
  throw CertificateError("no r0 certifies Re psi(r0 zeta) >= -(5/8) ln a on G", KKCertificate{});
}

// Truncation index from Cauchy estimates on |z| = rho, maximized over rho in (r0, 1):
// |psi| <= M(rho) with |Re psi| <= max(L, ln(1 + s L / pi) - ln a'), L = ln((1+rho)/(1-rho)),
// and |Im psi| < pi/2, so sum_{n > N} |c_n| r0^n <= M q^{N+1} / (1 - q), q = r0/rho.
long cauchy_truncation(const PsiHandle& psi, const Rational& r0, double eps) {
  const double r = r0.get_d();
  const double s = double(psi.F.size());
  const double ln_ap = -std::log(psi.a_prime.get_d());
  long best = std::numeric_limits<long>::max();
  for (int i = 1; i <= 16; ++i) {
    const double rho = 1 - (1 - r) * std::ldexp(1.0, -i);
    const double L = std::log((1 + rho) / (1 - rho));
    const double A = std::max(L, std::log1p(s * L / kPiDown) + ln_ap);
    const double M = std::hypot(A, kPiUp / 2) * (1 + 1e-9);
    const double q = r / rho;
    const double n = std::ceil(std::log(eps * (1 - q) / M) / std::log(q));
    if (n < double(best)) best = std::max<long>(1, long(n));
  }
  return best;
}

TrigPoly assemble_R(const std::vector<CBall>& c, const Rational& r0, const Rational& rotation, long N) {
  const mpfr_prec_t prec = working_precision() + 64;
  PrecisionScope scope(prec);
  Real rn(prec), r(prec);
  mpfr_set_q(r.get(), r0.get_mpq_t(), MPFR_RNDN);
  mpfr_set_ui(rn.get(), 1, MPFR_RNDN);
  TrigPoly::Coeffs coeffs;
  Disc term(prec), rot(prec);
  for (long n = 1; n <= N; ++n) {
    mpfr_mul(rn.get(), rn.get(), r.get(), MPFR_RNDN);
    term.set(c[n]);
    term.mul_real(rn.get(), 0.0);
    // the coefficient of e_n in the original frame picks up e^{i n pi rotation}
    rot.set_cis(pi_times(Rational(n) * rotation));
    term.mul(rot);
    QComplex q(grid_round(term.re(), 80), grid_round(term.im(), 80));
    if (!q.is_zero()) coeffs[n] = q;
  }
  return TrigPoly(coeffs);
}

Rational sup_tolerance() { return Rational(1, 256); }

}  // namespace

bool KKCertificate::passes() const {
  return measured_min.lower_d() >= bound_target.upper_d() && sup_norm.upper_d() < 1.0;
}

const Rational& kahane_pi() { return pi_upper(); }

Rational kahane_rotation(const IntervalSet& G) {
  require_measure(G);
  std::vector<Interval> gaps = G.circle_gaps();
  const Interval* best = &gaps.front();
  for (const Interval& g : gaps) {
    if (g.length() > best->length()) best = &g;
  }
  Rational rho = 1 - (best->a + best->b) / 2;
  while (rho > 1) rho -= 2;
  while (rho <= -1) rho += 2;
  return rho;
}

ArcSet choose_cover(const IntervalSet& G) { return make_cover(G).F; }

CBall PsiHandle::value(const CBall& z) const {
  return log(hat_omega(z, F)) - CBall(log(Ball::from_rational(a_prime)));
}

std::vector<CBall> PsiHandle::taylor(long n_max) const {
  if (n_max < 0) throw std::invalid_argument("taylor expects n_max >= 0");
  const mpfr_prec_t prec = working_precision() + 64;
  PrecisionScope scope(prec);
  std::vector<CBall> b = hat_omega_taylor(F, n_max);
  std::vector<Disc> bd(n_max + 1, Disc(prec)), kc(n_max + 1, Disc(prec));
  for (long n = 0; n <= n_max; ++n) {
    bd[n].set(b[n].midpoint());
    bd[n].rad = 0;
  }
  std::vector<CBall> out(n_max + 1);
  out[0] = CBall(Ball());
  Real inv(prec), scale(prec);
  Disc acc(prec);
  for (long n = 1; n <= n_max; ++n) {
    // n c_n b_0 = n b_n - sum_{0<k<n} k c_k b_{n-k}
    acc.set_zero();
    for (long k = 1; k < n; ++k) acc.addmul(kc[k], bd[n - k]);
    Disc c(prec);
    c.set(bd[n]);
    mpfr_set_si(scale.get(), n, MPFR_RNDN);
    c.mul_real(scale.get(), 0.0);
    c.sub(acc);
    mpfr_mul_si(inv.get(), bd[0].re(), n, MPFR_RNDN);
    mpfr_ui_div(inv.get(), 1, inv.get(), MPFR_RNDN);
    c.mul_real(inv.get(), 0.0);
    c.rad = 0;
    out[n] = c.to_cball();
    kc[n].set(c);
    kc[n].mul_real(scale.get(), 0.0);
    kc[n].rad = 0;
  }
  return out;
}

PsiHandle build_psi(const IntervalSet& G) {
  Cover cover = make_cover(G);
  PsiHandle psi;
  psi.F = cover.F;
  psi.a = G.normalized_measure();
  psi.a_prime = cover.F.total();
  psi.rotation = cover.rotation;
  psi.delta = cover.margin;
  psi.G_rotated = cover.rotated;

  if (!psi.value(CBall(Ball())).contains_zero()) throw CertificateError("psi(0) != 0", KKCertificate{});
  const Ball half_pi = Ball::pi() / Ball(2);
  const Ball re_target = Ball(-3) / Ball(4) * log(Ball::from_rational(psi.a));
  auto check_imag = [&](const CBall& v) {
    if (!certainly_less(abs(v.im), half_pi)) throw CertificateError("|Im psi| < pi/2 fails on a sample", KKCertificate{});
  };
  for (const Interval& piece : psi.G_rotated.intervals()) {
    for (long i = 0; i <= 64; ++i) {
      CBall v = psi.value(cis(pi_times(piece.a + piece.length() * ratio(i, 64))));
      check_imag(v);
      if (!certainly_less_equal(re_target, v.re)) {
        throw CertificateError("Re psi >= -(3/4) ln a fails on a sample of G", KKCertificate{});
      }
    }
  }
  for (const Rational& r : {Rational(1, 4), Rational(1, 2), Rational(9, 10), Rational(99, 100)}) {
    for (long i = 0; i < 64; ++i) {
      CBall z = cis(pi_times(ratio(2 * i - 63, 64))) * Ball::from_rational(r);
      if (!hat_omega(z, psi.F).re.is_positive()) {
        throw CertificateError("Re omega_hat > 0 fails on a sample", KKCertificate{});
      }
      check_imag(psi.value(z));
    }
  }
  return psi;
}

std::pair<TrigPoly, KKCertificate> build_R(const IntervalSet& G) {
  PsiHandle psi = build_psi(G);
  const Rational r0 = find_r0(psi);
  const Ball ln_a = log(Ball::from_rational(psi.a));
  const Ball target = -ln_a / Ball(2);
  // slack between the r0 bound (5/8) and the R bound (1/2), and the Im margin pi/2
  const double eps = std::min(-ln_a.upper_d() / 8, 1.5) / 2;
  const long n_cauchy = std::min<long>(cauchy_truncation(psi, r0, eps), 20000);

  KKCertificate cert;
  cert.bound_target = target;
  cert.r0 = r0;
  cert.rotation = psi.rotation;
  std::vector<CBall> coeffs;
  long N = 16;
  while (true) {
    N = std::min(N, n_cauchy);
    if (long(coeffs.size()) <= N) coeffs = psi.taylor(std::max(N, 2 * long(coeffs.size())));
    TrigPoly R = assemble_R(coeffs, r0, psi.rotation, N);
    Scan re = scan_cells(R, G.intervals(), target.upper_d(), real_part_bound);
    Scan im = scan_cells(R, {{Rational(-1), Rational(1)}}, -kPiDown, neg_abs_imag_bound);
    cert.N = R.degree();
    cert.degree = R.degree();
    cert.measured_min = CertifiedReal::from_ball(from_doubles(re.lower, std::max(re.lower, re.sample)));
    const Ball pi = Ball::pi();
    Ball im_max = from_doubles(-im.sample, std::max(-im.sample, -im.lower)) / pi;
    cert.sup_norm = CertifiedReal::from_ball(im_max);
    if (re.ok && im.ok && cert.passes()) return {R, cert};
    if (N >= n_cauchy) break;
    N = (3 * N + 1) / 2;
  }
  throw CertificateError("R certificate fails at the a priori truncation index", cert);
}

std::pair<TrigPoly, KKCertificate> build_p(const IntervalSet& G) {
  auto [R, rcert] = build_R(G);
  const long N = R.degree();
  const Rational& Pi = kahane_pi();
  TrigPoly p = QComplex(1 / Pi) * R.imag_part().shifted(-N);

  // S_N(p) = e_{-N} R / (2 Pi i) = -i/(2 Pi) e_{-N} R
  if (!(partial_sum(p, N) == QComplex(0, -1 / (2 * Pi)) * R.shifted(-N))) {
    throw std::logic_error("S_N(p) identity fails");
  }
  if (!p.is_zero() && (p.min_frequency() < -2 * N || p.max_frequency() > 0)) {
    throw std::logic_error("spectrum of p outside [-2N, 0]");
  }

  KKCertificate cert;
  cert.bound_target = -log(Ball::from_rational(G.normalized_measure())) / (Ball(4) * Ball::pi());
  cert.r0 = rcert.r0;
  cert.N = N;
  cert.degree = p.degree();
  cert.rotation = rcert.rotation;
  Scan s = scan_cells(partial_sum(p, N), G.intervals(), cert.bound_target.upper_d(), modulus_bound);
  cert.measured_min = CertifiedReal::from_ball(from_doubles(s.lower, std::max(s.lower, s.sample)));
  cert.sup_norm = sup_norm_certificate(p, sup_tolerance());
  if (!s.ok || !cert.passes()) throw CertificateError("Kahane-Katznelson certificate fails", cert);
  return {p, cert};
}

}  // namespace cfa
