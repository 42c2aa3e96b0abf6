#include "cfa/trigpoly.hpp"

#include "mp_util.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace cfa {

using detail::upper_double;

namespace {

double abs_upper(const QComplex& c) { return round_up(std::sqrt(upper_double(c.norm()))); }

void canonicalize(TrigPoly::Coeffs& c) {
  for (auto it = c.begin(); it != c.end();) {
    if (it->second.is_zero()) {
      it = c.erase(it);
    } else {
      ++it;
    }
  }
}

// z^n for n >= 0 by repeated squaring.
Disc power(const Disc& z, long n) {
  Disc result(z.precision());
  result.set_one();
  Disc base(z);
  while (n > 0) {
    if (n & 1) result.mul(base);
    n >>= 1;
    if (n > 0) base.mul(base);
  }
  return result;
}

CertifiedReal certified_from_rationals(const Rational& center, const Rational& radius) {
  CertifiedReal out;
  int t = mpfr_set_q(out.value.get(), center.get_mpq_t(), MPFR_RNDN);
  Rational r = radius;
  if (t != 0) {
    Real diff(out.value.precision() + 64);
    mpfr_sub_q(diff.get(), out.value.get(), center.get_mpq_t(), MPFR_RNDA);
    r += abs(diff.to_rational());
  }
  out.radius = r;
  return out;
}

}  // namespace

// ---------------------------------------------------------------- TrigPoly

TrigPoly::TrigPoly(const Coeffs& coeffs) : coeffs_(coeffs) { canonicalize(coeffs_); }

TrigPoly TrigPoly::exponential(long n, const QComplex& c) {
  Coeffs m;
  m[n] = c;
  return TrigPoly(m);
}

QComplex TrigPoly::coeff(long n) const {
  auto it = coeffs_.find(n);
  return it == coeffs_.end() ? QComplex() : it->second;
}

long TrigPoly::degree() const {
  if (coeffs_.empty()) return 0;
  return std::max(std::labs(coeffs_.begin()->first), std::labs(coeffs_.rbegin()->first));
}

long TrigPoly::min_frequency() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
long TrigPoly::max_frequency() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

TrigPoly TrigPoly::shifted(long r) const {
  TrigPoly out;
  for (const auto& [n, c] : coeffs_) out.coeffs_.emplace(n + r, c);
  return out;
}

TrigPoly TrigPoly::conj() const {
  TrigPoly out;
  for (const auto& [n, c] : coeffs_) out.coeffs_.emplace(-n, c.conj());
  return out;
}

TrigPoly TrigPoly::real_part() const {
  TrigPoly s = *this + conj();
  return QComplex(Rational(1, 2)) * s;
}

TrigPoly TrigPoly::imag_part() const {
  // (p - conj p) / (2i) = -i/2 (p - conj p)
  TrigPoly d = *this - conj();
  return QComplex(0, Rational(-1, 2)) * d;
}

Rational TrigPoly::l2_norm_squared() const {
  Rational s = 0;
  for (const auto& [n, c] : coeffs_) s += c.norm();
  return s;
}

double TrigPoly::abs_sum_bound() const {
  double s = 0;
  for (const auto& [n, c] : coeffs_) s = round_up(s + abs_upper(c));
  return s;
}

double TrigPoly::derivative_bound() const {
  double s = 0;
  for (const auto& [n, c] : coeffs_) s = round_up(s + round_up(std::fabs(double(n)) * abs_upper(c)));
  return s;
}

double TrigPoly::second_derivative_bound() const {
  double s = 0;
  for (const auto& [n, c] : coeffs_) {
    double nn = double(n) * double(n);
    s = round_up(s + round_up(nn * abs_upper(c)));
  }
  return s;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  for (const auto& [n, c] : o.coeffs_) {
    auto [it, inserted] = coeffs_.emplace(n, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) { return *this += -o; }

TrigPoly operator-(const TrigPoly& a) {
  TrigPoly out;
  for (const auto& [n, c] : a.coeffs_) out.coeffs_.emplace(n, -c);
  return out;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
  TrigPoly::Coeffs m;
  for (const auto& [n, c] : a.coeffs_) {
    for (const auto& [k, d] : b.coeffs_) m[n + k] += c * d;
  }
  return TrigPoly(m);
}

TrigPoly operator*(const QComplex& s, const TrigPoly& p) {
  TrigPoly::Coeffs m;
  if (s.is_zero()) return TrigPoly();
  for (const auto& [n, c] : p.coeffs_) m.emplace(n, s * c);
  return TrigPoly(m);
}

// ---------------------------------------------------------------- CertifiedReal

CertifiedReal CertifiedReal::from_ball(const Ball& b) {
  CertifiedReal out;
  out.value = b.mid();
  out.radius = Rational(b.rad());
  return out;
}

Ball CertifiedReal::to_ball() const { return Ball::from_real(value, upper_double(radius)); }

double CertifiedReal::lower_d() const { return to_ball().lower_d(); }
double CertifiedReal::upper_d() const { return to_ball().upper_d(); }

// ---------------------------------------------------------------- evaluator

TrigPolyEvaluator::TrigPolyEvaluator(const TrigPoly& p) {
  if (p.is_zero()) return;
  lo_ = p.min_frequency();
  hi_ = p.max_frequency();
  degree_ = p.degree();
  d1_ = p.derivative_bound();
  d2_ = p.second_derivative_bound();
  coeffs_.reserve(static_cast<std::size_t>(hi_ - lo_ + 1));
  for (long n = lo_; n <= hi_; ++n) {
    Disc d;
    d.set(p.coeff(n));
    coeffs_.push_back(std::move(d));
  }
}

Disc TrigPolyEvaluator::value(const Ball& t) const {
  Disc acc;
  if (coeffs_.empty()) return acc;
  Disc z;
  z.set_cis(Ball::from_real(t.mid()));
  acc.set(coeffs_.back());
  for (long k = hi_ - lo_ - 1; k >= 0; --k) {
    acc.mul(z);
    acc.add(coeffs_[static_cast<std::size_t>(k)]);
  }
  if (lo_ != 0) {
    Disc zl = power(z, std::labs(lo_));
    if (lo_ < 0) zl.conj();
    acc.mul(zl);
  }
  acc.widen(round_up(t.rad() * d1_));
  return acc;
}

TrigPolyEvaluator::Jet TrigPolyEvaluator::jet(const Ball& t) const {
  Jet j{Disc(), Disc()};
  if (coeffs_.empty()) return j;
  Disc z;
  z.set_cis(Ball::from_real(t.mid()));
  Disc& b = j.value;
  Disc& d = j.derivative;
  b.set(coeffs_.back());
  d.set_zero();
  for (long k = hi_ - lo_ - 1; k >= 0; --k) {
    d.mul(z);
    d.add(b);
    b.mul(z);
    b.add(coeffs_[static_cast<std::size_t>(k)]);
  }
  // p = z^lo q and p' = i z^lo (lo q + z q').
  d.mul(z);
  Disc lq(b);
  Real lo_r(64);
  mpfr_set_si(lo_r.get(), lo_, MPFR_RNDN);
  lq.mul_real(lo_r.get(), 0.0);
  d.add(lq);
  d.mul_i();
  if (lo_ != 0) {
    Disc zl = power(z, std::labs(lo_));
    if (lo_ < 0) zl.conj();
    b.mul(zl);
    d.mul(zl);
  }
  b.widen(round_up(t.rad() * d1_));
  d.widen(round_up(t.rad() * d2_));
  return j;
}

std::vector<Disc> TrigPolyEvaluator::partial_sums(const Ball& t) const {
  std::vector<Disc> out;
  out.reserve(static_cast<std::size_t>(degree_ + 1));
  Disc s;
  auto coeff_at = [&](long n) -> const Disc* {
    if (coeffs_.empty() || n < lo_ || n > hi_) return nullptr;
    return &coeffs_[static_cast<std::size_t>(n - lo_)];
  };
  if (const Disc* c0 = coeff_at(0)) s.set(*c0);
  out.push_back(s);
  Disc z;
  z.set_cis(Ball::from_real(t.mid()));
  Disc pos;
  pos.set_one();
  Disc neg;
  for (long N = 1; N <= degree_; ++N) {
    pos.mul(z);
    if (const Disc* c = coeff_at(N)) s.addmul(*c, pos);
    if (const Disc* c = coeff_at(-N)) {
      neg.set(pos);
      neg.conj();
      s.addmul(*c, neg);
    }
    out.push_back(s);
  }
  if (t.rad() > 0) {
    for (auto& d : out) d.widen(round_up(t.rad() * d1_));
  }
  return out;
}

// ---------------------------------------------------------------- operations

Ball pi_times(const Rational& q) {
  if (sgn(q) == 0) return Ball();
  return Ball::pi() * Ball::from_rational(q);
}

CBall eval(const TrigPoly& p, const Ball& t) { return TrigPolyEvaluator(p).value(t).to_cball(); }

QComplex fourier_coeff(const TrigPoly& p, long n) { return p.coeff(n); }

TrigPoly partial_sum(const TrigPoly& p, long N) {
  if (N < 0) throw std::invalid_argument("partial_sum expects N >= 0");
  TrigPoly::Coeffs m;
  for (const auto& [n, c] : p.coeffs()) {
    if (std::labs(n) <= N) m.emplace(n, c);
  }
  return TrigPoly(m);
}

TrigPoly cesaro_mean(const TrigPoly& p, long N) {
  if (N < 0) throw std::invalid_argument("cesaro_mean expects N >= 0");
  TrigPoly::Coeffs m;
  for (const auto& [n, c] : p.coeffs()) {
    if (std::labs(n) > N) continue;
    Rational w = 1 - ratio(std::labs(n), N + 1);
    m.emplace(n, QComplex(w * c.re, w * c.im));
  }
  return TrigPoly(m);
}

namespace {

CertifiedReal root_of_enclosure(const Ball& integral, const Rational& exp) {
  if (!integral.is_positive()) {
    Real hi = integral.upper();
    if (mpfr_sgn(hi.get()) <= 0) return CertifiedReal{};
    Ball top = pow(Ball::from_real(hi), 1 / exp);
    Real up = top.upper();
    Rational u = up.to_rational();
    return certified_from_rationals(u / 2, u / 2);
  }
  return CertifiedReal::from_ball(pow(integral, 1 / exp));
}

struct LpCell {
  Rational a, b;  // pi units
  Ball lo_hi;     // enclosure of (1/2pi) int_cell |p|^e
  double width;
  bool operator<(const LpCell& o) const { return width < o.width; }
};

}  // namespace

CertifiedReal lp_norm(const TrigPoly& p, const Rational& exp, const Rational& tol) {
  if (exp < 1) throw std::invalid_argument("lp_norm expects exp >= 1");
  if (sgn(tol) <= 0) throw std::invalid_argument("lp_norm expects tol > 0");
  if (p.is_zero()) return CertifiedReal{};

  if (exp.get_den() == 1 && exp.get_num() % 2 == 0) {
    long k = exp.get_num().get_si() / 2;
    TrigPoly u = p * p.conj();
    TrigPoly acc = TrigPoly::exponential(0);
    for (long i = 0; i < k; ++i) acc = acc * u;
    Rational integral = acc.coeff(0).re;
    for (mpfr_prec_t prec = std::max<mpfr_prec_t>(working_precision(), 128);; prec *= 2) {
      PrecisionScope scope(prec);
      CertifiedReal r = CertifiedReal::from_ball(pow(Ball::from_rational(integral), 1 / exp));
      if (r.radius <= tol || prec > (1 << 16)) return r;
    }
  }

  // Composite midpoint rule with a second-derivative remainder on cells where
  // |p| stays away from 0, and a crude range bound elsewhere.
  TrigPolyEvaluator ev(p);
  const double d2 = ev.d2();
  const double e = exp.get_d();
  const double s = e / 2;
  const double pi_up = upper_double(pi_upper());

  auto cell_enclosure = [&](const Rational& a, const Rational& b) {
    Rational c = (a + b) / 2;
    double h = round_up(pi_up * upper_double((b - a) / 2));
    TrigPolyEvaluator::Jet j = ev.jet(pi_times(c));
    double P = round_up(j.value.mag() + round_up(j.derivative.mag() * h) + round_up(d2 * h * h / 2));
    double m = j.value.mig() - round_up(j.derivative.mag() * h) - round_up(d2 * h * h / 2);
    Ball weight = Ball::from_rational((b - a) / 2);  // (2h)/(2pi) in pi units
    if (m <= 0) {
      Ball range = Ball::from_endpoints(Real(), Ball::from_double(P).upper());
      return weight * pow(range, exp);
    }
    double D1 = round_up(j.derivative.mag() + d2 * h);
    double u_max = round_up(P * P);
    double u_min = m * m * (1 - 0x1p-50);
    double du = round_up(2 * D1 * P);
    double ddu = round_up(2 * D1 * D1 + 2 * d2 * P);
    double u_s2 = s - 2 >= 0 ? std::pow(u_max, s - 2) : std::pow(u_min, s - 2);
    double u_s1 = s - 1 >= 0 ? std::pow(u_max, s - 1) : std::pow(u_min, s - 1);
    double g2 = std::fabs(s * (s - 1)) * u_s2 * du * du + s * u_s1 * ddu;
    g2 = round_up(g2 * (1 + 0x1p-40));
    // midpoint error over the cell in normalized measure: (2h)^3/24 * g2 / (2pi)
    double err = round_up(8 * h * h * h / 24 * g2 / (2 * 3.14159265358979));
    Ball absval = abs(j.value.to_cball());
    Ball mid_val = weight * pow(absval, exp);
    return mid_val.add_error(err);
  };

  std::priority_queue<LpCell> cells;
  Ball total;
  const long initial = std::max<long>(64, 8 * ev.degree());
  for (long i = 0; i < initial; ++i) {
    Rational a = Rational(-1) + ratio(2 * i, initial);
    Rational b = Rational(-1) + ratio(2 * (i + 1), initial);
    Ball enc = cell_enclosure(a, b);
    total += enc;
    cells.push(LpCell{a, b, enc, enc.rad()});
  }
  const std::size_t budget = 1u << 18;
  std::size_t count = cells.size();
  while (true) {
    // Re-sum to avoid radius creep from repeated subtraction.
    CertifiedReal result = root_of_enclosure(total, exp);
    if (result.radius <= tol) return result;
    if (count >= budget) throw BudgetExceeded("lp_norm: cell budget exhausted", result);
    // refine the widest quarter of the queue in one sweep
    std::size_t sweep = std::max<std::size_t>(1, cells.size() / 4);
    std::vector<LpCell> split;
    for (std::size_t i = 0; i < sweep && !cells.empty(); ++i) {
      split.push_back(cells.top());
      cells.pop();
    }
    for (const auto& cell : split) {
      Rational m = (cell.a + cell.b) / 2;
      Ball e1 = cell_enclosure(cell.a, m);
      Ball e2 = cell_enclosure(m, cell.b);
      cells.push(LpCell{cell.a, m, e1, e1.rad()});
      cells.push(LpCell{m, cell.b, e2, e2.rad()});
      ++count;
    }
    std::vector<LpCell> all;
    total = Ball();
    while (!cells.empty()) {
      total += cells.top().lo_hi;
      all.push_back(cells.top());
      cells.pop();
    }
    for (auto& c : all) cells.push(std::move(c));
  }
}

namespace {

struct SupCell {
  Rational a, b;
  double upper;
  bool operator<(const SupCell& o) const { return upper < o.upper; }
};

}  // namespace

CertifiedReal sup_norm_certificate(const TrigPoly& p, const Rational& tol) {
  if (sgn(tol) <= 0) throw std::invalid_argument("sup_norm_certificate expects tol > 0");
  if (p.is_zero()) return CertifiedReal{};
  TrigPolyEvaluator ev(p);
  const double d2 = ev.d2();
  const double pi_up = upper_double(pi_upper());
  double best_lower = 0.0;

  // Small polynomials: branch and bound on the exact real polynomial u = |p|^2.
  const bool exact_square = p.coeffs().size() <= 128;
  TrigPolyEvaluator uev(exact_square ? p * p.conj() : TrigPoly());
  const double ud2 = uev.d2();

  auto make_cell = [&](const Rational& a, const Rational& b) {
    Rational c = (a + b) / 2;
    double h = round_up(pi_up * upper_double((b - a) / 2));
    if (exact_square) {
      TrigPolyEvaluator::Jet j = uev.jet(pi_times(c));
      const double u0 = round_up(detail::mag_of(j.value.re()) + j.value.rad);
      const double low = detail::mag_of(j.value.re()) - j.value.rad;
      if (low > 0) best_lower = std::max(best_lower, std::sqrt(low) * (1 - 0x1p-50));
      const double u_up = round_up(u0 + round_up(j.derivative.mag() * h) + round_up(ud2 * h * h / 2));
      return SupCell{a, b, round_up(std::sqrt(u_up))};
    }
    TrigPolyEvaluator::Jet j = ev.jet(pi_times(c));
    best_lower = std::max(best_lower, j.value.mig());
    const double p0 = j.value.mag();
    const double q0 = j.derivative.mag();
    const double first = round_up(p0 + round_up(q0 * h) + round_up(d2 * h * h / 2));
    // Second-order bound on u = |p|^2, whose derivative vanishes at the maximum:
    // u' = 2 Re(p' conj p), |u''| <= 2 |p'|^2 + 2 |p''| |p|.
    Disc w(j.derivative);
    Disc pc(j.value);
    pc.conj();
    w.mul(pc);
    const double du = round_up(2 * round_up(detail::mag_of(w.re()) + w.rad));
    const double q1 = round_up(q0 + d2 * h);
    const double m2 = round_up(2 * q1 * q1 + 2 * d2 * first);
    const double u_up = round_up(round_up(p0 * p0) + round_up(du * h) + round_up(m2 * h * h / 2));
    const double second = round_up(std::sqrt(u_up));
    return SupCell{a, b, std::min(first, second)};
  };

  std::priority_queue<SupCell> cells;
  const long initial = std::max<long>(64, 8 * ev.degree());
  for (long i = 0; i < initial; ++i) {
    cells.push(make_cell(Rational(-1) + ratio(2 * i, initial), Rational(-1) + ratio(2 * (i + 1), initial)));
  }
  const double tol_d = tol.get_d();
  const std::size_t budget = 1u << 22;
  std::size_t count = cells.size();
  while (true) {
    const SupCell top = cells.top();
    if (top.upper - best_lower <= 2 * tol_d * (1 - 0x1p-40) || count >= budget) {
      Rational lo(best_lower), hi(top.upper);
      CertifiedReal r = certified_from_rationals((lo + hi) / 2, (hi - lo) / 2);
      if (r.radius > tol) throw BudgetExceeded("sup_norm_certificate: tolerance not reached", r);
      return r;
    }
    cells.pop();
    Rational m = (top.a + top.b) / 2;
    cells.push(make_cell(top.a, m));
    cells.push(make_cell(m, top.b));
    ++count;
  }
}

Ball fejer_kernel(long N, const Ball& x) {
  if (N < 1) throw std::invalid_argument("fejer_kernel expects N >= 1");
  if (N == 1) return Ball(1);
  Ball two_pi = Ball(2) * Ball::pi();
  Real q;
  mpfr_div(q.get(), x.mid().get(), two_pi.mid().get(), MPFR_RNDN);
  mpfr_round(q.get(), q.get());
  Ball y = x - two_pi * Ball::from_real(q);
  const Ball n(N);
  if (y.mag() < 0x1p-30) {
    // 0 <= N - F_N(y) <= N (N^2 - 1) y^2 / 12 for every real y.
    Ball drop = Ball::from_rational(Rational(N) * (Rational(N) * N - 1) / 12) * sqr(Ball::from_double(y.mag()));
    Ball lower = n - drop;
    return Ball::from_endpoints(lower.lower(), n.upper());
  }
  Ball s = sin(y / Ball(2));
  if (s.contains_zero()) return Ball::from_endpoints(Real(), n.upper());
  Ball num = sin(n * y / Ball(2));
  Ball v = sqr(num) / (n * sqr(s));
  Real lo = v.lower(), hi = v.upper();
  if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
  if (mpfr_cmp_si(hi.get(), N) > 0) mpfr_set_si(hi.get(), N, MPFR_RNDU);
  return Ball::from_endpoints(lo, hi);
}

CBall indicator_coeff(const Rational& a, const Rational& b, long n) {
  if (a > b) throw std::invalid_argument("indicator_coeff expects a <= b");
  if (n == 0) return CBall(Ball::from_rational((b - a) / 2));
  // (e^{-ina} - e^{-inb}) / (2 pi i n)
  CBall ea = cis(pi_times(-n * a));
  CBall eb = cis(pi_times(-n * b));
  CBall d = ea - eb;
  Ball den = Ball(2) * Ball::pi() * Ball(n);
  // divide by i: (x + iy)/i = y - ix
  return CBall(d.im / den, -d.re / den);
}

Ball fejer_integral(long N, const Ball& a, const Ball& b) {
  if (N < 1) throw std::invalid_argument("fejer_integral expects N >= 1");
  Ball pi = Ball::pi();
  Ball out = (b - a) / (Ball(2) * pi);
  for (long n = 1; n < N; ++n) {
    Ball w = Ball::from_rational(1 - ratio(n, N));
    Ball nb(n);
    out += w * (sin(nb * b) - sin(nb * a)) / (pi * nb);
  }
  return out;
}

}  // namespace cfa
