#include "cfa/ball.hpp"

#include "mp_util.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace cfa {

namespace {

thread_local mpfr_prec_t g_precision = 128;

using detail::mag_of;
using detail::rounding_error;

}  // namespace

class BallAccess {
 public:
  static Real& mid(Ball& b) { return b.mid_; }
  static double& rad(Ball& b) { return b.rad_; }
};

mpfr_prec_t working_precision() { return g_precision; }

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(g_precision) {
  if (bits < 53) throw std::invalid_argument("precision below 53 bits is not supported");
  g_precision = bits;
}

PrecisionScope::~PrecisionScope() { g_precision = saved_; }

double round_up(double x) {
  if (!(x > 0.0)) return x == 0.0 ? 0.0 : (std::isnan(x) ? INFINITY : x);
  return std::nextafter(x * (1.0 + 0x1p-50), INFINITY);
}

// ---------------------------------------------------------------- Real

Real::Real() : Real(g_precision) {}

Real::Real(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

std::string Real::to_string(int digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", digits, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

Rational Real::to_rational() const {
  if (!mpfr_number_p(v_)) throw std::domain_error("non-finite value has no rational form");
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, v_);
  Rational out(q);
  mpq_clear(q);
  return out;
}

// ---------------------------------------------------------------- Ball

Ball::Ball() = default;

Ball::Ball(long v) {
  int t = mpfr_set_si(mid_.get(), v, MPFR_RNDN);
  rad_ = rounding_error(mid_.get(), t);
}

Ball Ball::from_double(double v, double rad) {
  Ball b;
  int t = mpfr_set_d(b.mid_.get(), v, MPFR_RNDN);
  b.rad_ = round_up(rad + rounding_error(b.mid_.get(), t));
  return b;
}

Ball Ball::from_rational(const Rational& q) {
  Ball b;
  int t = mpfr_set_q(b.mid_.get(), q.get_mpq_t(), MPFR_RNDN);
  b.rad_ = rounding_error(b.mid_.get(), t);
  return b;
}

Ball Ball::from_real(const Real& mid, double rad) {
  Ball b;
  int t = mpfr_set(b.mid_.get(), mid.get(), MPFR_RNDN);
  b.rad_ = round_up(rad + rounding_error(b.mid_.get(), t));
  return b;
}

Ball Ball::from_endpoints(const Real& lo, const Real& hi) {
  if (mpfr_greater_p(lo.get(), hi.get())) throw std::invalid_argument("empty interval");
  Ball b;
  mpfr_add(b.mid_.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(b.mid_.get(), b.mid_.get(), 1, MPFR_RNDN);
  Real d1, d2;
  mpfr_sub(d1.get(), hi.get(), b.mid_.get(), MPFR_RNDU);
  mpfr_sub(d2.get(), b.mid_.get(), lo.get(), MPFR_RNDU);
  b.rad_ = std::max(d1.to_double(MPFR_RNDU), d2.to_double(MPFR_RNDU));
  if (b.rad_ < 0) b.rad_ = 0;
  return b;
}

Ball Ball::pi() {
  Ball b;
  int t = mpfr_const_pi(b.mid_.get(), MPFR_RNDN);
  b.rad_ = rounding_error(b.mid_.get(), t);
  return b;
}

Ball Ball::ln2() {
  Ball b;
  int t = mpfr_const_log2(b.mid_.get(), MPFR_RNDN);
  b.rad_ = rounding_error(b.mid_.get(), t);
  return b;
}

Real Ball::lower() const {
  Real r(std::max(mid_.precision(), g_precision));
  mpfr_sub_d(r.get(), mid_.get(), rad_, MPFR_RNDD);
  return r;
}

Real Ball::upper() const {
  Real r(std::max(mid_.precision(), g_precision));
  mpfr_add_d(r.get(), mid_.get(), rad_, MPFR_RNDU);
  return r;
}

double Ball::lower_d() const { return lower().to_double(MPFR_RNDD); }
double Ball::upper_d() const { return upper().to_double(MPFR_RNDU); }

double Ball::mag() const { return round_up(mag_of(mid_.get()) + rad_); }

double Ball::mig() const {
  double m = std::fabs(mpfr_get_d(mid_.get(), MPFR_RNDZ));
  double v = std::nextafter(m - rad_, -INFINITY);
  return v > 0 ? v : 0.0;
}

bool Ball::contains_zero() const { return !is_positive() && !is_negative(); }
bool Ball::is_positive() const { return mpfr_sgn(lower().get()) > 0; }
bool Ball::is_negative() const { return mpfr_sgn(upper().get()) < 0; }

Ball& Ball::add_error(double e) {
  if (e < 0) throw std::invalid_argument("negative error");
  rad_ = round_up(rad_ + e);
  return *this;
}

std::string Ball::to_string(int digits) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, " +/- %.3e", rad_);
  return mid_.to_string(digits) + buf;
}

Ball Ball::operator-() const {
  Ball b(*this);
  mpfr_neg(b.mid_.get(), b.mid_.get(), MPFR_RNDN);
  return b;
}

Ball& Ball::operator+=(const Ball& o) {
  int t = mpfr_add(mid_.get(), mid_.get(), o.mid_.get(), MPFR_RNDN);
  rad_ = round_up(rad_ + o.rad_ + rounding_error(mid_.get(), t));
  return *this;
}

Ball& Ball::operator-=(const Ball& o) {
  int t = mpfr_sub(mid_.get(), mid_.get(), o.mid_.get(), MPFR_RNDN);
  rad_ = round_up(rad_ + o.rad_ + rounding_error(mid_.get(), t));
  return *this;
}

Ball& Ball::operator*=(const Ball& o) {
  double ma = mag_of(mid_.get());
  double mb = mag_of(o.mid_.get());
  int t = mpfr_mul(mid_.get(), mid_.get(), o.mid_.get(), MPFR_RNDN);
  rad_ = round_up(ma * o.rad_ + mb * rad_ + rad_ * o.rad_ + rounding_error(mid_.get(), t));
  return *this;
}

Ball& Ball::operator/=(const Ball& o) {
  double denom = o.mig();
  if (!(denom > 0)) throw std::domain_error("division by a ball containing zero");
  int t = mpfr_div(mid_.get(), mid_.get(), o.mid_.get(), MPFR_RNDN);
  double q = mag_of(mid_.get());
  double prop = (rad_ + q * o.rad_) / std::nextafter(denom, 0.0);
  rad_ = round_up(prop + rounding_error(mid_.get(), t));
  return *this;
}

// ---------------------------------------------------------------- functions

namespace {

template <class F>
Ball monotone_increasing(const Ball& x, F&& f) {
  Real lo = x.lower();
  Real hi = x.upper();
  Real flo, fhi;
  f(flo.get(), lo.get(), MPFR_RNDD);
  f(fhi.get(), hi.get(), MPFR_RNDU);
  return Ball::from_endpoints(flo, fhi);
}

}  // namespace

Ball sqr(const Ball& x) {
  Real lo = x.lower();
  Real hi = x.upper();
  Real a, b;
  if (mpfr_sgn(lo.get()) >= 0) {
    mpfr_sqr(a.get(), lo.get(), MPFR_RNDD);
    mpfr_sqr(b.get(), hi.get(), MPFR_RNDU);
  } else if (mpfr_sgn(hi.get()) <= 0) {
    mpfr_sqr(a.get(), hi.get(), MPFR_RNDD);
    mpfr_sqr(b.get(), lo.get(), MPFR_RNDU);
  } else {
    Real c;
    mpfr_sqr(b.get(), lo.get(), MPFR_RNDU);
    mpfr_sqr(c.get(), hi.get(), MPFR_RNDU);
    mpfr_max(b.get(), b.get(), c.get(), MPFR_RNDU);
  }
  return Ball::from_endpoints(a, b);
}

Ball sqrt(const Ball& x) {
  if (x.is_negative()) throw std::domain_error("sqrt of a negative ball");
  Real lo = x.lower();
  Real hi = x.upper();
  if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
  Real a, b;
  mpfr_sqrt(a.get(), lo.get(), MPFR_RNDD);
  mpfr_sqrt(b.get(), hi.get(), MPFR_RNDU);
  return Ball::from_endpoints(a, b);
}

Ball exp(const Ball& x) { return monotone_increasing(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t m) { mpfr_exp(r, a, m); }); }

Ball log(const Ball& x) {
  if (!x.is_positive()) throw std::domain_error("log of a ball not bounded away from zero");
  return monotone_increasing(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t m) { mpfr_log(r, a, m); });
}

Ball sin(const Ball& x) {
  Ball out;
  Real& m = BallAccess::mid(out);
  int t = mpfr_sin(m.get(), x.mid().get(), MPFR_RNDN);
  BallAccess::rad(out) = round_up(x.rad() + rounding_error(m.get(), t));
  return out;
}

Ball cos(const Ball& x) {
  Ball out;
  Real& m = BallAccess::mid(out);
  int t = mpfr_cos(m.get(), x.mid().get(), MPFR_RNDN);
  BallAccess::rad(out) = round_up(x.rad() + rounding_error(m.get(), t));
  return out;
}

Ball atan2(const Ball& y, const Ball& x) {
  if (mpfr_sgn(x.lower().get()) <= 0 && y.contains_zero()) {
    throw std::domain_error("argument ball meets the branch cut");
  }
  Ball out;
  Real& m = BallAccess::mid(out);
  int t = mpfr_atan2(m.get(), y.mid().get(), x.mid().get(), MPFR_RNDN);
  Real h;
  mpfr_hypot(h.get(), x.mid().get(), y.mid().get(), MPFR_RNDD);
  double spread = round_up(std::hypot(x.rad(), y.rad()));
  double dist = std::nextafter(h.to_double(MPFR_RNDD) - spread, 0.0);
  if (!(dist > 0)) throw std::domain_error("argument ball contains zero");
  BallAccess::rad(out) = round_up(spread / dist + rounding_error(m.get(), t));
  return out;
}

Ball abs(const Ball& x) {
  if (x.is_positive()) return x;
  if (x.is_negative()) return -x;
  Real lo = x.lower();
  Real hi = x.upper();
  mpfr_abs(lo.get(), lo.get(), MPFR_RNDU);
  mpfr_max(hi.get(), hi.get(), lo.get(), MPFR_RNDU);
  return Ball::from_endpoints(Real(), hi);
}

Ball pow(const Ball& x, const Rational& q) {
  if (sgn(q) <= 0) throw std::invalid_argument("pow expects a positive exponent");
  if (x.is_negative()) throw std::domain_error("pow of a negative ball");
  Ball qb = Ball::from_rational(q);
  if (x.is_positive()) return exp(qb * log(x));
  Real hi = x.upper();
  if (mpfr_sgn(hi.get()) <= 0) return Ball();
  Ball top = exp(qb * log(Ball::from_real(hi)));
  return Ball::from_endpoints(Real(), top.upper());
}

Ball max(const Ball& a, const Ball& b) {
  Real lo = a.lower(), lo2 = b.lower(), hi = a.upper(), hi2 = b.upper();
  mpfr_max(lo.get(), lo.get(), lo2.get(), MPFR_RNDD);
  mpfr_max(hi.get(), hi.get(), hi2.get(), MPFR_RNDU);
  return Ball::from_endpoints(lo, hi);
}

Ball min(const Ball& a, const Ball& b) {
  Real lo = a.lower(), lo2 = b.lower(), hi = a.upper(), hi2 = b.upper();
  mpfr_min(lo.get(), lo.get(), lo2.get(), MPFR_RNDD);
  mpfr_min(hi.get(), hi.get(), hi2.get(), MPFR_RNDU);
  return Ball::from_endpoints(lo, hi);
}

Ball hull(const Ball& a, const Ball& b) {
  Real lo = a.lower(), lo2 = b.lower(), hi = a.upper(), hi2 = b.upper();
  mpfr_min(lo.get(), lo.get(), lo2.get(), MPFR_RNDD);
  mpfr_max(hi.get(), hi.get(), hi2.get(), MPFR_RNDU);
  return Ball::from_endpoints(lo, hi);
}

bool certainly_less(const Ball& a, const Ball& b) { return mpfr_less_p(a.upper().get(), b.lower().get()); }

bool certainly_less_equal(const Ball& a, const Ball& b) {
  return mpfr_lessequal_p(a.upper().get(), b.lower().get());
}

// ---------------------------------------------------------------- CBall

CBall CBall::from_qcomplex(const QComplex& z) { return {Ball::from_rational(z.re), Ball::from_rational(z.im)}; }

double CBall::rad() const { return round_up(std::hypot(re.rad(), im.rad())); }

CBall operator*(const CBall& a, const CBall& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CBall operator/(const CBall& a, const CBall& b) {
  Ball den = sqr(b.re) + sqr(b.im);
  CBall num = a * b.conj();
  return {num.re / den, num.im / den};
}

Ball abs(const CBall& z) { return sqrt(sqr(z.re) + sqr(z.im)); }

Ball arg(const CBall& z) { return atan2(z.im, z.re); }

CBall log(const CBall& z) { return {log(abs(z)), arg(z)}; }

CBall exp(const CBall& z) {
  Ball m = exp(z.re);
  CBall c = cis(z.im);
  return {c.re * m, c.im * m};
}

CBall cis(const Ball& t) {
  Ball c, s;
  Real& cm = BallAccess::mid(c);
  Real& sm = BallAccess::mid(s);
  int tt = mpfr_sin_cos(sm.get(), cm.get(), t.mid().get(), MPFR_RNDN);
  // mpfr_sin_cos packs both ternary values; treat any nonzero as inexact for both.
  double es = (tt & 3) ? rounding_error(sm.get(), 1) : 0.0;
  double ec = (tt >> 2) ? rounding_error(cm.get(), 1) : 0.0;
  BallAccess::rad(c) = round_up(t.rad() + ec);
  BallAccess::rad(s) = round_up(t.rad() + es);
  return {c, s};
}

}  // namespace cfa
