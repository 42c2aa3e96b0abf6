#include "cfa/disc.hpp"

#include "mp_util.hpp"

#include <cmath>
#include <utility>

namespace cfa {

using detail::mag_of;
using detail::rounding_error;

namespace {

double mid_mag(mpfr_srcptr re, mpfr_srcptr im) { return round_up(std::hypot(mag_of(re), mag_of(im))); }

}  // namespace

Disc::Disc(mpfr_prec_t prec) {
  mpfr_inits2(prec, re_, im_, t1_, t2_, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(re_, 1);
  mpfr_set_zero(im_, 1);
}

Disc::Disc(const Disc& other) : Disc(other.precision()) {
  mpfr_set(re_, other.re_, MPFR_RNDN);
  mpfr_set(im_, other.im_, MPFR_RNDN);
  rad = other.rad;
}

Disc::Disc(Disc&& other) noexcept : Disc(MPFR_PREC_MIN) {
  mpfr_swap(re_, other.re_);
  mpfr_swap(im_, other.im_);
  mpfr_swap(t1_, other.t1_);
  mpfr_swap(t2_, other.t2_);
  rad = other.rad;
}

Disc& Disc::operator=(const Disc& other) {
  if (this != &other) {
    if (precision() != other.precision()) {
      mpfr_set_prec(re_, other.precision());
      mpfr_set_prec(im_, other.precision());
      mpfr_set_prec(t1_, other.precision());
      mpfr_set_prec(t2_, other.precision());
    }
    mpfr_set(re_, other.re_, MPFR_RNDN);
    mpfr_set(im_, other.im_, MPFR_RNDN);
    rad = other.rad;
  }
  return *this;
}

Disc& Disc::operator=(Disc&& other) noexcept {
  mpfr_swap(re_, other.re_);
  mpfr_swap(im_, other.im_);
  mpfr_swap(t1_, other.t1_);
  mpfr_swap(t2_, other.t2_);
  std::swap(rad, other.rad);
  return *this;
}

Disc::~Disc() { mpfr_clears(re_, im_, t1_, t2_, static_cast<mpfr_ptr>(nullptr)); }

void Disc::set_zero() {
  mpfr_set_zero(re_, 1);
  mpfr_set_zero(im_, 1);
  rad = 0.0;
}

void Disc::set_one() {
  mpfr_set_ui(re_, 1, MPFR_RNDN);
  mpfr_set_zero(im_, 1);
  rad = 0.0;
}

void Disc::set(const QComplex& q) {
  int a = mpfr_set_q(re_, q.re.get_mpq_t(), MPFR_RNDN);
  int b = mpfr_set_q(im_, q.im.get_mpq_t(), MPFR_RNDN);
  rad = round_up(rounding_error(re_, a) + rounding_error(im_, b));
}

void Disc::set(const CBall& z) {
  int a = mpfr_set(re_, z.re.mid().get(), MPFR_RNDN);
  int b = mpfr_set(im_, z.im.mid().get(), MPFR_RNDN);
  rad = round_up(z.re.rad() + z.im.rad() + rounding_error(re_, a) + rounding_error(im_, b));
}

void Disc::set(const Disc& z) {
  int a = mpfr_set(re_, z.re_, MPFR_RNDN);
  int b = mpfr_set(im_, z.im_, MPFR_RNDN);
  rad = round_up(z.rad + rounding_error(re_, a) + rounding_error(im_, b));
}

void Disc::set_cis(const Ball& t) {
  int tt = mpfr_sin_cos(im_, re_, t.mid().get(), MPFR_RNDN);
  double e = 0.0;
  if (tt != 0) e = rounding_error(re_, 1) + rounding_error(im_, 1);
  rad = round_up(t.rad() + e);
}

CBall Disc::to_cball() const {
  Real r(precision()), i(precision());
  mpfr_set(r.get(), re_, MPFR_RNDN);
  mpfr_set(i.get(), im_, MPFR_RNDN);
  return {Ball::from_real(r, rad), Ball::from_real(i, rad)};
}

double Disc::mag() const { return round_up(mid_mag(re_, im_) + rad); }

double Disc::mig() const {
  double x = std::fabs(mpfr_get_d(re_, MPFR_RNDZ));
  double y = std::fabs(mpfr_get_d(im_, MPFR_RNDZ));
  double h = std::hypot(x, y) * (1.0 - 0x1p-50);
  double v = std::nextafter(h - rad, -INFINITY);
  return v > 0 ? v : 0.0;
}

void Disc::add(const Disc& a) {
  int x = mpfr_add(re_, re_, a.re_, MPFR_RNDN);
  int y = mpfr_add(im_, im_, a.im_, MPFR_RNDN);
  rad = round_up(rad + a.rad + rounding_error(re_, x) + rounding_error(im_, y));
}

void Disc::sub(const Disc& a) {
  int x = mpfr_sub(re_, re_, a.re_, MPFR_RNDN);
  int y = mpfr_sub(im_, im_, a.im_, MPFR_RNDN);
  rad = round_up(rad + a.rad + rounding_error(re_, x) + rounding_error(im_, y));
}

void Disc::mul(const Disc& a) {
  double m_this = mid_mag(re_, im_);
  double m_a = mid_mag(a.re_, a.im_);
  int x = mpfr_fmms(t1_, re_, a.re_, im_, a.im_, MPFR_RNDN);
  int y = mpfr_fmma(t2_, re_, a.im_, im_, a.re_, MPFR_RNDN);
  mpfr_swap(re_, t1_);
  mpfr_swap(im_, t2_);
  double prop = round_up(m_this * a.rad + m_a * rad + rad * a.rad);
  rad = round_up(prop + rounding_error(re_, x) + rounding_error(im_, y));
}

void Disc::addmul(const Disc& a, const Disc& b) {
  int x = mpfr_fmms(t1_, a.re_, b.re_, a.im_, b.im_, MPFR_RNDN);
  int y = mpfr_fmma(t2_, a.re_, b.im_, a.im_, b.re_, MPFR_RNDN);
  double e = rounding_error(t1_, x) + rounding_error(t2_, y);
  x = mpfr_add(re_, re_, t1_, MPFR_RNDN);
  y = mpfr_add(im_, im_, t2_, MPFR_RNDN);
  e += rounding_error(re_, x) + rounding_error(im_, y);
  double ma = mid_mag(a.re_, a.im_);
  double mb = mid_mag(b.re_, b.im_);
  double prop = round_up(ma * b.rad + mb * a.rad + a.rad * b.rad);
  rad = round_up(rad + prop + e);
}

void Disc::mul_real(mpfr_srcptr s, double s_rad) {
  double m_this = mid_mag(re_, im_);
  double ms = mag_of(s);
  int x = mpfr_mul(re_, re_, s, MPFR_RNDN);
  int y = mpfr_mul(im_, im_, s, MPFR_RNDN);
  double prop = round_up(m_this * s_rad + ms * rad + rad * s_rad);
  rad = round_up(prop + rounding_error(re_, x) + rounding_error(im_, y));
}

void Disc::mul_i() {
  mpfr_swap(re_, im_);
  mpfr_neg(re_, re_, MPFR_RNDN);
}

void Disc::conj() { mpfr_neg(im_, im_, MPFR_RNDN); }

void Disc::widen(double e) { rad = round_up(rad + e); }

}  // namespace cfa
