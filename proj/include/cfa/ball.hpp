#pragma once

// Midpoint-radius ("ball") arithmetic over MPFR.
//
// A Ball is a pair (mid, rad) with mid an MPFR number and rad a double; the
// represented quantity lies in [mid - rad, mid + rad]. Every operation rounds
// the midpoint to nearest and folds the rounding error plus the propagated
// input radii into an upward-rounded radius, so enclosures are never lost.

#include "cfa/rational.hpp"

#include <mpfr.h>

#include <string>

namespace cfa {

/// Working precision (bits) for newly created balls on this thread.
mpfr_prec_t working_precision();

/// Sets the working precision for the current thread until destruction.
class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// Rounds a nonnegative double upward by a few ulps; used on every radius.
double round_up(double x);

/// RAII owner of an mpfr_t.
class Real {
 public:
  Real();
  explicit Real(mpfr_prec_t prec);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }
  /// Decimal string with the given number of significant digits.
  std::string to_string(int digits = 20) const;
  Rational to_rational() const;

 private:
  mpfr_t v_;
};

class Ball {
 public:
  /// Exact zero.
  Ball();
  Ball(long v);
  Ball(int v) : Ball(static_cast<long>(v)) {}

  static Ball from_double(double v, double rad = 0.0);
  static Ball from_rational(const Rational& q);
  static Ball from_real(const Real& mid, double rad = 0.0);
  /// Smallest ball containing [lo, hi].
  static Ball from_endpoints(const Real& lo, const Real& hi);
  static Ball pi();
  static Ball ln2();

  const Real& mid() const { return mid_; }
  double rad() const { return rad_; }

  /// Rigorous lower/upper endpoints at working precision.
  Real lower() const;
  Real upper() const;
  double lower_d() const;
  double upper_d() const;
  /// Upper bound on |x| as a double.
  double mag() const;
  /// Lower bound on |x| as a double (0 if the ball contains zero).
  double mig() const;

  bool contains_zero() const;
  bool is_positive() const;
  bool is_negative() const;
  bool is_exact() const { return rad_ == 0.0; }

  /// Widens the radius by a nonnegative amount.
  Ball& add_error(double e);
  /// Drops the radius (used for heuristic, uncertified computations).
  Ball midpoint() const { return from_real(mid_); }

  double to_double() const { return mid_.to_double(); }
  std::string to_string(int digits = 20) const;

  Ball operator-() const;
  Ball& operator+=(const Ball& o);
  Ball& operator-=(const Ball& o);
  Ball& operator*=(const Ball& o);
  Ball& operator/=(const Ball& o);

  friend Ball operator+(Ball a, const Ball& b) { return a += b; }
  friend Ball operator-(Ball a, const Ball& b) { return a -= b; }
  friend Ball operator*(Ball a, const Ball& b) { return a *= b; }
  friend Ball operator/(Ball a, const Ball& b) { return a /= b; }

 private:
  Real mid_;
  double rad_ = 0.0;

  friend class BallAccess;
};

Ball sqr(const Ball& x);
Ball sqrt(const Ball& x);
Ball exp(const Ball& x);
Ball log(const Ball& x);
Ball sin(const Ball& x);
Ball cos(const Ball& x);
Ball atan2(const Ball& y, const Ball& x);
Ball abs(const Ball& x);
/// x^q for x >= 0 (radius clipped at 0) and rational q > 0.
Ball pow(const Ball& x, const Rational& q);
Ball max(const Ball& a, const Ball& b);
Ball min(const Ball& a, const Ball& b);
/// Interval hull.
Ball hull(const Ball& a, const Ball& b);

/// a < b holds for every pair of represented values.
bool certainly_less(const Ball& a, const Ball& b);
bool certainly_less_equal(const Ball& a, const Ball& b);

/// Complex ball: independent real and imaginary balls.
struct CBall {
  Ball re;
  Ball im;

  CBall() = default;
  CBall(Ball r, Ball i = Ball()) : re(std::move(r)), im(std::move(i)) {}
  static CBall from_qcomplex(const QComplex& z);

  CBall conj() const { return {re, -im}; }
  CBall midpoint() const { return {re.midpoint(), im.midpoint()}; }
  double rad() const;
  bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }

  friend CBall operator+(const CBall& a, const CBall& b) { return {a.re + b.re, a.im + b.im}; }
  friend CBall operator-(const CBall& a, const CBall& b) { return {a.re - b.re, a.im - b.im}; }
  friend CBall operator-(const CBall& a) { return {-a.re, -a.im}; }
  friend CBall operator*(const CBall& a, const CBall& b);
  friend CBall operator*(const CBall& a, const Ball& s) { return {a.re * s, a.im * s}; }
  friend CBall operator/(const CBall& a, const CBall& b);
  friend CBall operator/(const CBall& a, const Ball& s) { return {a.re / s, a.im / s}; }
};

Ball abs(const CBall& z);
/// Principal argument; throws std::domain_error if the ball meets the branch cut.
Ball arg(const CBall& z);
/// Principal logarithm.
CBall log(const CBall& z);
CBall exp(const CBall& z);
/// e^{it} for real t.
CBall cis(const Ball& t);

}  // namespace cfa
