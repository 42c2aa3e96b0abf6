#pragma once

// Trigonometric polynomials with exact complex-rational coefficients.
//
// p(t) = sum_n c_n e^{int}, with c_n(f) = (1/2pi) int f(t) e^{-int} dt so that
// the coefficient of e_m is recovered exactly. Norms use the measure dt/(2pi).

#include "cfa/ball.hpp"
#include "cfa/disc.hpp"
#include "cfa/rational.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfa {

class TrigPoly {
 public:
  using Coeffs = std::map<long, QComplex>;

  TrigPoly() = default;
  explicit TrigPoly(const Coeffs& coeffs);

  /// e_n(t) = e^{int}, optionally scaled.
  static TrigPoly exponential(long n, const QComplex& c = QComplex(1));

  const Coeffs& coeffs() const { return coeffs_; }
  QComplex coeff(long n) const;
  bool is_zero() const { return coeffs_.empty(); }
  /// max |n| over the support, 0 for the zero polynomial.
  long degree() const;
  long min_frequency() const;
  long max_frequency() const;
  bool is_analytic() const { return is_zero() || min_frequency() >= 0; }

  /// e_r * p.
  TrigPoly shifted(long r) const;
  /// Pointwise complex conjugate.
  TrigPoly conj() const;
  /// Pointwise real and imaginary parts.
  TrigPoly real_part() const;
  TrigPoly imag_part() const;

  /// sum |c_n|^2, which is ||p||_2^2.
  Rational l2_norm_squared() const;
  /// Upper bounds on sum |n|^j |c_n| for j = 0, 1, 2.
  double abs_sum_bound() const;
  double derivative_bound() const;
  double second_derivative_bound() const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator-(const TrigPoly& a);
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend TrigPoly operator*(const QComplex& s, const TrigPoly& p);
  friend bool operator==(const TrigPoly& a, const TrigPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  Coeffs coeffs_;
};

/// Interval-valued real with a rational radius.
struct CertifiedReal {
  Real value;
  Rational radius;

  static CertifiedReal from_ball(const Ball& b);
  Ball to_ball() const;
  double lower_d() const;
  double upper_d() const;
};

/// Raised when an adaptive procedure cannot meet its tolerance within the cell budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, CertifiedReal best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const CertifiedReal& best() const { return best_; }

 private:
  CertifiedReal best_;
};

/// Fast repeated evaluation: coefficients are converted once to discs.
class TrigPolyEvaluator {
 public:
  explicit TrigPolyEvaluator(const TrigPoly& p);

  struct Jet {
    Disc value;
    Disc derivative;
  };

  /// p(t); the radius of t is propagated through sum |n||c_n|.
  Disc value(const Ball& t) const;
  /// p(t) and p'(t) at the midpoint of t, radii propagated.
  Jet jet(const Ball& t) const;
  /// S_N(p)(t) for N = 0, ..., degree.
  std::vector<Disc> partial_sums(const Ball& t) const;

  long degree() const { return degree_; }
  double d1() const { return d1_; }
  double d2() const { return d2_; }
  bool is_zero() const { return coeffs_.empty(); }

 private:
  long lo_ = 0;
  long hi_ = 0;
  long degree_ = 0;
  double d1_ = 0.0;
  double d2_ = 0.0;
  std::vector<Disc> coeffs_;
};

/// Enclosure of p(t).
CBall eval(const TrigPoly& p, const Ball& t);
/// c_n(p), exact.
QComplex fourier_coeff(const TrigPoly& p, long n);
/// S_N(p): keeps frequencies with |n| <= N.
TrigPoly partial_sum(const TrigPoly& p, long N);
/// ((1/2pi) int |p|^exp dt)^(1/exp) with radius <= tol. Even integer exponents are exact.
CertifiedReal lp_norm(const TrigPoly& p, const Rational& exp, const Rational& tol);
/// max_t |p(t)| with radius <= tol.
CertifiedReal sup_norm_certificate(const TrigPoly& p, const Rational& tol);
/// sigma_N(p) = (1/(N+1)) sum_{M<=N} S_M(p).
TrigPoly cesaro_mean(const TrigPoly& p, long N);
/// F_N(x) = sin^2(Nx/2) / (N sin^2(x/2)), with value N at multiples of 2pi.
Ball fejer_kernel(long N, const Ball& x);
/// (1/2pi) int_a^b F_N(x) dx for a <= b, exact up to ball rounding.
Ball fejer_integral(long N, const Ball& a, const Ball& b);

/// c_n of the indicator of [pi a, pi b] (a <= b in units of pi).
CBall indicator_coeff(const Rational& a, const Rational& b, long n);

/// The ball pi * q.
Ball pi_times(const Rational& q);

}  // namespace cfa
