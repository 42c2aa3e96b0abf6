#pragma once

// Harmonic measure of finite unions of open arcs of the unit circle.
//
// An arc (t1, t2) is {e^{i pi t} : t1 < t < t2} with -1 < t1 < t2 < 1 in units
// of pi. For one arc, with w = (z - e^{i pi t2}) / (z - e^{i pi t1}) and
// beta = pi/2 + pi (t2 - t1)/2,
//
//   omega_hat(z) = 1/2 + (1/(pi i)) Log(w e^{-i beta}).
//
// The rotation by beta keeps the argument in [-pi/2, pi/2] on the closed disk, so
// the principal branch is valid for arcs longer than pi as well.

#include "cfa/ball.hpp"
#include "cfa/intervals.hpp"
#include "cfa/rational.hpp"

#include <stdexcept>
#include <vector>

namespace cfa {

struct Arc {
  Rational t1;
  Rational t2;

  Rational length() const { return t2 - t1; }
};

class ArcSet {
 public:
  ArcSet() = default;
  /// Validates -1 < t1 < t2 < 1 and positive gaps; arcs are sorted by t1.
  explicit ArcSet(std::vector<Arc> arcs);

  const std::vector<Arc>& arcs() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }
  std::size_t size() const { return arcs_.size(); }
  /// Normalized measure sum (t2 - t1) / 2, exact.
  const Rational& total() const { return total_; }
  /// Whether e^{i pi t} lies on one of the open arcs.
  bool contains(const Rational& t) const;

 private:
  std::vector<Arc> arcs_;
  Rational total_;
};

/// Raised when z is within 2^-20 of an arc endpoint.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// omega(z, F) for |z| < 1; throws std::domain_error unless |z| < 1 is certified.
Ball harmonic_measure(const CBall& z, const ArcSet& F);

/// omega_hat(z, F) on the closed disk away from the arc endpoints.
CBall hat_omega(const CBall& z, const ArcSet& F);

/// Maclaurin coefficients b_0..b_{n_max} of omega_hat(., F):
/// b_0 = total(F), b_n = sum over arcs of (e^{-in pi t1} - e^{-in pi t2}) / (pi i n).
std::vector<CBall> hat_omega_taylor(const ArcSet& F, long n_max);

/// Upper bound on sum_{n > n_max} |b_n| r^n for 0 <= r < 1.
double hat_omega_taylor_tail(const ArcSet& F, long n_max, double r);

/// Poisson integral of the indicator of F by adaptive Gauss-Kronrod quadrature in
/// long double; an independent cross-check for harmonic_measure. Requires
/// |z| < 1 - 2^-10 and tol > 0; throws std::runtime_error if the budget runs out.
double poisson_oracle(double x, double y, const ArcSet& F, double tol);

}  // namespace cfa
