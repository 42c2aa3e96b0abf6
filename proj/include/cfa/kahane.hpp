#pragma once

// Bounded trigonometric polynomials whose partial sums are large on a small set.
//
// From a closed set G of normalized measure a = lambda(G)/(2 pi) < 1:
//   psi = Log(omega_hat(., F)) - ln a'  for an arc cover F of G with a' <= a^{3/4},
//   R(t) = sum_{1 <= n <= N} c_n(psi) r0^n e^{int},
//   p = (1/Pi) e_{-N} Im(R), with Pi >= pi rational.
// R and p are rational polynomials and every bound is certified on them directly.

#include "cfa/ball.hpp"
#include "cfa/harmonic.hpp"
#include "cfa/intervals.hpp"
#include "cfa/trigpoly.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cfa {

/// The measure of G is too close to 2 pi to fit a cover of measure a^{3/4}.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KKCertificate {
  /// -(1/4pi) ln a for p, -(1/2) ln a for R.
  Ball bound_target;
  /// Encloses min over G of |S_N(p)| (for p) or of Re R (for R).
  CertifiedReal measured_min;
  /// ||p||_inf for p; max |Im R| / pi for R.
  CertifiedReal sup_norm;
  long degree = 0;
  Rational r0;
  long N = 0;
  /// Angle (units of pi) added to G before the cover is built.
  Rational rotation;

  bool passes() const;
};

/// A certificate failed; carries it for diagnostics.
class CertificateError : public std::runtime_error {
 public:
  CertificateError(const std::string& what, KKCertificate cert)
      : std::runtime_error(what), cert_(std::move(cert)) {}
  const KKCertificate& certificate() const { return cert_; }

 private:
  KKCertificate cert_;
};

/// Rotation moving the midpoint of the largest circle gap of G to -1.
Rational kahane_rotation(const IntervalSet& G);

/// Disjoint open arcs covering G rotated by kahane_rotation(G), each meeting it,
/// with total normalized measure at most a^{3/4}.
ArcSet choose_cover(const IntervalSet& G);

class PsiHandle {
 public:
  ArcSet F;
  /// lambda(G) / (2 pi).
  Rational a;
  /// lambda(F) / (2 pi).
  Rational a_prime;
  Rational rotation;
  /// Distance (units of pi) from the rotated G to the endpoints of F.
  Rational delta;
  /// G after rotation.
  IntervalSet G_rotated;

  /// psi(z) = Log(omega_hat(z, F)) - ln a', in the rotated frame, on the closed disk
  /// away from the endpoints of F.
  CBall value(const CBall& z) const;
  /// Maclaurin coefficients c_0..c_{n_max} of psi from the power-series logarithm
  /// n c_n b_0 = n b_n - sum_{0<k<n} k c_k b_{n-k}. Floating approximations (radius 0):
  /// ball radii in this recurrence grow geometrically, so callers certify downstream.
  std::vector<CBall> taylor(long n_max) const;
};

/// The cover and psi, with psi(0) = 0, |Im psi| < pi/2 and Re psi >= -(3/4) ln a
/// checked on samples of G; throws CertificateError otherwise.
PsiHandle build_psi(const IntervalSet& G);

/// Analytic R with zero constant term, Re R >= -(1/2) ln a on G and |Im R| < pi
/// everywhere, both certified by adaptive cells with second-order remainders.
std::pair<TrigPoly, KKCertificate> build_R(const IntervalSet& G);

/// p = (1/Pi) e_{-N} Im R. Checks S_N(p) = e_{-N} R / (2 Pi i) exactly, the spectrum
/// [-2N, 0], ||p||_inf < 1 and min_G |S_N(p)| >= -(1/4pi) ln a; throws
/// CertificateError when a bound fails.
std::pair<TrigPoly, KKCertificate> build_p(const IntervalSet& G);

/// The rational Pi >= pi used by build_p.
const Rational& kahane_pi();

}  // namespace cfa
