#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls the library's evaluators; inputs are read as plain data.

#include "cfa/rational.hpp"
#include "cfa/trigpoly.hpp"

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

using cfa::Rational;
using cfa::TrigPoly;

/// Term-by-term sum of c_n (cos nt + i sin nt) in MPFR at the given precision,
/// t = pi * t_pi. Returns the real and imaginary parts as exact rationals of the
/// rounded MPFR result.
std::pair<Rational, Rational> direct_sum(const TrigPoly& p, const Rational& t_pi, long bits = 300);

/// Same, at a double-valued angle in radians, plain double arithmetic.
std::complex<double> eval_double(const TrigPoly& p, double t);

/// Adaptive Gauss-Kronrod of (1/2pi) int_{-pi}^{pi} f(t) e^{-int} dt with the given
/// breakpoints (radians) splitting the integration range.
std::complex<double> fourier_coeff_quad(const std::function<double(double)>& f, long n,
                                        std::vector<double> breakpoints = {});

/// ((1/2pi) int |p|^e)^(1/e) by panelled Gauss-Kronrod.
double lp_norm_quad(const TrigPoly& p, double e);

/// max |p| over a uniform grid of the given size.
double grid_max(const TrigPoly& p, long grid);

/// max over 0 <= N <= degree of |sum_{|n| <= N} c_n e^{int}|, every N summed from scratch in long double.
double maximal_brute(const TrigPoly& p, double t);

/// Closed-form Fejer kernel in double precision.
double fejer_double(long N, double x);

/// (1/2pi) int_{-pi}^{pi} F_N(x) dx by quadrature.
double fejer_mass_quad(long N);

/// (1/2pi) int_{-pi}^{pi} p(t - x) F_K(x) dx by quadrature.
std::complex<double> fejer_convolution_quad(const TrigPoly& p, long K, double t);

/// Arcs as (theta1, theta2) in units of pi.
using ArcList = std::vector<std::pair<Rational, Rational>>;

/// Poisson integral (1/2pi) int_F (1 - r^2) / |e^{i theta} - z|^2 d theta.
double poisson_integral(std::complex<double> z, const ArcList& arcs, double tol);

/// Schwarz integral (1/2pi) int_F (e^{i theta} + z) / (e^{i theta} - z) d theta evaluated
/// in closed form at the given MPFR precision.
std::complex<long double> schwarz_integral(std::complex<long double> z, const ArcList& arcs, long bits = 256);

/// Taylor coefficients b_0..b_{n_max} of the Schwarz integral by the trapezoid rule
/// on |z| = radius with `points` nodes, carried out in MPFR.
std::vector<std::complex<long double>> contour_taylor(const ArcList& arcs, long n_max, long points = 512,
                                                      const Rational& radius = Rational(1, 2), long bits = 256);

/// Same for the principal logarithm of the Schwarz integral.
std::vector<std::complex<long double>> log_contour_taylor(const ArcList& arcs, long n_max, long points = 512,
                                                          const Rational& radius = Rational(1, 2), long bits = 256);

}  // namespace oracle
