#pragma once

// The Carleson maximal operator on polynomials and the measure estimates
// behind the Fefferman-based modulus of almost-everywhere convergence.
//
// Grid estimates cover [-pi, pi] by `grid` equal cells and count a cell when its
// certified enclosure does not rule the condition out, so they bound the true
// measure from above.

#include "cfa/modulus.hpp"
#include "cfa/names.hpp"
#include "cfa/trigpoly.hpp"

#include <vector>

namespace cfa {

struct FeffermanConfig {
  /// ||sup_N |S_N f| ||_1 <= C ||f||_p with both norms taken against dt/(2pi).
  long C = 4;
  Rational p = 2;

  /// Throws std::invalid_argument unless C >= 1 and p > 1.
  void validate() const;
};

/// max_{0 <= N <= degree} |S_N(p)(t)|, the exact supremum for a polynomial.
Ball carleson_max(const TrigPoly& p, const Ball& t);

/// (1/2pi) int sup_N |S_N(p)| dt enclosed by lower and upper Riemann sums on the grid.
CertifiedReal maximal_l1_norm(const TrigPoly& p, long grid);

/// Max over samples of ||sup_N |S_N f| ||_1 / ||f||_p: an empirical lower bound on C.
Ball estimate_fefferman(const std::vector<TrigPoly>& samples, const Rational& exponent, long grid = 2048);

/// eta(k, m) = degree of the first name element within 2^-(m+k+3)/C of the limit in L^p.
/// Exact L2 tails are used when the name has them, else the name's distance bound.
AeModulus lemma32_modulus(const CauchyName& name, const FeffermanConfig& cfg);

/// Index of the name element chosen for (k, m).
long lemma32_index(const CauchyName& name, const FeffermanConfig& cfg, long k, long m);

/// Outer estimate of the Lebesgue measure of
/// {t : exists M, N in [N0, Nmax] with |S_M(f)(t) - S_N(f)(t)| >= 2^-k}.
/// `slack` is added to every pairwise difference, to account for f_approx != f.
double exceptional_measure_estimate(const TrigPoly& f_approx, long k, long N0, long Nmax, long grid,
                                    double slack = 0.0);

/// Same for an arbitrary finite sequence of polynomials (all pairs compared).
double sequence_exceptional_measure(const std::vector<TrigPoly>& seq, long k, long grid, double slack = 0.0);

/// Outer estimate of the normalized measure of {t : |h(t)| >= level}.
double level_set_measure(const TrigPoly& h, double level, long grid);

/// Outer estimate of the normalized measure of {t : sup_N |S_N(g)(t)| > level}.
double maximal_level_set_measure(const TrigPoly& g, double level, long grid);

}  // namespace cfa
