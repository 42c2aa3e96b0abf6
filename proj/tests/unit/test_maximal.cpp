#include "cfa/maximal.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace cfa;

TEST_CASE("Carleson maximal function of exponentials", "[maximal][carleson]") {
  CHECK(support::contains(carleson_max(TrigPoly::exponential(0), Ball::from_double(2.1)), 1.0));
  // S_0(e_1) = 0 and S_1(e_1)(0) = 1
  CHECK(support::contains(carleson_max(TrigPoly::exponential(1), Ball()), 1.0));
  CHECK(carleson_max(TrigPoly(), Ball()).to_double() == 0.0);
}

TEST_CASE("Carleson maximal function matches exhaustive partial sums", "[maximal][carleson][oracle]") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> t(-M_PI, M_PI);
  for (int trial = 0; trial < 40; ++trial) {
    TrigPoly p = support::random_poly(rng, 8, 10);
    double x = t(rng);
    Ball m = carleson_max(p, Ball::from_double(x));
    CHECK(std::fabs(m.to_double() - oracle::maximal_brute(p, x)) < 1e-12 * (1 + m.to_double()));
  }
}

TEST_CASE("maximal function dominates and is homogeneous", "[maximal][property]") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> t(-M_PI, M_PI);
  for (int trial = 0; trial < 40; ++trial) {
    TrigPoly p = support::random_poly(rng, 6, 8);
    Ball x = Ball::from_double(t(rng));
    Ball m = carleson_max(p, x);
    CHECK(!certainly_less(m, abs(eval(p, x))));
    QComplex alpha(support::random_rational(rng), support::random_rational(rng));
    Ball scaled = carleson_max(alpha * p, x);
    Ball expected = sqrt(Ball::from_rational(alpha.norm())) * m;
    CHECK(!certainly_less(scaled, expected));
    CHECK(!certainly_less(expected, scaled));
  }
}

TEST_CASE("empirical Fefferman constant", "[maximal][fefferman]") {
  CHECK(support::contains(estimate_fefferman({TrigPoly::exponential(0)}, 2), 1.0));
  std::vector<TrigPoly> exps;
  for (long n = -3; n <= 3; ++n) exps.push_back(TrigPoly::exponential(n));
  CHECK(support::contains(estimate_fefferman(exps, 2), 1.0));

  std::mt19937_64 rng(79);
  std::vector<TrigPoly> samples;
  for (int i = 0; i < 100; ++i) samples.push_back(support::random_poly(rng, 6, 16));
  Ball c = estimate_fefferman(samples, 2, 512);
  // regression baseline only; any admissible C is at least this large
  WARN("empirical Fefferman lower estimate (100 random polynomials, p = 2): " << c.to_string(8));
  CHECK(c.lower_d() >= 1.0);
  CHECK(c.upper_d() < 4.0);
}

TEST_CASE("maximal L1 norm encloses a quadrature of the maximal function", "[maximal][oracle]") {
  TrigPoly p = TrigPoly::exponential(0) + TrigPoly::exponential(2, QComplex(Rational(1, 2)));
  CertifiedReal n = maximal_l1_norm(p, 4096);
  // sup_N |S_N p| = max(1, |1 + e^{2it}/2|) averaged over the circle
  double sum = 0;
  const int M = 200000;
  for (int i = 0; i < M; ++i) sum += oracle::maximal_brute(p, -M_PI + 2 * M_PI * (i + 0.5) / M);
  CHECK(support::contains(n, sum / M));
  CHECK(n.radius < Rational(1, 100));
}

TEST_CASE("lemma 3.2 modulus on simple names", "[maximal][lemma32]") {
  FeffermanConfig cfg;
  AeModulus constant = lemma32_modulus(CauchyName::constant(TrigPoly::exponential(2)), cfg);
  for (long k = 0; k < 4; ++k)
    for (long m = 0; m < 4; ++m) CHECK(constant(k, m) == 2);
  AeModulus zero = lemma32_modulus(CauchyName::constant(TrigPoly()), cfg);
  CHECK(zero(3, 5) == 0);
  CHECK_THROWS_AS((FeffermanConfig{0, 2}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((FeffermanConfig{1, 1}.validate()), std::invalid_argument);
}

TEST_CASE("lemma 3.2 modulus from exact tails", "[maximal][lemma32][oracle]") {
  FeffermanConfig cfg{1, 2};
  CauchyName name = CauchyName::geometric();
  AeModulus eta = lemma32_modulus(name, cfg);
  for (long k = 0; k <= 3; ++k) {
    for (long m = 0; m <= 3; ++m) {
      // tail of sum_j 2^{-j-1} e_j after degree n, summed directly far past the threshold
      const Rational thr = pow2(-(m + k + 3));
      long expected = -1;
      for (long n = 0; expected < 0; ++n) {
        Rational tail;
        for (long j = n + 1; j <= n + 200; ++j) tail += pow2(-2 * j - 2);
        // the remaining terms are below 4^{-n-201}, far under the gaps between the candidates
        if (tail <= thr * thr) expected = n;
      }
      CHECK(eta(k, m) == expected);
    }
  }
  CHECK(eta.provenance() == "fefferman-truncation");
}

TEST_CASE("exceptional set estimates", "[maximal][exceptional]") {
  CHECK(exceptional_measure_estimate(TrigPoly::exponential(1), 0, 1, 5, 256) == 0.0);
  double full = exceptional_measure_estimate(TrigPoly::exponential(5), 10, 0, 5, 256);
  CHECK(std::fabs(full - 2 * M_PI) < 1e-12);
  CHECK_THROWS_AS(exceptional_measure_estimate(TrigPoly::exponential(1), 0, 3, 2, 256), std::invalid_argument);

  // S_0 = 0 and S_1 = cos t, so the set is |cos t| >= 1/2, of measure 4 pi / 3
  TrigPoly c = TrigPoly::exponential(1, QComplex(Rational(1, 2))) + TrigPoly::exponential(-1, QComplex(Rational(1, 2)));
  double third = exceptional_measure_estimate(c, 1, 0, 1, 4096);
  CHECK(third >= 4 * M_PI / 3);
  CHECK(third < 4 * M_PI / 3 + 0.05);
}

TEST_CASE("lemma 3.2 modulus controls the exceptional set", "[maximal][lemma32][property]") {
  FeffermanConfig cfg;
  CauchyName name = CauchyName::truncation(support::half_power_coeff, 24);
  AeModulus eta = lemma32_modulus(name, cfg);
  TrigPoly approx = name.term(40);
  double slack = 0;
  for (long j = 0; j <= 24; ++j) slack += 2 * abs(support::half_power_coeff(j) - CBall::from_qcomplex(approx.coeff(j))).upper_d();
  for (long k = 0; k <= 2; ++k) {
    for (long m = 0; m <= 3; ++m) {
      double mu = exceptional_measure_estimate(approx, k, eta(k, m), 24, 1024, slack);
      CHECK(mu < std::ldexp(1.0, -int(m)));
    }
  }
}

TEST_CASE("Chebyshev step for the maximal function", "[maximal][chebyshev][property]") {
  std::mt19937_64 rng(83);
  const long grid = 2048;
  for (int trial = 0; trial < 10; ++trial) {
    TrigPoly g = support::random_poly(rng, 5, 6);
    CertifiedReal eps = maximal_l1_norm(g, grid);
    double eps_up = eps.upper_d();
    double peak = g.abs_sum_bound();
    for (long k = -6; k <= 2; ++k) {
      double level = std::ldexp(1.0, -int(k));
      if (level > peak) continue;
      double measured = maximal_level_set_measure(g, level, grid);
      // outer cells at the boundary of each of at most 2 (deg + 1)^2 components
      double resolution = 4.0 * std::pow(double(g.degree() + 1), 2) / grid;
      CHECK(measured <= eps_up / level + resolution);
    }
  }
}
