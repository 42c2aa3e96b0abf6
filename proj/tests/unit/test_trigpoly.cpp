#include "cfa/trigpoly.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace cfa;

TEST_CASE("eval of constant and unimodular exponentials", "[trigpoly][eval]") {
  CBall one = eval(TrigPoly::exponential(0), Ball::from_double(1.3));
  CHECK(one.re.lower_d() == 1.0);
  CHECK(one.re.upper_d() == 1.0);
  CHECK(one.im.is_exact());

  CBall i = eval(TrigPoly::exponential(1), pi_times(Rational(1, 2)));
  CHECK(support::contains(i.re, 0.0));
  CHECK(support::contains(i.im, 1.0));
  CHECK(i.re.rad() < 1e-30);
}

TEST_CASE("eval agrees with high-precision direct summation", "[trigpoly][eval][oracle]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    TrigPoly p = support::random_poly(rng, 5, 9);
    Rational t(7, 10);
    CBall v = eval(p, pi_times(t));
    auto ref = oracle::direct_sum(p, t);
    // the oracle carries about 300 bits, far below the enclosure radius
    CHECK(support::contains(v.re, ref.first, pow2(-250)));
    CHECK(support::contains(v.im, ref.second, pow2(-250)));
    CHECK(v.re.rad() < 1e-30);
  }
}

TEST_CASE("input radius propagates through the derivative bound", "[trigpoly][eval]") {
  TrigPoly p = TrigPoly::exponential(3) + TrigPoly::exponential(-2, QComplex(Rational(1, 2)));
  CBall v = eval(p, Ball::from_double(0.4, 1e-6));
  CHECK(v.re.rad() >= 1e-6 * 4.0);
  auto ref = oracle::eval_double(p, 0.4 + 0.9e-6);
  CHECK(support::contains(v.re, ref.real()));
}

TEST_CASE("fourier coefficients of exponentials", "[trigpoly][coeff]") {
  TrigPoly e3 = TrigPoly::exponential(3);
  CHECK(fourier_coeff(e3, 3) == QComplex(1));
  CHECK(fourier_coeff(e3, 2) == QComplex(0));
}

TEST_CASE("indicator coefficients match quadrature of the step function", "[trigpoly][coeff][oracle]") {
  const Rational a(-1, 3), b(1, 5);
  const double pa = a.get_d() * M_PI, pb = b.get_d() * M_PI;
  auto step = [&](double t) { return (t >= pa && t <= pb) ? 1.0 : 0.0; };
  for (long n : {0L, 1L, -1L, 4L, -7L, 12L}) {
    CBall c = indicator_coeff(a, b, n);
    auto ref = oracle::fourier_coeff_quad(step, n, {pa, pb});
    CHECK(std::fabs(c.re.to_double() - ref.real()) < 1e-10);
    CHECK(std::fabs(c.im.to_double() - ref.imag()) < 1e-10);
  }
}

TEST_CASE("partial sums truncate by frequency", "[trigpoly][partial_sum]") {
  CHECK(partial_sum(TrigPoly::exponential(1), 0).is_zero());
  TrigPoly p = TrigPoly::exponential(-2) + TrigPoly::exponential(-1) + TrigPoly::exponential(0);
  CHECK(partial_sum(p, 1) == TrigPoly::exponential(-1) + TrigPoly::exponential(0));
  CHECK(partial_sum(p, p.degree()) == p);
}

TEST_CASE("reconstruction and truncation monotonicity", "[trigpoly][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    TrigPoly p = support::random_poly(rng, 8, 12);
    for (long N = 0; N <= p.degree() + 1; ++N) {
      TrigPoly s = partial_sum(p, N);
      for (long n = -p.degree() - 1; n <= p.degree() + 1; ++n) {
        QComplex expected = std::labs(n) <= N ? p.coeff(n) : QComplex();
        REQUIRE(fourier_coeff(s, n) == expected);
      }
      REQUIRE(s.l2_norm_squared() <= p.l2_norm_squared());
    }
  }
}

TEST_CASE("L2 norm via Parseval", "[trigpoly][lp]") {
  CertifiedReal n5 = lp_norm(TrigPoly::exponential(5), 2, Rational(1, 1000000000000L));
  CHECK(support::contains(n5, 1.0));
  CHECK(n5.radius <= Rational(1, 1000000000000L));
  TrigPoly p = TrigPoly::exponential(0) + TrigPoly::exponential(1);
  CertifiedReal n = lp_norm(p, 2, Rational(1, 1000000000000L));
  CHECK(support::contains(n, std::sqrt(2.0)));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    TrigPoly q = support::random_poly(rng, 10, 7);
    Ball sq = sqr(lp_norm(q, 2, Rational(1, 1000000000000L)).to_ball());
    Ball exact = Ball::from_rational(q.l2_norm_squared());
    CHECK(!certainly_less(sq, exact));
    CHECK(!certainly_less(exact, sq));
  }
}

TEST_CASE("L4 and L3 norms agree with quadrature", "[trigpoly][lp][oracle]") {
  TrigPoly p = TrigPoly::exponential(0) + TrigPoly::exponential(1);
  CertifiedReal n4 = lp_norm(p, 4, Rational(1, 100000000));
  CHECK(std::fabs(n4.value.to_double() - oracle::lp_norm_quad(p, 4.0)) < 1e-8);
  // (1/2pi) int |1 + e^{it}|^4 = 6 exactly
  CHECK(support::contains(n4, std::pow(6.0, 0.25)));

  CertifiedReal n3 = lp_norm(p, 3, Rational(1, 100000000));
  CHECK(n3.radius <= Rational(1, 100000000));
  CHECK(std::fabs(n3.value.to_double() - oracle::lp_norm_quad(p, 3.0)) < 1e-8);

  std::mt19937_64 rng(8);
  TrigPoly q = support::random_poly(rng, 4, 5);
  CertifiedReal r = lp_norm(q, Rational(3, 2), Rational(1, 1000000));
  CHECK(std::fabs(r.value.to_double() - oracle::lp_norm_quad(q, 1.5)) < 2e-6);
}

TEST_CASE("sup norm certificates", "[trigpoly][sup]") {
  const Rational tol(1, 10000000000L);
  CertifiedReal e7 = sup_norm_certificate(TrigPoly::exponential(7), tol);
  CHECK(support::contains(e7, 1.0));
  CHECK(e7.radius <= tol);
  CertifiedReal zero = sup_norm_certificate(TrigPoly(), tol);
  CHECK(zero.value.to_double() == 0.0);
  TrigPoly cosine = TrigPoly::exponential(1, QComplex(Rational(1, 2))) + TrigPoly::exponential(-1, QComplex(Rational(1, 2)));
  CertifiedReal c = sup_norm_certificate(cosine, tol);
  CHECK(support::contains(c, 1.0));
  CHECK(std::fabs(c.value.to_double() - oracle::grid_max(cosine, 4096)) < 1e-9);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    TrigPoly p = support::random_poly(rng, 10, 9);
    CertifiedReal s = sup_norm_certificate(p, Rational(1, 1000000000));
    double grid = oracle::grid_max(p, 1 << 14);
    // the grid max is a lower bound; spacing times the derivative bound closes the gap
    double spacing = 2 * M_PI / (1 << 14);
    CHECK(s.upper_d() >= grid);
    CHECK(s.lower_d() <= grid + p.derivative_bound() * spacing);
  }
}

TEST_CASE("Cesaro means damp coefficients", "[trigpoly][cesaro]") {
  for (long N : {0L, 1L, 5L}) CHECK(cesaro_mean(TrigPoly::exponential(0), N) == TrigPoly::exponential(0));
  CHECK(cesaro_mean(TrigPoly::exponential(1), 1) == TrigPoly::exponential(1, QComplex(Rational(1, 2))));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    TrigPoly p = support::random_poly(rng, 6, 5);
    for (long N : {0L, 2L, 7L}) {
      // sigma_N is the average of N+1 partial sums, i.e. convolution with F_{N+1}
      TrigPoly avg;
      for (long M = 0; M <= N; ++M) avg += partial_sum(p, M);
      CHECK(QComplex(Rational(1, N + 1)) * avg == cesaro_mean(p, N));
      const double t = 0.3 + trial;
      auto ref = oracle::fejer_convolution_quad(p, N + 1, t);
      auto val = eval(cesaro_mean(p, N), Ball::from_double(t));
      CHECK(std::fabs(val.re.to_double() - ref.real()) < 1e-7);
      CHECK(std::fabs(val.im.to_double() - ref.imag()) < 1e-7);
    }
  }
}

TEST_CASE("Cesaro mean converges at the stated rate", "[trigpoly][cesaro][property]") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    TrigPoly p = support::random_poly(rng, 6, 5);
    for (long N = p.degree(); N <= p.degree() + 6; ++N) {
      TrigPoly diff = cesaro_mean(p, N) - p;
      double bound = p.derivative_bound() / double(N + 1);
      CertifiedReal s = sup_norm_certificate(diff, Rational(1, 1000000000));
      CHECK(s.lower_d() <= bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("Fejer kernel values", "[trigpoly][fejer]") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> x(-10, 10);
  for (int i = 0; i < 50; ++i) CHECK(support::contains(fejer_kernel(1, Ball::from_double(x(rng))), 1.0));
  for (long N : {1L, 2L, 9L, 32L}) {
    CHECK(support::contains(fejer_kernel(N, Ball()), double(N)));
    CHECK(support::contains(fejer_kernel(N, Ball(2) * Ball::pi()), double(N)));
    CHECK(support::contains(fejer_kernel(N, Ball::from_double(1e-12)), double(N)));
  }
  for (int i = 0; i < 200; ++i) {
    double xv = x(rng);
    long N = 1 + i % 40;
    Ball f = fejer_kernel(N, Ball::from_double(xv));
    CHECK(f.upper_d() >= 0.0);
    CHECK(f.lower_d() >= 0.0);
    CHECK(std::fabs(f.to_double() - oracle::fejer_double(N, xv)) < 1e-9 * N);
  }
}

TEST_CASE("Fejer kernel has unit mass", "[trigpoly][fejer][oracle]") {
  Ball pi = Ball::pi();
  for (long N = 1; N <= 32; ++N) {
    CHECK(std::fabs(oracle::fejer_mass_quad(N) - 1.0) < 1e-9);
    CHECK(support::contains(fejer_integral(N, -pi, pi), 1.0));
  }
}
