#include "cfa/schnorr.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

using namespace cfa;

namespace {

const double kEighthPi = 1 / (8 * M_PI);

// Union length by sorting and sweeping, independent of the library.
Rational sweep_length(std::vector<Interval> v) {
  std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  Rational total, end(-2);
  for (Interval I : v) {
    if (I.b <= end) continue;
    if (I.a < end) I.a = end;
    total += I.b - I.a;
    end = I.b;
  }
  return total;
}

std::set<long> support_of(const TrigPoly& p) {
  std::set<long> s;
  for (const auto& [n, c] : p.coeffs()) s.insert(n);
  return s;
}

// sigma_N of the indicator of [pi a, pi b] at pi t in double precision from its coefficients.
double fejer_mean_indicator(double a, double b, double t, long N) {
  double sum = (b - a) / 2;
  for (long n = 1; n <= N; ++n) {
    const double w = 1 - double(n) / double(N + 1);
    // c_n e^{int} + c_{-n} e^{-int} = 2 Re(c_n e^{int}), c_n = (e^{-in pi a} - e^{-in pi b}) / (2 pi i n)
    std::complex<double> c = (std::polar(1.0, -n * M_PI * a) - std::polar(1.0, -n * M_PI * b)) /
                             std::complex<double>(0, 2 * M_PI * n);
    sum += 2 * w * (c * std::polar(1.0, n * M_PI * t)).real();
  }
  return sum;
}

AeModulus identity_modulus() {
  return AeModulus([](long k, long) { return k; }, "k");
}

}  // namespace

TEST_CASE("disjointify keeps the union", "[schnorr][disjointify]") {
  auto out = disjointify({{Rational(0), Rational(1, 2)}, {Rational(1, 4), Rational(3, 4)}});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == Interval{Rational(0), Rational(1, 2)});
  CHECK(out[1] == Interval{Rational(1, 2), Rational(3, 4)});
  auto same = disjointify({{Rational(1, 2), Rational(3, 4)}, {Rational(-1, 2), Rational(0)}});
  CHECK(same[0] == Interval{Rational(-1, 2), Rational(0)});
  CHECK(same[1] == Interval{Rational(1, 2), Rational(3, 4)});

  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Interval> v;
    for (int i = 0; i < 50; ++i) v.push_back(support::random_interval(rng, Rational(1, 4)));
    auto d = disjointify(v);
    Rational sum;
    for (std::size_t i = 0; i < d.size(); ++i) {
      sum += d[i].length();
      if (i > 0) CHECK(d[i - 1].b <= d[i].a);
    }
    CHECK(sum == sweep_length(v));
  }
}

TEST_CASE("rational-point test levels", "[schnorr][test]") {
  const Rational t0(1, 3);
  SchnorrTest T = SchnorrTest::rational_point(t0);
  CHECK(*T.interval(0, 0) == Interval{t0 - pow2(-4), t0 + pow2(-4)});
  CHECK(*T.interval(0, 1) == Interval{t0 - Rational(3, 32), t0 - Rational(1, 16)});
  CHECK(*T.interval(0, 2) == Interval{t0 + Rational(1, 16), t0 + Rational(3, 32)});
  for (long n = 0; n <= 12; ++n) {
    CHECK(check_level(T, n, 40));
    const Rational h = pow2(-n - 3);
    for (long j = -1; j <= 40; ++j) {
      auto head = T.enumerate(n, j + 1);
      // the stream fills (t0 - h, t0 + h) exactly
      CHECK(T.tail_bound(n, j) == (2 * h - sweep_length(head)) * pi_upper());
    }
  }
  CHECK_THROWS_AS(SchnorrTest::rational_point(Rational(15, 16)), std::invalid_argument);
}

TEST_CASE("index selection", "[schnorr][select_m]") {
  SchnorrTest single = SchnorrTest::from_levels({{{Rational(0), Rational(1, 16)}},
                                                 {{Rational(0), Rational(1, 32)}},
                                                 {{Rational(0), Rational(1, 64)}}});
  CHECK(select_m(single, 0, 0) == 0);
  CHECK(select_m(single, 0, 1) == 1);
  CHECK(select_m(single, 0, 3) == 3);
  CHECK(build_Gnk(single, 0, 2).empty());
  CHECK_THROWS_AS(select_m(single, 2, 0), InsufficientCoverError);

  // level 2, h = 2^-5: tails after 0, 1, 2 are pi h, (3/4) pi h, (1/2) pi h against 2^-4
  SchnorrTest T = SchnorrTest::rational_point(Rational(1, 3));
  CHECK(select_m(T, 1, 0) == 2);
  for (long n = 0; n <= 2; ++n) {
    long prev = -1;
    for (long k = 0; k <= 3; ++k) {
      const long m = select_m(T, n, k);
      CHECK(m > prev);
      CHECK(T.tail_bound(1L << n, m) < pow2(-(1L << (n + k + 1))));
      if (m > 0 && m > prev + 1) CHECK(!(T.tail_bound(1L << n, m - 1) < pow2(-(1L << (n + k + 1)))));
      prev = m;
    }
  }
}

TEST_CASE("slices of the covers", "[schnorr][G]") {
  const Rational t0(-1, 5);
  SchnorrTest T = SchnorrTest::rational_point(t0);
  IntervalSet G00 = build_Gnk(T, 0, 0);
  REQUIRE(G00.intervals().size() == 1);
  CHECK(G00.intervals()[0] == Interval{t0 - pow2(-5), t0 + pow2(-5)});
  for (long n = 0; n <= 3; ++n) {
    std::vector<Interval> seen;
    for (long k = 0; k <= 3; ++k) {
      IntervalSet G = build_Gnk(T, n, k);
      CHECK(G.lebesgue_upper() < pow2(-(1L << (n + k))));
      if (k > 0) CHECK(!G.contains(t0));
      for (const Interval& I : G.intervals()) {
        for (const Interval& J : seen) CHECK((I.b <= J.a || J.b <= I.a));
        seen.push_back(I);
      }
    }
  }
}

TEST_CASE("schedules keep blocks apart", "[schnorr][schedule]") {
  TrigPoly p = TrigPoly::exponential(-6) + TrigPoly::exponential(0, QComplex(2));
  Schedule one = make_schedule({{{2, 1}, p}});
  CHECK(one.r.at({2, 1}) == cantor_pair(2, 1) + 6);
  CHECK(cantor_pair(2, 1) == 7);

  Schedule two = make_schedule({{{0, 0}, p}, {{0, 1}, TrigPoly::exponential(-3) + TrigPoly::exponential(2)}});
  std::set<long> a = support_of(p.shifted(two.r.at({0, 0})));
  std::set<long> b = support_of((TrigPoly::exponential(-3) + TrigPoly::exponential(2)).shifted(two.r.at({0, 1})));
  for (long x : a) CHECK(!b.count(x));

  std::mt19937_64 rng(137);
  std::map<std::pair<long, long>, TrigPoly> polys;
  for (long n = 0; n < 4; ++n)
    for (long k = 0; k < 3; ++k) polys[{n, k}] = support::random_poly(rng, 5, 9);
  Schedule s = make_schedule(polys);
  REQUIRE(s.cells.size() == 12);
  std::vector<std::set<long>> supports;
  for (const auto& [nk, q] : polys) {
    TrigPoly shifted = q.shifted(s.r.at(nk));
    CHECK(s.r.at(nk) >= 0);
    CHECK(shifted.min_frequency() >= cantor_pair(nk.first, nk.second));
    supports.push_back(support_of(shifted));
  }
  for (std::size_t i = 0; i < supports.size(); ++i)
    for (std::size_t j = i + 1; j < supports.size(); ++j)
      for (long x : supports[i]) CHECK(!supports[j].count(x));
}

TEST_CASE("single-cell assembly", "[schnorr][assembly]") {
  const Rational t0(1, 3);
  SchnorrTest T = SchnorrTest::rational_point(t0);
  Assembly A = assemble_divergence(T, 0, 0);
  REQUIRE(A.report.cells.size() == 1);
  auto [p, cert] = build_p(build_Gnk(T, 0, 0));
  CHECK(A.f == (QComplex(Rational(1, 2)) * p).shifted(A.schedule.r.at({0, 0})));
  CHECK(A.report.uniform_tail == Rational(3, 2));
  CHECK(A.report.all_pass());

  GapResult g = verify_gap(A.f, A.schedule, t0, 0);
  CHECK(g.captured);
  CHECK(g.exceeds);
  CHECK(g.gap.lower_d() > kEighthPi);
  CHECK(g.M >= 0);
  CHECK(g.M < g.N);
  // the gap again from an independent evaluation of the two partial sums
  auto [re_n, im_n] = oracle::direct_sum(partial_sum(A.f, g.N), t0);
  auto [re_m, im_m] = oracle::direct_sum(partial_sum(A.f, g.M), t0);
  const double direct = std::hypot(Rational(re_n - re_m).get_d(), Rational(im_n - im_m).get_d());
  CHECK(std::fabs(direct - g.gap.to_ball().to_double()) < 1e-12);

  CHECK(!verify_gap(A.f, A.schedule, Rational(-1, 2), 0).captured);
  CHECK(!verify_gap(A.f, A.schedule, t0, 1).captured);
}

TEST_CASE("divergence assembly over a 2 x 2 grid", "[schnorr][assembly]") {
  const Rational t0(1, 3);
  SchnorrTest T = SchnorrTest::rational_point(t0);
  Assembly A = assemble_divergence(T, 1, 1);
  CHECK(A.report.all_pass());
  CHECK(A.report.uniform_tail == 2 - (Rational(1, 2) + Rational(1, 4) + Rational(1, 4) + Rational(1, 8)));
  for (const CellReport& c : A.report.cells) {
    CHECK(c.measure_ok);
    REQUIRE(!c.empty);
    CHECK(c.certificate.passes());
    CHECK(c.scaled_min.lower_d() > kEighthPi);
    CHECK(c.scaled_sup.upper_d() < std::ldexp(1.0, -int(c.n + c.k + 1)));
  }
  // ||f||_inf is below the sum of the cell bounds
  CHECK(oracle::grid_max(A.f, 1 << 13) < 9.0 / 8);
  CHECK(A.f.min_frequency() >= 0);

  for (long floor : {0L, 1L}) {
    GapResult g = verify_gap(A.f, A.schedule, t0, floor);
    REQUIRE(g.captured);
    CHECK(g.k == 0);
    CHECK(cantor_pair(g.n, 0) >= floor);
    CHECK(g.M >= floor);
    CHECK(g.exceeds);
  }
  // cell (0,0) comes first in the schedule, so its gap does not see the later blocks
  Assembly small = assemble_divergence(T, 0, 0);
  GapResult g0 = verify_gap(small.f, small.schedule, t0, 0), g1 = verify_gap(A.f, A.schedule, t0, 0);
  CHECK(g0.M == g1.M);
  CHECK(g0.N == g1.N);
  CHECK(std::fabs(g0.gap.to_ball().to_double() - g1.gap.to_ball().to_double()) < 1e-25);
  CHECK(!verify_gap(A.f, A.schedule, Rational(-1, 2), 0).captured);
}

TEST_CASE("spectral isolation of the blocks", "[schnorr][assembly][property]") {
  SchnorrTest T = SchnorrTest::rational_point(Rational(-1, 7));
  Assembly A = assemble_divergence(T, 1, 1);
  for (const ScheduleCell& c : A.schedule.cells) {
    REQUIRE(!c.empty);
    TrigPoly block = partial_sum(A.f, c.hi) - (c.lo == 0 ? TrigPoly() : partial_sum(A.f, c.lo - 1));
    auto [p, cert] = build_p(c.G);
    CHECK(block == (QComplex(pow2(-(c.n + c.k + 1))) * p).shifted(c.r));
  }
}

TEST_CASE("integral tests of trivial and one-jump sequences", "[schnorr][integral]") {
  IntegralTest zero = integral_test_from_steps([](long) { return StepFunction::indicator(IntervalSet({{0, 1}})); },
                                               identity_modulus());
  for (long k = 0; k < 6; ++k) {
    CHECK(zero.term_integral_over_pi(k) == Rational(0));
    CHECK(zero.term(k, Rational(1, 3)).mag() < 1e-30);
  }
  CHECK(std::fabs(zero.integral(8).lower_d()) < 1e-15);
  CHECK(eval_integral_test(zero, Rational(1, 2), 10).value.to_ball().mag() < 1e-30);
  CHECK(!eval_integral_test(zero, Rational(1, 2), 10).growing);

  // f_n = 0 for n <= 2 and chi_A afterwards: the jump sits in the window [2, 3]
  const Interval A{Rational(-1, 4), Rational(1, 8)};
  IntegralTest jump = integral_test_from_steps(
      [A](long n) { return n <= 2 ? StepFunction() : StepFunction::indicator(IntervalSet({A})); }, identity_modulus());
  CHECK(jump.term_integral_over_pi(2) == A.length());
  // normalized measure: L / 2 with L in units of pi
  CHECK(*jump.term_integral_over_pi(2) / 2 == Rational(3, 16));
  for (long k : {0L, 1L, 3L, 4L}) CHECK(jump.term_integral_over_pi(k) == Rational(0));
  CHECK(support::contains(jump.term(2, Rational(0)), 1.0));
  Ball edge = jump.term(2, A.b);
  CHECK(edge.lower_d() <= 0);
  CHECK(edge.upper_d() >= 1);

  IntegralTest poly = integral_test_from_modulus([](long) { return TrigPoly::exponential(2); }, identity_modulus(), 64);
  CHECK(poly.term(3, Rational(1, 5)).mag() < 1e-30);
  CHECK(poly.term_integral(3).upper_d() < 1e-30);
}

TEST_CASE("integral test terms stay within 2^{-k+4}", "[schnorr][integral][property]") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    IntegralTest U = integral_test_from_steps([seed](long n) { return support::uniform_step_term(seed, n); },
                                              identity_modulus());
    IntegralTest S = integral_test_from_steps([seed](long n) { return support::sparse_step_term(seed, n); },
                                              AeModulus([](long, long m) { return m; }, "m"));
    for (long k = 0; k <= 12; ++k) {
      for (const IntegralTest* T : {&U, &S}) {
        auto q = T->term_integral_over_pi(k);
        REQUIRE(q.has_value());
        CHECK(*q * pi_upper() <= T->term_tail_bound(k));
        CHECK(T->term_tail_bound(k) == pow2(4 - k));
      }
      // sparse terms are the indicator of A_{k+1}
      CHECK(*S.term_integral_over_pi(k) <= support::sparse_step_term(seed, k + 1).pieces().back().first.length());
    }
    for (const IntegralTest* T : {&U, &S}) {
      Ball prev = T->integral(1).to_ball();
      for (long d = 2; d <= 12; ++d) {
        Ball cur = T->integral(d).to_ball();
        CHECK(cur.lower_d() >= prev.lower_d());
        CHECK(cur.upper_d() <= prev.upper_d());
        prev = cur;
      }
      Ball d6 = T->integral(6).to_ball(), d12 = T->integral(12).to_ball();
      CHECK(d12.lower_d() - d6.lower_d() <= std::ldexp(1.0, 5 - 6));
    }
  }
}

TEST_CASE("integral tests of polynomial sequences", "[schnorr][integral]") {
  // f_n = sum_{j <= n} 2^{-j-1} e_j, |f_M - f_N| <= 2^{-min(M, N)}
  auto seq = [](long n) {
    TrigPoly acc;
    for (long j = 0; j <= n; ++j) acc += TrigPoly::exponential(j, QComplex(pow2(-j - 1)));
    return acc;
  };
  IntegralTest T = integral_test_from_modulus(seq, identity_modulus(), 256);
  for (long k = 0; k <= 6; ++k) {
    CHECK(T.term_integral(k).upper_d() <= T.term_tail_bound(k).get_d());
    for (double t : {-0.7, 0.1, 0.55}) {
      const double want = std::abs(oracle::eval_double(seq(k + 1), M_PI * t) - oracle::eval_double(seq(k), M_PI * t));
      CHECK(std::fabs(T.term(k, Rational(t)).to_double() - std::min(1.0, want)) < 1e-12);
    }
  }
}

TEST_CASE("lower bounds for an oscillating sequence grow", "[schnorr][eval]") {
  const Rational t0(1, 5);
  const IntervalSet around({{t0 - pow2(-6), t0 + pow2(-6)}});
  IntegralTest T = integral_test_from_steps(
      [around](long n) { return StepFunction::indicator(around, n % 2 == 0 ? Rational(0) : Rational(1, 4)); },
      identity_modulus());
  IntegralEval e = eval_integral_test(T, t0, 20);
  REQUIRE(e.partial.size() == 20);
  for (std::size_t k = 0; k < e.partial.size(); ++k) {
    CHECK(e.partial[k] >= 0.25 * double(k + 1) - 1e-30);
    if (k > 0) CHECK(e.partial[k] - e.partial[k - 1] >= 0.25 - 1e-30);
  }
  CHECK(e.growing);
  // away from the oscillation everything is zero
  IntegralEval off = eval_integral_test(T, Rational(-1, 2), 20);
  CHECK(off.value.to_ball().mag() < 1e-30);
  CHECK(!off.growing);
}

TEST_CASE("null cover integral tests", "[schnorr][lsc]") {
  const Rational t0(0);
  IntegralTest T = lsc_from_null_cover(SchnorrTest::rational_point(t0));
  for (long depth : {1L, 5L, 12L}) {
    IntegralEval e = eval_integral_test(T, t0, depth);
    CHECK(std::fabs(e.value.lower_d() - double(depth)) < 1e-12);
  }
  CHECK(T.integral(10).upper_d() <= 2.0);
  CHECK(T.integral(10).lower_d() >= 0.0);

  // 2^-5 lies inside levels 0, 1 and on the boundary of level 2
  IntegralEval near = eval_integral_test(T, pow2(-5), 12);
  CHECK(std::fabs(near.value.lower_d() - 2.0) < 1e-12);
  CHECK(near.value.upper_d() >= 3.0);
  CHECK(near.value.upper_d() <= 3.0 + 1e-12);
  CHECK(eval_integral_test(T, Rational(1, 4), 12).value.to_ball().mag() < 1e-30);
  Ball boundary = T.term(2, pow2(-5));
  CHECK(boundary.lower_d() <= 0);
  CHECK(boundary.upper_d() >= 1);
}

TEST_CASE("Cesaro means of the integral tests", "[schnorr][cesaro]") {
  const Rational t0(1, 3);
  IntegralTest zero =
      integral_test_from_steps([](long) { return StepFunction(); }, AeModulus([](long k, long) { return k; }, "k"));
  for (const auto& [N, v] : cesaro_divergence_demo(zero, t0, 64, 4)) CHECK(v.to_ball().mag() < 1e-30);

  // h = g_0 = chi_[a, b] around t0
  const Rational a = t0 - Rational(1, 16), b = t0 + Rational(1, 8);
  IntegralTest ind = integral_test_from_steps(
      [a, b](long n) { return n == 0 ? StepFunction() : StepFunction::indicator(IntervalSet({{a, b}})); },
      identity_modulus());
  auto series = cesaro_divergence_demo(ind, t0, 512, 1);
  REQUIRE(series.size() == 11);
  CHECK(series.front().first == 0);
  CHECK(series.back().first == 512);
  for (const auto& [N, v] : series) {
    const double want = fejer_mean_indicator(a.get_d(), b.get_d(), t0.get_d(), N);
    CHECK(std::fabs(v.to_ball().to_double() - want) < 1e-12);
    CHECK(v.to_ball().rad() < 1e-20);
  }
  CHECK(series.back().second.lower_d() > 0.98);

  // captured point: terminal values near the depth, nondecreasing in the depth
  IntegralTest lsc = lsc_from_null_cover(SchnorrTest::rational_point(t0));
  double prev = 0;
  for (long depth = 1; depth <= 6; ++depth) {
    auto s = cesaro_divergence_demo(lsc, t0, 4096, depth);
    const double last = s.back().second.lower_d();
    CHECK(last >= prev);
    CHECK(last >= double(depth) - 1);
    CHECK(s.back().second.upper_d() <= double(depth) + 1e-12);
    prev = last;
  }
}
