#pragma once

// Schnorr tests, integral tests, and the assembly of a continuous function
// whose Fourier series diverges at every point a test captures.
//
// Angles are in units of pi as in intervals.hpp. Measures of tests are
// Lebesgue measures on [-pi, pi].

#include "cfa/ball.hpp"
#include "cfa/intervals.hpp"
#include "cfa/kahane.hpp"
#include "cfa/modulus.hpp"
#include "cfa/trigpoly.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cfa {

/// The enumeration of a level ends before its tail bound reaches the target.
class InsufficientCoverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SchnorrTest {
  /// I_{n,j}; nullopt once the stream of level n has ended.
  std::function<std::optional<Interval>(long n, long j)> interval;
  /// Rational upper bound on the measure of U_n minus I_{n,0}, ..., I_{n,j}; j = -1 bounds U_n.
  std::function<Rational(long n, long j)> tail_bound;
  std::function<CertifiedReal(long n)> level_measure;
  /// A closed set containing U_n.
  std::function<IntervalSet(long n)> outer;
  std::string description;

  /// U_n = (t0 - 2^{-n-3}, t0 + 2^{-n-3}) in units of pi, measure 2^{-n-2} pi. I_{n,0} is the
  /// middle half and I_{n,2s-1}, I_{n,2s} are the s-th dyadic shells on the left and right.
  /// Requires |t0| <= 7/8.
  static SchnorrTest rational_point(const Rational& t0);
  /// Finitely many levels, each a finite list; tails are exact.
  static SchnorrTest from_levels(std::vector<std::vector<Interval>> levels);

  /// I_{n,0}, ..., I_{n,count-1}, stopping early at the end of the stream.
  std::vector<Interval> enumerate(long n, long count) const;
};

/// Bookkeeping for level n: enumerated length + tail is not below the certified measure,
/// and the measure is at most 2^-n.
bool check_level(const SchnorrTest& test, long n, long count);

/// Cantor pairing (n + k)(n + k + 1)/2 + k.
long cantor_pair(long n, long k);

/// m_{n,k}: least index with tail_bound(2^n, m) < 2^{-2^{n+k+1}}, made strictly increasing in k.
long select_m(const SchnorrTest& test, long n, long k);

/// G_{n,0} = I_{n,0..m_{n,0}} and G_{n,k} = I_{n,j} for m_{n,k-1} < j <= m_{n,k}, taken from level 2^n.
IntervalSet build_Gnk(const SchnorrTest& test, long n, long k);

struct ScheduleCell {
  long n = 0;
  long k = 0;
  long pairing = 0;
  long r = 0;
  /// Shifted spectrum [lo, hi]; empty cells have no block.
  long lo = 0;
  long hi = -1;
  bool empty = true;
  /// The set this cell is built for (filled in by assemble_divergence).
  IntervalSet G;
};

struct Schedule {
  std::map<std::pair<long, long>, long> r;
  std::string pairing = "cantor";
  /// In pairing order.
  std::vector<ScheduleCell> cells;
};

/// Greedy shifts in pairing order: each block starts at or after max(<n,k>, previous end + 1).
Schedule make_schedule(const std::map<std::pair<long, long>, TrigPoly>& polys);

struct CellReport {
  long n = 0;
  long k = 0;
  long pairing = 0;
  /// Indices of level 2^n used for G.
  long j_first = 0;
  long j_last = -1;
  IntervalSet G;
  /// lambda(G) < 2^{-2^{n+k}}, checked exactly.
  bool measure_ok = false;
  bool empty = true;
  KKCertificate certificate;
  /// 2^{-(n+k+1)} times the certificate's measured minimum and sup norm.
  CertifiedReal scaled_min;
  CertifiedReal scaled_sup;
  /// scaled_min > 1/(8 pi).
  bool scaled_ok = false;
  /// scaled_sup < 2^{-(n+k+1)}.
  bool sup_ok = false;
};

struct AssemblyReport {
  long n_max = 0;
  long k_max = 0;
  std::vector<CellReport> cells;
  /// Sum of 2^{-(n+k+1)} over cells outside the grid: a bound on ||f_full - f||_inf.
  Rational uniform_tail;

  bool all_pass() const;
};

struct Assembly {
  TrigPoly f;
  Schedule schedule;
  AssemblyReport report;
};

/// f = sum over 0 <= n <= n_max, 0 <= k <= k_max of e_{r_{n,k}} 2^{-(n+k+1)} p_{n,k}.
/// A Kahane failure is rethrown as CertificateError naming the cell.
Assembly assemble_divergence(const SchnorrTest& test, long n_max, long k_max);

struct GapResult {
  bool captured = false;
  long n = -1;
  long k = -1;
  long M = 0;
  long N = 0;
  /// Encloses |S_N(f)(t0) - S_M(f)(t0)|.
  CertifiedReal gap;
  /// gap > 1/(8 pi) certified.
  bool exceeds = false;
};

/// Finds the first cell (in pairing order) with t0 in G and <n,0> >= N_floor, and the pair
/// <n,k> <= M < N inside its block maximizing the certified gap.
GapResult verify_gap(const TrigPoly& f, const Schedule& schedule, const Rational& t0, long N_floor);

/// Real step function on [-1, 1]: a sum of weighted indicators of closed intervals.
class StepFunction {
 public:
  StepFunction() = default;
  explicit StepFunction(std::vector<std::pair<Interval, Rational>> pieces);
  static StepFunction indicator(const IntervalSet& set, const Rational& height = 1);

  const std::vector<std::pair<Interval, Rational>>& pieces() const { return pieces_; }
  /// Sorted endpoints including -1 and 1.
  std::vector<Rational> breakpoints() const;
  /// Value on the open cell containing t (t not a breakpoint).
  Rational value(const Rational& t) const;

  friend StepFunction operator+(const StepFunction& a, const StepFunction& b);

 private:
  std::vector<std::pair<Interval, Rational>> pieces_;
};

class IntegralTest {
 public:
  /// Enclosure of g_k on a closed span; exact holds the value when g_k is that constant on
  /// the open span.
  struct Cell {
    Interval span;
    Ball value;
    std::optional<Rational> exact;
  };
  using Shape = std::function<std::vector<Cell>(long k)>;
  using Point = std::function<Ball(long k, const Rational& t)>;

  /// tail(k) bounds the integral of g_k, remainder(d) the sum of those bounds over k >= d.
  IntegralTest(Shape shape, Point point, std::function<Rational(long)> tail,
               std::function<Rational(long)> remainder, std::string kind);

  /// Cells partitioning [-1, 1] (memoized).
  const std::vector<Cell>& shape(long k) const;
  /// Enclosure of g_k(t); at a breakpoint of a step term, the hull of the one-sided values.
  Ball term(long k, const Rational& t) const;
  /// Lebesgue integral of g_k.
  CertifiedReal term_integral(long k) const;
  /// The integral divided by pi, when every cell is exact.
  std::optional<Rational> term_integral_over_pi(long k) const;
  Rational term_tail_bound(long k) const;
  /// Encloses the integral of T from the first depth terms and remainder(depth).
  CertifiedReal integral(long depth) const;
  const std::string& kind() const { return kind_; }

 private:
  struct State {
    Shape shape;
    Point point;
    std::function<Rational(long)> tail;
    std::function<Rational(long)> remainder;
    std::mutex mu;
    std::map<long, std::vector<Cell>> memo;
  };
  std::shared_ptr<State> state_;
  std::string kind_;
};

/// g_k = min(1, max |f_M - f_N| over N_k <= M, N <= N_{k+1}) with N_k = eta(k, k), terms
/// bounded by 2^{-k+4}. Cells of the shape use `resolution` equal spans with Lipschitz
/// enclosures.
IntegralTest integral_test_from_modulus(std::function<TrigPoly(long)> seq, const AeModulus& eta,
                                        long resolution = 1024);
/// Same for step functions; shapes are exact.
IntegralTest integral_test_from_steps(std::function<StepFunction(long)> seq, const AeModulus& eta);

struct IntegralEval {
  /// Encloses sum_{k < depth} g_k(t); its lower end bounds T(t) from below.
  CertifiedReal value;
  /// Lower bounds of the partial sums after each term.
  std::vector<double> partial;
  /// The second half of the terms adds at least 2^{1 - depth/2}, more than a convergent
  /// sequence with this modulus allows there.
  bool growing = false;
};

IntegralEval eval_integral_test(const IntegralTest& T, const Rational& t, long depth);

/// T = sum_n chi_{V_n}, V_n the open interior of the enumerated part of level n. Points
/// outside the enumeration but inside outer(n) are unknown and evaluate to [0, 1].
IntegralTest lsc_from_null_cover(const SchnorrTest& test);

/// (N, sigma_N(h)(t0)) for N = 0, 1, 2, 4, ..., N_max with h = sum_{k < depth} g_k, from
/// (1/2pi) int h(t0 - x) F_{N+1}(x) dx over the cells of h. Lower ends are lower bounds for
/// sigma_N(T)(t0).
std::vector<std::pair<long, CertifiedReal>> cesaro_divergence_demo(const IntegralTest& T, const Rational& t0,
                                                                   long N_max, long depth);

}  // namespace cfa
