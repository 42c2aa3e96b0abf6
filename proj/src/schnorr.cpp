#include "cfa/schnorr.hpp"

#include "cfa/disc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace cfa {

namespace {

// 2^{-2^e} as an exact rational; e is kept small enough for the numerator to stay cheap.
Rational doubly_exponential(long e) {
  if (e < 0 || e > 24) throw std::invalid_argument("level index out of range");
  return pow2(-(1L << e));
}

Ball clamp01(const Ball& b) {
  Real lo = b.lower(), hi = b.upper();
  if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);
  if (mpfr_cmp_si(hi.get(), 1) > 0) mpfr_set_si(hi.get(), 1, MPFR_RNDN);
  if (mpfr_greater_p(lo.get(), hi.get())) lo = hi;
  return Ball::from_endpoints(lo, hi);
}

Ball unit_interval() {
  Real lo, hi;
  mpfr_set_si(hi.get(), 1, MPFR_RNDN);
  return Ball::from_endpoints(lo, hi);
}

std::string cell_name(long n, long k) {
  std::ostringstream os;
  os << "cell (" << n << "," << k << ")";
  return os.str();
}

// The value of a partition of [-1, 1] at t: inside a span, or the hull of the spans meeting
// at a breakpoint (the circle closes at -1 = 1).
Ball lookup(const std::vector<IntegralTest::Cell>& cells, const Rational& t) {
  std::optional<Ball> out;
  for (const auto& c : cells) {
    const bool at_edge = t == c.span.a || t == c.span.b || (abs(t) == 1 && abs(c.span.a) == 1) ||
                         (abs(t) == 1 && abs(c.span.b) == 1);
    if (c.span.a < t && t < c.span.b) return c.value;
    if (at_edge) out = out ? hull(*out, c.value) : c.value;
  }
  return out ? *out : Ball();
}

// Memoized generator shared by the copies of an integral test.
template <class T>
class Cache {
 public:
  explicit Cache(std::function<T(long)> gen) : gen_(std::move(gen)) {}
  const T& operator()(long n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(n);
    if (it == memo_.end()) it = memo_.emplace(n, gen_(n)).first;
    return it->second;
  }

 private:
  std::function<T(long)> gen_;
  std::mutex mu_;
  std::map<long, T> memo_;
};

}  // namespace

// ---------------------------------------------------------------- tests

SchnorrTest SchnorrTest::rational_point(const Rational& t0) {
  if (abs(t0) > Rational(7, 8)) throw std::invalid_argument("rational_point expects |t0| <= 7/8");
  SchnorrTest T;
  auto half = [](long n) -> Rational { return pow2(-n - 3); };
  T.interval = [t0, half](long n, long j) -> std::optional<Interval> {
    const Rational h = half(n);
    if (j == 0) return Interval{t0 - h / 2, t0 + h / 2};
    const long s = (j + 1) / 2;
    const Rational inner = h * (1 - pow2(-s)), outer = h * (1 - pow2(-s - 1));
    if (j % 2 == 1) return Interval{t0 - outer, t0 - inner};
    return Interval{t0 + inner, t0 + outer};
  };
  T.tail_bound = [half](long n, long j) -> Rational {
    const Rational h = half(n);
    Rational len;
    if (j < 0) {
      len = 2 * h;
    } else if (j % 2 == 0) {
      len = h * pow2(-(j / 2));
    } else {
      len = 3 * h * pow2(-((j + 1) / 2) - 1);
    }
    return len * pi_upper();
  };
  T.level_measure = [half](long n) { return CertifiedReal::from_ball(pi_times(2 * half(n))); };
  T.outer = [t0, half](long n) { return IntervalSet({{t0 - half(n), t0 + half(n)}}); };
  T.description = "rational_point " + to_string(t0);
  return T;
}

SchnorrTest SchnorrTest::from_levels(std::vector<std::vector<Interval>> levels) {
  auto shared = std::make_shared<std::vector<std::vector<Interval>>>();
  for (auto& level : levels) shared->push_back(disjointify(std::move(level)));
  auto level_of = [shared](long n) -> const std::vector<Interval>& {
    if (n < 0 || n >= static_cast<long>(shared->size()))
      throw InsufficientCoverError("level " + std::to_string(n) + " is not provided");
    return (*shared)[n];
  };
  SchnorrTest T;
  T.interval = [level_of](long n, long j) -> std::optional<Interval> {
    const auto& level = level_of(n);
    if (j < 0 || j >= static_cast<long>(level.size())) return std::nullopt;
    return level[j];
  };
  T.tail_bound = [level_of](long n, long j) -> Rational {
    const auto& level = level_of(n);
    const long used = std::clamp<long>(j + 1, 0, level.size());
    std::vector<Interval> head(level.begin(), level.begin() + used);
    return (union_length(level) - union_length(head)) * pi_upper();
  };
  T.level_measure = [level_of](long n) { return CertifiedReal::from_ball(pi_times(union_length(level_of(n)))); };
  T.outer = [level_of](long n) { return IntervalSet(level_of(n)); };
  T.description = "levels " + std::to_string(shared->size());
  return T;
}

std::vector<Interval> SchnorrTest::enumerate(long n, long count) const {
  std::vector<Interval> out;
  for (long j = 0; j < count; ++j) {
    auto I = interval(n, j);
    if (!I) break;
    out.push_back(*I);
  }
  return out;
}

bool check_level(const SchnorrTest& test, long n, long count) {
  std::vector<Interval> head = test.enumerate(n, count);
  const Ball mu = test.level_measure(n).to_ball();
  const Rational covered = union_length(head) * pi_upper() + test.tail_bound(n, static_cast<long>(head.size()) - 1);
  const Real lo = mu.lower(), hi = mu.upper();
  return mpfr_cmp_q(lo.get(), covered.get_mpq_t()) <= 0 && mpfr_cmp_q(hi.get(), pow2(-n).get_mpq_t()) <= 0;
}

long cantor_pair(long n, long k) {
  if (n < 0 || k < 0) throw std::invalid_argument("cantor_pair expects nonnegative arguments");
  return (n + k) * (n + k + 1) / 2 + k;
}

long select_m(const SchnorrTest& test, long n, long k) {
  if (n < 0 || k < 0) throw std::invalid_argument("select_m expects nonnegative n, k");
  if (n > 20) throw std::invalid_argument("select_m: n too large");
  const long level = 1L << n;
  const long cap = 1L << 16;
  long prev = -1;
  for (long kk = 0; kk <= k; ++kk) {
    const Rational target = doubly_exponential(n + kk + 1);
    long m = 0;
    for (;; ++m) {
      if (test.tail_bound(level, m) < target) break;
      if (m >= cap || !test.interval(level, m + 1))
        throw InsufficientCoverError("level " + std::to_string(level) + " ends before its tail drops below 2^-2^" +
                                     std::to_string(n + kk + 1));
    }
    prev = std::max(m, prev + 1);
  }
  return prev;
}

namespace {

std::pair<long, long> g_indices(const SchnorrTest& test, long n, long k) {
  const long last = select_m(test, n, k);
  const long first = k == 0 ? 0 : select_m(test, n, k - 1) + 1;
  return {first, last};
}

IntervalSet collect(const SchnorrTest& test, long n, long first, long last) {
  std::vector<Interval> pieces;
  for (long j = first; j <= last; ++j) {
    auto I = test.interval(1L << n, j);
    if (!I) break;
    pieces.push_back(*I);
  }
  return IntervalSet(pieces);
}

}  // namespace

IntervalSet build_Gnk(const SchnorrTest& test, long n, long k) {
  auto [first, last] = g_indices(test, n, k);
  return collect(test, n, first, last);
}

// ---------------------------------------------------------------- assembly

Schedule make_schedule(const std::map<std::pair<long, long>, TrigPoly>& polys) {
  std::vector<std::pair<long, std::pair<long, long>>> order;
  for (const auto& [nk, p] : polys) order.push_back({cantor_pair(nk.first, nk.second), nk});
  std::sort(order.begin(), order.end());

  Schedule s;
  long next_free = 0;
  for (const auto& [pair, nk] : order) {
    const TrigPoly& p = polys.at(nk);
    ScheduleCell c;
    c.n = nk.first;
    c.k = nk.second;
    c.pairing = pair;
    if (p.is_zero()) {
      c.r = pair;
    } else {
      const long start = std::max(pair, next_free);
      c.r = std::max(0L, start - p.min_frequency());
      c.lo = c.r + p.min_frequency();
      c.hi = c.r + p.max_frequency();
      c.empty = false;
      next_free = c.hi + 1;
    }
    s.r[nk] = c.r;
    s.cells.push_back(c);
  }
  return s;
}

bool AssemblyReport::all_pass() const {
  for (const CellReport& c : cells) {
    if (!c.measure_ok) return false;
    if (!c.empty && !(c.certificate.passes() && c.scaled_ok && c.sup_ok)) return false;
  }
  return true;
}

Assembly assemble_divergence(const SchnorrTest& test, long n_max, long k_max) {
  if (n_max < 0 || k_max < 0) throw std::invalid_argument("assemble_divergence expects a nonempty grid");
  const Ball threshold = Ball(1) / (Ball(8) * Ball::pi());
  Assembly out;
  out.report.n_max = n_max;
  out.report.k_max = k_max;
  std::map<std::pair<long, long>, TrigPoly> polys;
  Rational grid_weight;

  for (long n = 0; n <= n_max; ++n) {
    for (long k = 0; k <= k_max; ++k) {
      CellReport c;
      c.n = n;
      c.k = k;
      c.pairing = cantor_pair(n, k);
      std::tie(c.j_first, c.j_last) = g_indices(test, n, k);
      c.G = collect(test, n, c.j_first, c.j_last);
      c.measure_ok = c.G.lebesgue_upper() < doubly_exponential(n + k);
      const Rational scale = pow2(-(n + k + 1));
      grid_weight += scale;
      TrigPoly p;
      if (!c.G.empty()) {
        try {
          auto [kk, cert] = build_p(c.G);
          p = QComplex(scale) * kk;
          c.certificate = cert;
        } catch (const CertificateError& e) {
          throw CertificateError(cell_name(n, k) + ": " + e.what(), e.certificate());
        } catch (const InfeasibleError& e) {
          throw InfeasibleError(cell_name(n, k) + ": " + e.what());
        }
        const Ball s = Ball::from_rational(scale);
        c.empty = false;
        c.scaled_min = CertifiedReal::from_ball(c.certificate.measured_min.to_ball() * s);
        c.scaled_sup = CertifiedReal::from_ball(c.certificate.sup_norm.to_ball() * s);
        c.scaled_ok = certainly_less(threshold, c.scaled_min.to_ball());
        c.sup_ok = certainly_less(c.scaled_sup.to_ball(), s);
      }
      polys[{n, k}] = p;
      out.report.cells.push_back(std::move(c));
    }
  }

  out.schedule = make_schedule(polys);
  for (ScheduleCell& sc : out.schedule.cells) {
    for (const CellReport& c : out.report.cells)
      if (c.n == sc.n && c.k == sc.k) sc.G = c.G;
    out.f += polys.at({sc.n, sc.k}).shifted(sc.r);
  }
  out.report.uniform_tail = 2 - grid_weight;
  return out;
}

GapResult verify_gap(const TrigPoly& f, const Schedule& schedule, const Rational& t0, long N_floor) {
  GapResult out;
  const ScheduleCell* cell = nullptr;
  for (const ScheduleCell& c : schedule.cells) {
    if (!c.empty && c.G.contains(t0) && cantor_pair(c.n, 0) >= N_floor) {
      cell = &c;
      break;
    }
  }
  if (!cell) return out;
  out.captured = true;
  out.n = cell->n;
  out.k = cell->k;

  const long first_M = std::max(cell->lo - 1, cell->pairing);
  const long last = cell->hi;
  if (first_M >= last) return out;
  const Ball t = pi_times(t0);
  // z[m] = c_m e^{imt} + c_{-m} e^{-imt}, so S_N - S_M = z[M+1] + ... + z[N]
  std::vector<Disc> z;
  for (long m = first_M + 1; m <= last; ++m) {
    Disc plus, minus, e;
    plus.set(f.coeff(m));
    e.set_cis(Ball(m) * t);
    plus.mul(e);
    minus.set(f.coeff(-m));
    e.conj();
    minus.mul(e);
    plus.add(minus);
    z.push_back(std::move(plus));
  }
  double best = -1;
  for (long M = first_M; M < last; ++M) {
    Disc acc;
    acc.set_zero();
    for (long N = M + 1; N <= last; ++N) {
      acc.add(z[N - first_M - 1]);
      const double lower = acc.mig();
      if (lower > best) {
        best = lower;
        out.M = M;
        out.N = N;
        out.gap = CertifiedReal::from_ball(abs(acc.to_cball()));
      }
    }
  }
  out.exceeds = certainly_less(Ball(1) / (Ball(8) * Ball::pi()), out.gap.to_ball());
  return out;
}

// ---------------------------------------------------------------- step functions

StepFunction::StepFunction(std::vector<std::pair<Interval, Rational>> pieces) : pieces_(std::move(pieces)) {
  for (const auto& [I, h] : pieces_) {
    if (I.a > I.b || I.a < -1 || I.b > 1) throw std::invalid_argument("step piece outside [-1, 1]");
  }
}

StepFunction StepFunction::indicator(const IntervalSet& set, const Rational& height) {
  std::vector<std::pair<Interval, Rational>> pieces;
  for (const Interval& I : set.intervals()) pieces.push_back({I, height});
  return StepFunction(std::move(pieces));
}

std::vector<Rational> StepFunction::breakpoints() const {
  std::set<Rational> pts{Rational(-1), Rational(1)};
  for (const auto& [I, h] : pieces_) {
    pts.insert(I.a);
    pts.insert(I.b);
  }
  return {pts.begin(), pts.end()};
}

Rational StepFunction::value(const Rational& t) const {
  Rational v;
  for (const auto& [I, h] : pieces_)
    if (I.a < t && t < I.b) v += h;
  return v;
}

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
  auto pieces = a.pieces_;
  pieces.insert(pieces.end(), b.pieces_.begin(), b.pieces_.end());
  return StepFunction(std::move(pieces));
}

// ---------------------------------------------------------------- integral tests

IntegralTest::IntegralTest(Shape shape, Point point, std::function<Rational(long)> tail,
                           std::function<Rational(long)> remainder, std::string kind)
    : state_(std::make_shared<State>()), kind_(std::move(kind)) {
  state_->shape = std::move(shape);
  state_->point = std::move(point);
  state_->tail = std::move(tail);
  state_->remainder = std::move(remainder);
}

const std::vector<IntegralTest::Cell>& IntegralTest::shape(long k) const {
  {
    std::lock_guard<std::mutex> lock(state_->mu);
    auto it = state_->memo.find(k);
    if (it != state_->memo.end()) return it->second;
  }
  std::vector<Cell> cells = state_->shape(k);
  std::lock_guard<std::mutex> lock(state_->mu);
  return state_->memo.emplace(k, std::move(cells)).first->second;
}

Ball IntegralTest::term(long k, const Rational& t) const { return state_->point(k, t); }

std::optional<Rational> IntegralTest::term_integral_over_pi(long k) const {
  Rational q;
  for (const Cell& c : shape(k)) {
    if (!c.exact) return std::nullopt;
    q += *c.exact * c.span.length();
  }
  return q;
}

CertifiedReal IntegralTest::term_integral(long k) const {
  if (auto q = term_integral_over_pi(k)) return CertifiedReal::from_ball(pi_times(*q));
  Ball sum;
  for (const Cell& c : shape(k)) sum += c.value * pi_times(c.span.length());
  return CertifiedReal::from_ball(sum);
}

Rational IntegralTest::term_tail_bound(long k) const { return state_->tail(k); }

CertifiedReal IntegralTest::integral(long depth) const {
  Ball sum;
  for (long k = 0; k < depth; ++k) sum += term_integral(k).to_ball();
  Ball top = Ball::from_real(sum.upper()) + Ball::from_rational(state_->remainder(depth));
  return CertifiedReal::from_ball(Ball::from_endpoints(sum.lower(), top.upper()));
}

namespace {

std::pair<long, long> window(const AeModulus& eta, long k) { return {eta(k, k), eta(k + 1, k + 1)}; }

Rational term_bound(long k) { return pow2(4 - k); }
Rational remainder_bound(long d) { return pow2(5 - d); }

}  // namespace

IntegralTest integral_test_from_modulus(std::function<TrigPoly(long)> seq, const AeModulus& eta, long resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  auto cache = std::make_shared<Cache<TrigPoly>>(std::move(seq));

  auto point = [cache, eta](long k, const Rational& t) -> Ball {
    auto [lo, hi] = window(eta, k);
    const Ball x = pi_times(t);
    std::vector<CBall> v;
    for (long M = lo; M <= hi; ++M) v.push_back(eval((*cache)(M), x));
    Ball g;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) g = max(g, abs(v[i] - v[j]));
    return min(g, Ball(1));
  };

  auto shape = [cache, eta, resolution](long k) {
    auto [lo, hi] = window(eta, k);
    std::vector<TrigPolyEvaluator> evs;
    double lip = 0;
    for (long M = lo; M <= hi; ++M) {
      evs.emplace_back((*cache)(M));
      for (long N = lo; N < M; ++N) lip = std::max(lip, ((*cache)(M) - (*cache)(N)).derivative_bound());
    }
    // |g(t) - g(c)| <= max ||(f_M - f_N)'|| |t - c| with |t - c| <= pi / resolution
    const double err = round_up(lip * 3.1415926535897936 / double(resolution));
    std::vector<IntegralTest::Cell> cells;
    for (long i = 0; i < resolution; ++i) {
      Interval span{-1 + ratio(2 * i, resolution), -1 + ratio(2 * (i + 1), resolution)};
      const Ball x = pi_times((span.a + span.b) / 2);
      std::vector<CBall> v;
      for (const auto& ev : evs) v.push_back(ev.value(x).to_cball());
      Ball g;
      for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b) g = max(g, abs(v[a] - v[b]));
      g = min(g, Ball(1));
      g.add_error(err);
      cells.push_back({span, clamp01(g), std::nullopt});
    }
    return cells;
  };
  return IntegralTest(shape, point, term_bound, remainder_bound, "modulus");
}

IntegralTest integral_test_from_steps(std::function<StepFunction(long)> seq, const AeModulus& eta) {
  auto cache = std::make_shared<Cache<StepFunction>>(std::move(seq));
  auto shape = [cache, eta](long k) {
    auto [lo, hi] = window(eta, k);
    std::set<Rational> pts;
    for (long M = lo; M <= hi; ++M)
      for (const Rational& b : (*cache)(M).breakpoints()) pts.insert(b);
    std::vector<Rational> bp(pts.begin(), pts.end());
    std::vector<IntegralTest::Cell> cells;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const Rational mid = (bp[i] + bp[i + 1]) / 2;
      Rational vmin, vmax;
      for (long M = lo; M <= hi; ++M) {
        const Rational v = (*cache)(M).value(mid);
        if (M == lo || v < vmin) vmin = v;
        if (M == lo || v > vmax) vmax = v;
      }
      const Rational g = std::min<Rational>(Rational(1), vmax - vmin);
      if (!cells.empty() && cells.back().exact == g) {
        cells.back().span.b = bp[i + 1];
      } else {
        cells.push_back({{bp[i], bp[i + 1]}, Ball::from_rational(g), g});
      }
    }
    return cells;
  };
  auto point = [shape](long k, const Rational& t) { return lookup(shape(k), t); };
  return IntegralTest(shape, point, term_bound, remainder_bound, "steps");
}

IntegralEval eval_integral_test(const IntegralTest& T, const Rational& t, long depth) {
  if (depth < 1) throw std::invalid_argument("eval_integral_test expects depth >= 1");
  IntegralEval out;
  Ball sum;
  for (long k = 0; k < depth; ++k) {
    sum += T.term(k, t);
    out.partial.push_back(std::max(0.0, sum.lower_d()));
  }
  out.value = CertifiedReal::from_ball(sum);
  const long half = depth / 2;
  const double before = half == 0 ? 0.0 : out.partial[half - 1];
  out.growing = out.partial.back() - before >= std::ldexp(1.0, int(1 - half));
  return out;
}

IntegralTest lsc_from_null_cover(const SchnorrTest& test) {
  struct Level {
    IntervalSet enumerated;
    IntervalSet outer;
  };
  auto cache = std::make_shared<Cache<Level>>([test](long n) {
    std::vector<Interval> pieces;
    for (long j = 0; j < 256; ++j) {
      auto I = test.interval(n, j);
      if (!I) break;
      pieces.push_back(*I);
      if (test.tail_bound(n, j) < pow2(-n - 10)) break;
    }
    return Level{IntervalSet(pieces), test.outer(n)};
  });

  auto shape = [cache](long n) {
    const Level& L = (*cache)(n);
    std::set<Rational> pts{Rational(-1), Rational(1)};
    for (const IntervalSet* s : {&L.enumerated, &L.outer})
      for (const Interval& I : s->intervals()) {
        pts.insert(I.a);
        pts.insert(I.b);
      }
    std::vector<Rational> bp(pts.begin(), pts.end());
    std::vector<IntegralTest::Cell> cells;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const Rational mid = (bp[i] + bp[i + 1]) / 2;
      Interval span{bp[i], bp[i + 1]};
      if (L.enumerated.contains(mid)) {
        cells.push_back({span, Ball(1), Rational(1)});
      } else if (!L.outer.contains(mid)) {
        cells.push_back({span, Ball(), Rational(0)});
      } else {
        cells.push_back({span, unit_interval(), std::nullopt});
      }
    }
    return cells;
  };
  auto point = [cache](long n, const Rational& t) -> Ball {
    const Level& L = (*cache)(n);
    for (const Interval& I : L.enumerated.intervals())
      if (I.a < t && t < I.b) return Ball(1);
    if (!L.outer.contains(t)) return Ball();
    return unit_interval();
  };
  return IntegralTest(
      shape, point, [](long n) { return pow2(-n); }, [](long d) { return pow2(1 - d); }, "null_cover");
}

std::vector<std::pair<long, CertifiedReal>> cesaro_divergence_demo(const IntegralTest& T, const Rational& t0,
                                                                   long N_max, long depth) {
  if (N_max < 0 || depth < 0) throw std::invalid_argument("cesaro_divergence_demo expects N_max, depth >= 0");
  std::vector<long> ladder{0};
  for (long N = 1; N < N_max; N *= 2) ladder.push_back(N);
  if (N_max > 0) ladder.push_back(N_max);

  std::vector<IntegralTest::Cell> cells;
  for (long k = 0; k < depth; ++k) {
    const auto& s = T.shape(k);
    cells.insert(cells.end(), s.begin(), s.end());
  }

  std::vector<std::pair<long, CertifiedReal>> out;
  for (long N : ladder) {
    // Phi(x) = (1/2pi) int_0^{pi x} F_{N+1}
    std::map<Rational, Ball> phi;
    auto Phi = [&](const Rational& x) -> const Ball& {
      auto it = phi.find(x);
      if (it != phi.end()) return it->second;
      Ball v;
      if (sgn(x) > 0) v = fejer_integral(N + 1, Ball(), pi_times(x));
      if (sgn(x) < 0) v = -fejer_integral(N + 1, pi_times(x), Ball());
      return phi.emplace(x, v).first->second;
    };
    Ball sum;
    for (const auto& c : cells) {
      if (c.exact && sgn(*c.exact) == 0) continue;
      // the cell [a, b] contributes over x in [t0 - b, t0 - a]
      Ball mass = Phi(t0 - c.span.a) - Phi(t0 - c.span.b);
      sum += c.value * max(mass, Ball());
    }
    out.push_back({N, CertifiedReal::from_ball(sum)});
  }
  return out;
}

}  // namespace cfa
