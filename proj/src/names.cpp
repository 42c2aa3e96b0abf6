#include "cfa/names.hpp"

#include "mp_util.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace cfa {

struct CauchyName::State {
  Generator gen;
  Rational p;
  std::string family;
  std::mutex mu;
  std::vector<TrigPoly> cache;
  std::function<Rational(long)> distance;
  TailSquared tail;
};

namespace {

bool is_even_integer(const Rational& p) { return p.get_den() == 1 && p.get_num() % 2 == 0; }

// ||a - b||_p < 2^-(index+1), certified.
void check_pair(const TrigPoly& a, const TrigPoly& b, long index, const Rational& p) {
  TrigPoly diff = b - a;
  const Rational bound = pow2(-(index + 1));
  bool ok = false;
  if (p == 2) {
    ok = diff.l2_norm_squared() < bound * bound;
  } else if (diff.is_zero()) {
    ok = true;
  } else {
    try {
      CertifiedReal n = lp_norm(diff, p, is_even_integer(p) ? bound / 1024 : bound / 64);
      Real hi = n.to_ball().upper();
      ok = mpfr_cmp_q(hi.get(), bound.get_mpq_t()) < 0;
    } catch (const BudgetExceeded&) {
      ok = false;
    }
  }
  if (!ok) throw NameRateError("Cauchy name rate ||tau_n - tau_{n+1}||_p < 2^-(n+1) fails", index);
}

Rational round_to_grid(mpfr_srcptr x, long e) {
  Real scaled;
  mpfr_mul_2si(scaled.get(), x, e, MPFR_RNDN);
  mpfr_round(scaled.get(), scaled.get());
  return scaled.to_rational() * pow2(-e);
}

}  // namespace

CauchyName::CauchyName(Generator gen, Rational p, std::string family) : state_(std::make_shared<State>()) {
  if (p < 1) throw std::invalid_argument("Cauchy names need p >= 1");
  state_->gen = std::move(gen);
  state_->p = std::move(p);
  state_->family = std::move(family);
}

CauchyName CauchyName::from_terms(std::vector<TrigPoly> terms, Rational p) {
  if (terms.empty()) throw std::invalid_argument("a name needs at least one term");
  auto shared = std::make_shared<std::vector<TrigPoly>>(std::move(terms));
  CauchyName name(
      [shared](long n) { return (*shared)[std::min<std::size_t>(n, shared->size() - 1)]; }, std::move(p),
      "terms");
  const long last = long(shared->size()) - 1;
  // beyond the list the name is constant, so the distance to the limit is a finite tail
  return name.with_distance_bound([last](long n) { return n >= last ? Rational(0) : pow2(-n); });
}

CauchyName CauchyName::constant(TrigPoly q, Rational p) {
  CauchyName name([q](long) { return q; }, std::move(p), "constant");
  name.with_distance_bound([](long) { return Rational(0); });
  if (name.exponent() == 2) name.with_tail([](long) { return Rational(0); });
  return name;
}

CauchyName CauchyName::geometric(QComplex c) {
  if (!(c.norm() < 4)) throw std::invalid_argument("geometric name needs |c| < 2");
  CauchyName name(
      [c](long n) {
        TrigPoly::Coeffs coeffs;
        for (long j = 0; j <= n; ++j) {
          Rational s = pow2(-j - 1);
          coeffs[j] = QComplex(c.re * s, c.im * s);
        }
        return TrigPoly(coeffs);
      },
      2, "geometric");
  const Rational norm = c.norm();
  // sum_{j > n} 4^{-j-1} = 4^{-n-1} / 3
  name.with_tail([norm](long n) -> Rational { return norm * pow2(-2 * n - 2) / 3; });
  return name;
}

CauchyName CauchyName::truncation(std::function<CBall(long)> coeff, long degree) {
  if (degree < 0) throw std::invalid_argument("truncation name needs degree >= 0");
  auto coeffs = std::make_shared<std::vector<CBall>>();
  auto suffix = std::make_shared<std::vector<double>>(degree + 2, 0.0);
  for (long j = 0; j <= degree; ++j) coeffs->push_back(coeff(j));
  // suffix[d] bounds sum_{j >= d} |c_j|^2
  for (long j = degree; j >= 0; --j) {
    double m = abs((*coeffs)[j]).upper_d();
    (*suffix)[j] = round_up((*suffix)[j + 1] + round_up(m * m));
  }
  // coefficient grid fine enough that the rounding error stays below 2^-(n+6) in L2
  const long extra = 6 + long(std::ceil(std::log2(double(degree + 1)) / 2)) + 1;
  CauchyName name(
      [coeffs, suffix, degree, extra](long n) {
        const double target = std::ldexp(1.0, -2 * (n + 4));
        long d = 0;
        while (d < degree && !((*suffix)[d + 1] <= target)) ++d;
        TrigPoly::Coeffs out;
        for (long j = 0; j <= d; ++j) {
          const CBall& c = (*coeffs)[j];
          out[j] = QComplex(round_to_grid(c.re.mid().get(), n + extra), round_to_grid(c.im.mid().get(), n + extra));
        }
        return TrigPoly(out);
      },
      2, "truncation");
  name.with_distance_bound([](long n) { return pow2(-n - 3); });
  return name;
}

TrigPoly CauchyName::term(long n) const {
  if (n < 0) throw std::invalid_argument("name index must be nonnegative");
  std::lock_guard<std::mutex> lock(state_->mu);
  auto& cache = state_->cache;
  while (long(cache.size()) <= n) {
    TrigPoly next = state_->gen(long(cache.size()));
    if (!cache.empty()) check_pair(cache.back(), next, long(cache.size()) - 1, state_->p);
    cache.push_back(std::move(next));
  }
  return cache[n];
}

void CauchyName::verify_rate(long count) const { term(count); }

const Rational& CauchyName::exponent() const { return state_->p; }

const std::string& CauchyName::family() const { return state_->family; }

Rational CauchyName::distance_bound(long n) const {
  if (state_->distance) return state_->distance(n);
  // sum_{i >= n} 2^-(i+1)
  return pow2(-n);
}

std::optional<Rational> CauchyName::tail_l2_squared(long n) const {
  if (state_->tail) return state_->tail(n);
  return std::nullopt;
}

CauchyName& CauchyName::with_distance_bound(std::function<Rational(long)> bound) {
  state_->distance = std::move(bound);
  return *this;
}

CauchyName& CauchyName::with_tail(TailSquared tail) {
  state_->tail = std::move(tail);
  return *this;
}

AeModulus theorem54_modulus(const Rational& p) {
  if (p < 1) throw std::invalid_argument("theorem54_modulus needs p >= 1");
  return AeModulus(
      [p](long k, long m) {
        Rational v = (Rational(m + 1) / p + k + 1) / 2;
        return ceil(v).get_si();
      },
      "subsequence");
}

CanonicalEstimate canonical_value(const CauchyName& name, const Rational& t, long depth) {
  if (depth < 2) throw std::invalid_argument("canonical_value needs depth >= 2");
  const Ball at = pi_times(t);
  std::vector<CBall> values;
  for (long i = depth / 2; i <= depth; ++i) values.push_back(eval(name.term(2 * i), at));
  CanonicalEstimate out;
  out.estimate = values.back();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      out.oscillation = std::max(out.oscillation, abs(values[i] - values[j]).upper_d());
    }
  }
  return out;
}

AeModulus merge_names(const AeModulus& eta0, const AeModulus& eta1) {
  return AeModulus([eta0, eta1](long k, long m) { return eta0(k + 1, m + 2) + eta1(k + 1, m + 2); }, "merge");
}

std::vector<TrigPoly> interleave(const CauchyName& f, const CauchyName& g, long count) {
  std::vector<TrigPoly> h;
  for (long n = 0; n <= count; ++n) {
    h.push_back(f.term(n));
    h.push_back(g.term(n));
  }
  return h;
}

Rational chebyshev_step_bound(const CauchyName& name, long n, long r) {
  if (n < 0) throw std::invalid_argument("chebyshev_step_bound needs n >= 0");
  name.verify_rate(2 * n + 1);
  Rational e = name.exponent() * (r - 2 * n);
  if (e.get_den() == 1) return pow2(e.get_num().get_si());
  Real x, y;
  mpfr_set_q(x.get(), e.get_mpq_t(), MPFR_RNDU);
  mpfr_exp2(y.get(), x.get(), MPFR_RNDU);
  return y.to_rational();
}

}  // namespace cfa
