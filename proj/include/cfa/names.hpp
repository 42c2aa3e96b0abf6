#pragma once

// Cauchy names: sequences of rational trigonometric polynomials tau_n with
// ||tau_n - tau_{n+1}||_p < 2^-(n+1), and what can be read off them pointwise.

#include "cfa/ball.hpp"
#include "cfa/modulus.hpp"
#include "cfa/trigpoly.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfa {

/// A materialized consecutive pair of a name violates (or cannot be certified to meet) the rate.
class NameRateError : public std::runtime_error {
 public:
  NameRateError(const std::string& what, long index) : std::runtime_error(what), index_(index) {}
  long index() const { return index_; }

 private:
  long index_;
};

class CauchyName {
 public:
  using Generator = std::function<TrigPoly(long)>;
  /// Exact ||f - tau_n||_2^2 for families whose limit f is known.
  using TailSquared = std::function<Rational(long)>;

  /// Terms are produced on demand and memoized; every new consecutive pair is rate-checked.
  explicit CauchyName(Generator gen, Rational p = 2, std::string family = "custom");

  /// Explicit finite list; the last term repeats forever.
  static CauchyName from_terms(std::vector<TrigPoly> terms, Rational p = 2);
  /// tau_n = q for all n.
  static CauchyName constant(TrigPoly q, Rational p = 2);
  /// tau_n = sum_{j <= n} c 2^{-j-1} e_j, with exact L2 tails.
  static CauchyName geometric(QComplex c = QComplex(1));
  /// Name of the polynomial sum_{0 <= j <= degree} coeff(j) e_j whose coefficients are
  /// only known as enclosures (p = 2). tau_n truncates to the least degree whose tail
  /// is below 2^-(n+4) and rounds coefficients to a dyadic grid, so ||f - tau_n||_2 <= 2^-(n+3).
  static CauchyName truncation(std::function<CBall(long)> coeff, long degree);

  /// tau_n; throws NameRateError if some pair up to n fails the rate.
  TrigPoly term(long n) const;
  const Rational& exponent() const;
  const std::string& family() const;
  /// Materializes and checks terms 0..count.
  void verify_rate(long count) const;
  /// Upper bound on ||f - tau_n||_p: 2^-n from the rate unless the family knows better.
  Rational distance_bound(long n) const;
  /// Exact ||f - tau_n||_2^2 when the family provides it.
  std::optional<Rational> tail_l2_squared(long n) const;

  CauchyName& with_distance_bound(std::function<Rational(long)> bound);
  CauchyName& with_tail(TailSquared tail);

 private:
  struct State;
  std::shared_ptr<State> state_;
};

/// eta(k, m) = ceil(((m + 1)/p + k + 1) / 2), a modulus for {tau_{2n}}; p >= 1.
AeModulus theorem54_modulus(const Rational& p);

struct CanonicalEstimate {
  CBall estimate;
  /// Upper bound on max |tau_{2i}(t) - tau_{2j}(t)| over depth/2 <= i < j <= depth.
  double oscillation = 0.0;
};

/// tau_{2 depth}(t) and the observed oscillation of the even subsequence; depth >= 2.
/// No pointwise limit is claimed.
CanonicalEstimate canonical_value(const CauchyName& name, const Rational& t, long depth);

/// Modulus of the interleaving h_{2n} = f_n, h_{2n+1} = g_n:
/// eta(k, m) = eta0(k + 1, m + 2) + eta1(k + 1, m + 2).
AeModulus merge_names(const AeModulus& eta0, const AeModulus& eta1);

/// The interleaved sequence h_0..h_{2 count + 1} of two names.
std::vector<TrigPoly> interleave(const CauchyName& f, const CauchyName& g, long count);

/// Upper bound 2^{p (r - 2n)} on the measure (normalized) of
/// {t : |tau_{2n+1}(t) - tau_{2n}(t)| >= 2^-r}; checks the rate through 2n + 1.
Rational chebyshev_step_bound(const CauchyName& name, long n, long r);

}  // namespace cfa
