#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cfa {

using Rational = mpq_class;

/// Parses "p/q", "p" or a plain decimal such as "-0.125" into an exact rational.
/// Throws std::invalid_argument on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

/// num/den in canonical form (mpq_class(num, den) alone does not reduce).
Rational ratio(long num, long den);

/// Exact 2^e for any integer e.
Rational pow2(long e);

Rational abs(const Rational& q);

/// Floor and ceiling of a rational as arbitrary-size integers.
mpz_class floor(const Rational& q);
mpz_class ceil(const Rational& q);

/// Rational lower/upper bounds on pi (tight to about 2^-100).
const Rational& pi_lower();
const Rational& pi_upper();

/// Exact complex rational, the coefficient type of trigonometric polynomials.
struct QComplex {
  Rational re;
  Rational im;

  QComplex() = default;
  QComplex(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  QComplex(long r) : re(r), im(0) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  QComplex conj() const { return {re, -im}; }
  /// |z|^2, exact.
  Rational norm() const { return re * re + im * im; }

  friend QComplex operator+(const QComplex& a, const QComplex& b) { return {a.re + b.re, a.im + b.im}; }
  friend QComplex operator-(const QComplex& a, const QComplex& b) { return {a.re - b.re, a.im - b.im}; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
};

}  // namespace cfa
