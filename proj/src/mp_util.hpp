#pragma once

#include "cfa/rational.hpp"

#include <mpfr.h>

#include <cfloat>
#include <cmath>

namespace cfa::detail {

// Error bound for an MPFR result rounded to nearest (ternary == 0 means exact).
inline double rounding_error(mpfr_srcptr x, int ternary) {
  if (ternary == 0) return 0.0;
  if (!mpfr_number_p(x)) return INFINITY;
  if (mpfr_zero_p(x)) return DBL_TRUE_MIN;
  long e = static_cast<long>(mpfr_get_exp(x)) - static_cast<long>(mpfr_get_prec(x));
  if (e < -1074) return DBL_TRUE_MIN;
  if (e > 1023) return INFINITY;
  return std::ldexp(1.0, static_cast<int>(e));
}

inline double mag_of(mpfr_srcptr x) { return std::fabs(mpfr_get_d(x, MPFR_RNDA)); }

// Upper bound of a nonnegative rational as a double.
inline double upper_double(const Rational& q) {
  double d = q.get_d();
  return std::nextafter(d, INFINITY);
}

}  // namespace cfa::detail
