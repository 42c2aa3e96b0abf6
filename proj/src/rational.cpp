#include "cfa/rational.hpp"

#include <mpfr.h>

#include <cctype>
#include <stdexcept>

namespace cfa {

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  if (!is_integer_literal(s)) throw std::invalid_argument("malformed rational: '" + std::string(s) + "'");
  std::string body(s[0] == '+' ? s.substr(1) : s);
  return mpz_class(body, 10);
}

Rational pi_bound(mpfr_rnd_t rnd) {
  mpfr_t pi;
  mpfr_init2(pi, 128);
  mpfr_const_pi(pi, rnd);
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, pi);
  Rational out(q);
  mpq_clear(q);
  mpfr_clear(pi);
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    std::string digits(whole.empty() || whole == "-" || whole == "+" ? std::string("0") : std::string(whole));
    if (frac.empty() || !is_integer_literal(frac) || frac[0] == '-' || frac[0] == '+') {
      throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    }
    mpz_class ipart = parse_integer(digits == "-" ? "0" : digits);
    mpz_class fpart(std::string(frac), 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational q(abs(ipart) * scale + fpart, scale);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  }
  return Rational(parse_integer(text));
}

Rational ratio(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational pow2(long e) {
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(e < 0 ? -e : e));
  if (e >= 0) return Rational(p);
  Rational q(mpz_class(1), p);
  q.canonicalize();
  return q;
}

Rational abs(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

mpz_class floor(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class ceil(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

const Rational& pi_lower() {
  static const Rational value = pi_bound(MPFR_RNDD);
  return value;
}

const Rational& pi_upper() {
  static const Rational value = pi_bound(MPFR_RNDU);
  return value;
}

}  // namespace cfa
