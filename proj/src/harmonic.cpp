#include "cfa/harmonic.hpp"

#include "cfa/trigpoly.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace cfa {

namespace {

const double kEndpointGuard = 0x1p-20;

// Log(w e^{-i beta}) for one arc, after the endpoint guard.
CBall rotated_log(const CBall& z, const Arc& arc) {
  CBall d1 = z - cis(pi_times(arc.t1));
  CBall d2 = z - cis(pi_times(arc.t2));
  if (abs(d1).mig() <= kEndpointGuard || abs(d2).mig() <= kEndpointGuard) {
    throw SingularityError("point too close to an arc endpoint");
  }
  CBall rot = cis(-pi_times(Rational(1, 2) + arc.length() / 2));
  return log(d2 / d1 * rot);
}

void require_closed_disk(const CBall& z) {
  if (abs(z).mig() > 1.0) throw std::domain_error("point outside the closed unit disk");
}

}  // namespace

ArcSet::ArcSet(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) { return a.t1 < b.t1; });
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const Arc& a = arcs_[i];
    if (!(a.t1 > -1 && a.t1 < a.t2 && a.t2 < 1)) throw std::invalid_argument("arc endpoints must satisfy -1 < t1 < t2 < 1");
    if (i > 0 && !(arcs_[i - 1].t2 < a.t1)) throw std::invalid_argument("arcs must be separated by positive gaps");
    total_ += a.length();
  }
  total_ /= 2;
}

bool ArcSet::contains(const Rational& t) const {
  Rational s = t - 2 * Rational(floor((t + 1) / 2));
  for (const Arc& a : arcs_) {
    if (a.t1 < s && s < a.t2) return true;
  }
  return false;
}

Ball harmonic_measure(const CBall& z, const ArcSet& F) {
  if (!(abs(z).upper_d() < 1.0)) throw std::domain_error("harmonic_measure requires |z| < 1");
  Ball pi = Ball::pi();
  Ball sum;
  for (const Arc& arc : F.arcs()) sum += Ball::from_rational(Rational(1, 2)) + rotated_log(z, arc).im / pi;
  return sum;
}

CBall hat_omega(const CBall& z, const ArcSet& F) {
  require_closed_disk(z);
  Ball pi = Ball::pi();
  CBall sum;
  for (const Arc& arc : F.arcs()) {
    CBall l = rotated_log(z, arc);
    // (1/(pi i)) (x + iy) = y/pi - i x/pi
    sum = sum + CBall(Ball::from_rational(Rational(1, 2)) + l.im / pi, -l.re / pi);
  }
  return sum;
}

std::vector<CBall> hat_omega_taylor(const ArcSet& F, long n_max) {
  if (n_max < 0) throw std::invalid_argument("hat_omega_taylor expects n_max >= 0");
  std::vector<CBall> b;
  b.reserve(n_max + 1);
  b.emplace_back(Ball::from_rational(F.total()));
  Ball pi = Ball::pi();
  for (long n = 1; n <= n_max; ++n) {
    CBall x;
    for (const Arc& arc : F.arcs()) x = x + cis(pi_times(-n * arc.t1)) - cis(pi_times(-n * arc.t2));
    Ball scale = pi * Ball(n);
    b.emplace_back(x.im / scale, -x.re / scale);
  }
  return b;
}

double hat_omega_taylor_tail(const ArcSet& F, long n_max, double r) {
  if (!(r >= 0 && r < 1)) throw std::invalid_argument("tail bound needs 0 <= r < 1");
  // |b_n| <= 2 s / (pi n) for s arcs; 3.14 < pi
  double lead = round_up(2.0 * double(F.size()) / (3.14 * double(n_max + 1)));
  return round_up(lead * std::pow(r, double(n_max + 1)) * (1 + 1e-12) / (1 - r));
}

double poisson_oracle(double x, double y, const ArcSet& F, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("poisson_oracle expects tol > 0");
  const long double r2 = (long double)x * x + (long double)y * y;
  if (!(r2 < (1 - 0x1p-10) * (1 - 0x1p-10))) throw std::domain_error("poisson_oracle requires |z| < 1 - 2^-10");
  auto kernel = [&](long double th) {
    long double dx = std::cos(th) - x, dy = std::sin(th) - y;
    return (1 - r2) / (dx * dx + dy * dy);
  };
  using boost::math::quadrature::gauss_kronrod;
  long double total = 0;
  for (const Arc& arc : F.arcs()) {
    long double a = arc.t1.get_d() * M_PIl, b = arc.t2.get_d() * M_PIl;
    long double err = 0;
    total += gauss_kronrod<long double, 15>::integrate(kernel, a, b, 30, tol * 1e-2, &err);
    if (!(err <= tol * 2 * M_PI / double(F.size()))) throw std::runtime_error("poisson_oracle: quadrature budget exceeded");
  }
  return double(total / (2 * M_PIl));
}

}  // namespace cfa
