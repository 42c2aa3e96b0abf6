#pragma once

// Complex discs for hot evaluation loops: an MPFR midpoint pair plus one
// double radius bounding |z - mid|. Temporaries are owned by the disc so
// that Horner-type loops do not allocate.

#include "cfa/ball.hpp"

namespace cfa {

class Disc {
 public:
  explicit Disc(mpfr_prec_t prec = working_precision());
  Disc(const Disc& other);
  Disc(Disc&& other) noexcept;
  Disc& operator=(const Disc& other);
  Disc& operator=(Disc&& other) noexcept;
  ~Disc();

  mpfr_ptr re() { return re_; }
  mpfr_srcptr re() const { return re_; }
  mpfr_ptr im() { return im_; }
  mpfr_srcptr im() const { return im_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(re_); }

  double rad = 0.0;

  void set_zero();
  void set_one();
  void set(const QComplex& q);
  void set(const CBall& z);
  void set(const Disc& z);
  /// e^{it} for t = mid(t) with the ball radius of t added.
  void set_cis(const Ball& t);

  CBall to_cball() const;
  /// Upper bound on |z|.
  double mag() const;
  /// Lower bound on |z|.
  double mig() const;

  void add(const Disc& a);
  void sub(const Disc& a);
  /// this *= a.
  void mul(const Disc& a);
  /// this += a * b.
  void addmul(const Disc& a, const Disc& b);
  /// this *= s for a real scalar s with radius s_rad.
  void mul_real(mpfr_srcptr s, double s_rad);
  void mul_i();
  void conj();
  void widen(double e);

 private:
  mpfr_t re_, im_, t1_, t2_;
};

}  // namespace cfa
