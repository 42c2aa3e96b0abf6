#pragma once

// Finite unions of closed rational intervals of [-pi, pi].
//
// Endpoints are stored in units of pi, so [a, b] stands for [pi a, pi b] and
// every measure is an exact rational.

#include "cfa/rational.hpp"

#include <vector>

namespace cfa {

struct Interval {
  Rational a;
  Rational b;

  Rational length() const { return b - a; }
  friend bool operator==(const Interval& x, const Interval& y) { return x.a == y.a && x.b == y.b; }
};

class IntervalSet {
 public:
  IntervalSet() = default;
  /// Union of the pieces clipped to [-1, 1]; overlapping or touching pieces are merged
  /// and empty pieces dropped.
  explicit IntervalSet(std::vector<Interval> pieces);

  const std::vector<Interval>& intervals() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }
  /// Total length in units of pi.
  Rational length() const;
  /// Normalized measure lambda / (2 pi) = length / 2.
  Rational normalized_measure() const { return length() / 2; }
  /// Rigorous upper bound on the Lebesgue measure (in radians).
  Rational lebesgue_upper() const;
  bool contains(const Rational& t) const;
  /// The set translated by r (units of pi) on the circle, wrapped back into [-1, 1].
  IntervalSet rotated(const Rational& r) const;
  /// Complementary open gaps on the circle, in order; the wrap-around gap ends past 1.
  std::vector<Interval> circle_gaps() const;

  friend bool operator==(const IntervalSet& x, const IntervalSet& y) { return x.pieces_ == y.pieces_; }

 private:
  std::vector<Interval> pieces_;
};

/// Same union as the input, sorted, with overlaps clipped so that distinct pieces
/// meet in at most one point. Pieces are clipped to [-1, 1].
std::vector<Interval> disjointify(std::vector<Interval> pieces);

/// Exact length of the union of the pieces.
Rational union_length(const std::vector<Interval>& pieces);

}  // namespace cfa
