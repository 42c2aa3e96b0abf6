#include "cfa/intervals.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfa {

namespace {

std::vector<Interval> clipped_sorted(std::vector<Interval> pieces) {
  std::vector<Interval> out;
  out.reserve(pieces.size());
  for (Interval& p : pieces) {
    if (p.a > p.b) throw std::invalid_argument("interval with a > b");
    if (p.a < -1) p.a = -1;
    if (p.b > 1) p.b = 1;
    if (p.a >= p.b) continue;
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  });
  return out;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> pieces) {
  for (Interval& p : clipped_sorted(std::move(pieces))) {
    if (!pieces_.empty() && p.a <= pieces_.back().b) {
      if (p.b > pieces_.back().b) pieces_.back().b = p.b;
    } else {
      pieces_.push_back(std::move(p));
    }
  }
}

Rational IntervalSet::length() const {
  Rational total;
  for (const Interval& p : pieces_) total += p.length();
  return total;
}

Rational IntervalSet::lebesgue_upper() const { return length() * pi_upper(); }

bool IntervalSet::contains(const Rational& t) const {
  for (const Interval& p : pieces_) {
    if (p.a <= t && t <= p.b) return true;
  }
  return false;
}

IntervalSet IntervalSet::rotated(const Rational& r) const {
  // reduce the shift into [-1, 1) so each piece wraps at most once
  Rational s = r - 2 * Rational(floor((r + 1) / 2));
  std::vector<Interval> out;
  for (const Interval& p : pieces_) {
    Rational a = p.a + s, b = p.b + s;
    if (b <= 1 && a >= -1) {
      out.push_back({a, b});
    } else if (a > 1 || b < -1) {
      Rational w = a > 1 ? Rational(-2) : Rational(2);
      out.push_back({a + w, b + w});
    } else if (b > 1) {
      out.push_back({a, 1});
      out.push_back({-1, b - 2});
    } else {
      out.push_back({-1, b});
      out.push_back({a + 2, 1});
    }
  }
  return IntervalSet(std::move(out));
}

std::vector<Interval> IntervalSet::circle_gaps() const {
  std::vector<Interval> gaps;
  if (pieces_.empty()) {
    gaps.push_back({-1, 1});
    return gaps;
  }
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) gaps.push_back({pieces_[i].b, pieces_[i + 1].a});
  // wrap-around gap from the last piece through pi back to the first
  if (pieces_.back().b < pieces_.front().a + 2) gaps.push_back({pieces_.back().b, pieces_.front().a + 2});
  return gaps;
}

std::vector<Interval> disjointify(std::vector<Interval> pieces) {
  std::vector<Interval> out;
  Rational reach;
  bool any = false;
  for (Interval& p : clipped_sorted(std::move(pieces))) {
    if (any && p.b <= reach) continue;
    if (any && p.a < reach) p.a = reach;
    reach = p.b;
    any = true;
    out.push_back(std::move(p));
  }
  return out;
}

Rational union_length(const std::vector<Interval>& pieces) { return IntervalSet(pieces).length(); }

}  // namespace cfa
