#pragma once

// Moduli of almost-everywhere convergence.
//
// eta is a modulus for {f_n} if for all k, m the set of t where some pair
// M, N >= eta(k, m) has |f_M(t) - f_N(t)| >= 2^-k has measure below 2^-m.

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace cfa {

class AeModulus {
 public:
  using Raw = std::function<long(long, long)>;

  /// Wraps a raw modulus; values are monotonized by running maxima over k' <= k, m' <= m.
  AeModulus(Raw raw, std::string provenance);

  /// Table-backed modulus; lookups outside the table throw std::out_of_range.
  static AeModulus from_table(const std::vector<std::array<long, 3>>& entries, std::string provenance);

  long operator()(long k, long m) const;
  const std::string& provenance() const { return provenance_; }
  /// Rows (k, m, eta(k, m)) for 0 <= k <= k_max, 0 <= m <= m_max.
  std::vector<std::array<long, 3>> table(long k_max, long m_max) const;

 private:
  struct State {
    Raw raw;
    std::mutex mu;
    std::map<std::pair<long, long>, long> memo;
  };
  std::shared_ptr<State> state_;
  std::string provenance_;
};

}  // namespace cfa
