#include "cfa/modulus.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfa {

AeModulus::AeModulus(Raw raw, std::string provenance)
    : state_(std::make_shared<State>()), provenance_(std::move(provenance)) {
  state_->raw = std::move(raw);
}

AeModulus AeModulus::from_table(const std::vector<std::array<long, 3>>& entries, std::string provenance) {
  auto table = std::make_shared<std::map<std::pair<long, long>, long>>();
  for (const auto& e : entries) (*table)[{e[0], e[1]}] = e[2];
  return AeModulus(
      [table](long k, long m) {
        auto it = table->find({k, m});
        if (it == table->end()) throw std::out_of_range("modulus table has no entry for (k, m)");
        return it->second;
      },
      std::move(provenance));
}

long AeModulus::operator()(long k, long m) const {
  if (k < 0 || m < 0) throw std::invalid_argument("modulus arguments must be nonnegative");
  std::lock_guard<std::mutex> lock(state_->mu);
  auto& memo = state_->memo;
  auto hit = memo.find({k, m});
  if (hit != memo.end()) return hit->second;
  // fill the (k+1) x (m+1) block row by row
  for (long i = 0; i <= k; ++i) {
    for (long j = 0; j <= m; ++j) {
      if (memo.count({i, j})) continue;
      long v = state_->raw(i, j);
      if (v < 0) throw std::logic_error("modulus values must be nonnegative");
      if (i > 0) v = std::max(v, memo.at({i - 1, j}));
      if (j > 0) v = std::max(v, memo.at({i, j - 1}));
      memo[{i, j}] = v;
    }
  }
  return memo.at({k, m});
}

std::vector<std::array<long, 3>> AeModulus::table(long k_max, long m_max) const {
  std::vector<std::array<long, 3>> out;
  for (long k = 0; k <= k_max; ++k) {
    for (long m = 0; m <= m_max; ++m) out.push_back({k, m, (*this)(k, m)});
  }
  return out;
}

}  // namespace cfa
