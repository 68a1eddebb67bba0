#pragma once

#include <cmath>
#include <cstdint>

namespace indel {

// Exact C(n, k) for 0 <= n <= 64; 0 when k is out of range.
constexpr std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
  return static_cast<std::uint64_t>(r);
}

// ln C(n, k) for large n.
inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// a^k with 0^0 = 1.
inline double ipow(double a, int k) { return k == 0 ? 1.0 : std::pow(a, k); }

}  // namespace indel
