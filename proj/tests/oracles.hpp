#pragma once

// Slow, direct reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

inline std::string word(int len, std::uint64_t bits) {
  std::string s(static_cast<std::size_t>(len), '0');
  for (int i = 0; i < len; ++i) s[static_cast<std::size_t>(i)] = ((bits >> i) & 1U) ? '1' : '0';
  return s;
}

// Number of ways to pick y as a subsequence of x.
inline std::uint64_t subsequence_count(const std::string& x, const std::string& y) {
  std::vector<std::uint64_t> ways(y.size() + 1, 0);
  ways[0] = 1;
  for (char c : x) {
    for (std::size_t j = y.size(); j > 0; --j) {
      if (y[j - 1] == c) ways[j] += ways[j - 1];
    }
  }
  return ways[y.size()];
}

inline void removals(const std::string& y, std::size_t from, int left, std::string& kept,
                     std::vector<char>& removed, std::map<std::string, std::uint64_t>& counts) {
  if (left == 0) {
    std::string rest = kept;
    rest.append(y, from, std::string::npos);
    ++counts[rest];
    return;
  }
  for (std::size_t p = std::max<std::size_t>(from, 1); p < y.size(); ++p) {
    if (removed[p - 1]) continue;
    const std::size_t mark = kept.size();
    kept.append(y, from, p - from);
    removed[p] = 1;
    removals(y, p + 1, left - 1, kept, removed, counts);
    removed[p] = 0;
    kept.resize(mark);
  }
}

// For every x, the number of removal sets of d pairwise non-adjacent
// positions of y, excluding the first one, that leave x.
inline std::map<std::string, std::uint64_t> one_embedding_counts(const std::string& y, int d) {
  std::map<std::string, std::uint64_t> counts;
  std::string kept;
  std::vector<char> removed(y.size() + 1, 0);
  removals(y, 0, d, kept, removed, counts);
  return counts;
}

inline std::uint64_t one_embedding_count(const std::string& y, const std::string& x) {
  const auto counts = one_embedding_counts(y, static_cast<int>(y.size() - x.size()));
  auto it = counts.find(x);
  return it == counts.end() ? 0 : it->second;
}

// Sum over y of max over x of the subsequence count.
inline std::uint64_t max_sum_deletion(int m, int w) {
  std::uint64_t total = 0;
  std::vector<std::string> inputs;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) inputs.push_back(word(m, x));
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << w); ++y) {
    const std::string ys = word(w, y);
    std::uint64_t best = 0;
    for (const auto& xs : inputs) best = std::max(best, subsequence_count(xs, ys));
    total += best;
  }
  return total;
}

inline std::uint64_t max_sum_insertion(int w, int m) {
  std::uint64_t total = 0;
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << w); ++y) {
    std::uint64_t best = 0;
    for (const auto& [x, c] : one_embedding_counts(word(w, y), w - m)) best = std::max(best, c);
    total += best;
  }
  return total;
}

inline double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::uint64_t random_bits(std::mt19937_64& rng, int len) {
  return len == 0 ? 0 : rng() & ((len >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1);
}

}  // namespace oracle
