#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "indel/channels.hpp"

namespace indel {

// pi(C)/|C| with pi(C) = sum_y max_{x in C} W(y|x).
double ml_success_prob(const FiniteChannelView& channel, std::span<const std::uint64_t> code);

enum class TieBreak { lowest_index, seeded_random };

/// Greedy code construction. Entry M-1 of each vector describes the code
/// after M insertions.
struct AvbCurve {
  std::vector<double> fer;              // 1 - pi(C_M)/M
  std::vector<double> gains;            // pi(C_M) - pi(C_{M-1})
  std::vector<std::uint64_t> codewords; // insertion order
};

/// Greedy achievability bound. Codewords are added one at a time, each time
/// the input with the largest marginal gain pi(C + x) - pi(C). Gains are kept
/// incrementally: when the best likelihood YP[y] of output y rises to W(y|x),
/// every non-member x' loses min(W(y|x), W(y|x')) - YP[y] where positive.
/// With TieBreak::lowest_index the smallest input index wins ties, so the
/// all-zero word comes first on the deletion and insertion channels.
AvbCurve greedy_avb(const FiniteChannelView& channel, std::uint64_t max_size,
                    TieBreak tie_break = TieBreak::lowest_index, std::uint64_t seed = 0);

struct OptimalCode {
  double fer = 1.0;
  std::vector<std::uint64_t> code;
};

inline constexpr std::uint64_t kDefaultOracleBudget = std::uint64_t{1} << 27;

// Exhaustive minimum FER over all codes of size M. Throws BudgetExceeded when
// C(|X|, M) exceeds budget.
OptimalCode optimal_code_oracle(const FiniteChannelView& channel, std::uint64_t size,
                                std::uint64_t budget = kDefaultOracleBudget);

}  // namespace indel
