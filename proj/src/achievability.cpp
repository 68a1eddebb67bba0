#include "indel/achievability.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "indel/combinatorics.hpp"
#include "indel/error.hpp"

namespace indel {

double ml_success_prob(const FiniteChannelView& channel, std::span<const std::uint64_t> code) {
  if (code.empty()) throw InvalidArgument("ml_success_prob: empty code");
  std::vector<Transition> row;
  std::vector<Transition> all;
  for (std::uint64_t x : code) {
    if (x >= channel.input_count()) throw InvalidArgument("codeword index out of range");
    channel.row(x, row);
    all.insert(all.end(), row.begin(), row.end());
  }
  std::sort(all.begin(), all.end(), [](const Transition& a, const Transition& b) {
    return a.index != b.index ? a.index < b.index : a.prob > b.prob;
  });
  double pi = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i == 0 || all[i].index != all[i - 1].index) pi += all[i].prob;
  }
  return pi / static_cast<double>(code.size());
}

namespace {

constexpr std::uint64_t kMaxDenseOutputs = std::uint64_t{1} << 28;

void check_dense_outputs(const FiniteChannelView& channel, const char* what) {
  if (channel.output_count() > kMaxDenseOutputs) {
    throw ResourceLimit(std::string(what) + ": output alphabet size", channel.output_count(), kMaxDenseOutputs);
  }
}

// Orders by gain descending, then input index ascending.
struct GainOrder {
  bool operator()(const std::pair<double, std::uint64_t>& a, const std::pair<double, std::uint64_t>& b) const {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  }
};

}  // namespace

AvbCurve greedy_avb(const FiniteChannelView& channel, std::uint64_t max_size, TieBreak tie_break,
                    std::uint64_t seed) {
  const std::uint64_t inputs = channel.input_count();
  if (max_size < 1 || max_size > inputs) {
    throw InvalidArgument("code size must be in [1, " + std::to_string(inputs) + "]");
  }
  check_dense_outputs(channel, "greedy_avb");

  std::vector<double> yp(channel.output_count(), 0.0);
  std::vector<double> xd(inputs, 1.0);
  std::vector<char> member(inputs, 0);
  std::set<std::pair<double, std::uint64_t>, GainOrder> queue;
  for (std::uint64_t x = 0; x < inputs; ++x) queue.emplace(1.0, x);
  std::mt19937_64 rng(seed);

  AvbCurve curve;
  double tau = 0.0;
  std::vector<Transition> row;
  std::vector<Transition> column;
  for (std::uint64_t size = 1; size <= max_size; ++size) {
    auto pick = queue.begin();
    if (tie_break == TieBreak::seeded_random) {
      auto last = pick;
      std::uint64_t ties = 0;
      while (last != queue.end() && last->first == pick->first) {
        ++last;
        ++ties;
      }
      pick = std::next(queue.begin(), static_cast<std::ptrdiff_t>(rng() % ties));
    }
    const auto [gain, x] = *pick;
    queue.erase(pick);
    member[x] = 1;
    tau += gain;

    channel.row(x, row);
    for (const auto& t : row) {
      const double current = yp[t.index];
      if (t.prob <= current) continue;
      channel.column(t.index, column);
      for (const auto& c : column) {
        if (member[c.index]) continue;
        const double loss = std::min(t.prob, c.prob) - current;
        if (loss <= 0.0) continue;
        queue.erase({xd[c.index], c.index});
        xd[c.index] = std::max(0.0, xd[c.index] - loss);
        queue.emplace(xd[c.index], c.index);
      }
      yp[t.index] = t.prob;
    }
    curve.codewords.push_back(x);
    curve.gains.push_back(gain);
    curve.fer.push_back(1.0 - tau / static_cast<double>(size));
  }
  return curve;
}

namespace {

class CodeSearch {
 public:
  CodeSearch(const FiniteChannelView& channel, std::uint64_t size)
      : size_(size), yp_(channel.output_count(), 0.0), rows_(channel.input_count()) {
    for (std::uint64_t x = 0; x < rows_.size(); ++x) channel.row(x, rows_[x]);
  }

  OptimalCode run() {
    descend(0, 0.0);
    return best_;
  }

 private:
  void descend(std::uint64_t next, double pi) {
    if (current_.size() == size_) {
      const double fer = 1.0 - pi / static_cast<double>(size_);
      if (fer < best_.fer || best_.code.empty()) {
        best_.fer = fer;
        best_.code = current_;
      }
      return;
    }
    const std::uint64_t needed = size_ - current_.size();
    for (std::uint64_t x = next; x + needed <= rows_.size(); ++x) {
      const std::size_t mark = undo_.size();
      double gained = 0.0;
      for (const auto& t : rows_[x]) {
        if (t.prob > yp_[t.index]) {
          undo_.emplace_back(t.index, yp_[t.index]);
          gained += t.prob - yp_[t.index];
          yp_[t.index] = t.prob;
        }
      }
      current_.push_back(x);
      descend(x + 1, pi + gained);
      current_.pop_back();
      while (undo_.size() > mark) {
        yp_[undo_.back().first] = undo_.back().second;
        undo_.pop_back();
      }
    }
  }

  std::uint64_t size_;
  std::vector<double> yp_;
  std::vector<std::vector<Transition>> rows_;
  std::vector<std::uint64_t> current_;
  std::vector<std::pair<std::uint64_t, double>> undo_;
  OptimalCode best_;
};

}  // namespace

OptimalCode optimal_code_oracle(const FiniteChannelView& channel, std::uint64_t size, std::uint64_t budget) {
  const std::uint64_t inputs = channel.input_count();
  if (size < 1 || size > inputs) throw InvalidArgument("code size must be in [1, " + std::to_string(inputs) + "]");
  if (inputs > 64) throw BudgetExceeded("optimal_code_oracle: too many inputs", ~std::uint64_t{0}, budget);
  const std::uint64_t codes = binomial(static_cast<int>(inputs), static_cast<int>(size));
  if (codes > budget) throw BudgetExceeded("optimal_code_oracle: candidate codes", codes, budget);
  check_dense_outputs(channel, "optimal_code_oracle");
  return CodeSearch(channel, size).run();
}

}  // namespace indel
