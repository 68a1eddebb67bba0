#include <doctest.h>

#include <random>

#include "indel/achievability.hpp"
#include "indel/error.hpp"
#include "oracles.hpp"

using namespace indel;

TEST_SUITE("achievability") {

TEST_CASE("ML success probability") {
  const SparseChannel id = noiseless_channel(4);
  const std::vector<std::uint64_t> code{0, 2, 3};
  CHECK(ml_success_prob(id, code) == 1.0);
  const SparseChannel bsc = binary_symmetric_channel(0.1);
  const std::vector<std::uint64_t> both{0, 1};
  CHECK(ml_success_prob(bsc, both) == doctest::Approx(0.9));
  const std::vector<std::uint64_t> same{0, 0};
  CHECK(ml_success_prob(bsc, same) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ml_success_prob(bsc, std::vector<std::uint64_t>{}), InvalidArgument);
  CHECK_THROWS_AS(ml_success_prob(bsc, std::vector<std::uint64_t>{2}), InvalidArgument);
}

TEST_CASE("greedy curve properties on random channels") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    const int inputs = oracle::uniform_int(rng, 1, 10);
    const int outputs = oracle::uniform_int(rng, 1, 10);
    Eigen::MatrixXd w(inputs, outputs);
    for (int i = 0; i < inputs; ++i) {
      for (int j = 0; j < outputs; ++j) w(i, j) = rng() % 3 == 0 ? 0.0 : oracle::uniform(rng, 0.0, 1.0);
      if (w.row(i).sum() == 0.0) w(i, 0) = 1.0;
      w.row(i) /= w.row(i).sum();
    }
    const SparseChannel ch = make_channel(w);
    const AvbCurve c = greedy_avb(ch, static_cast<std::uint64_t>(inputs));
    REQUIRE(c.fer.size() == static_cast<std::size_t>(inputs));
    CHECK(c.fer[0] == doctest::Approx(0.0).epsilon(1e-15));
    for (std::size_t k = 0; k < c.fer.size(); ++k) {
      const std::vector<std::uint64_t> prefix(c.codewords.begin(), c.codewords.begin() + static_cast<long>(k) + 1);
      CHECK(std::abs(c.fer[k] - (1.0 - ml_success_prob(ch, prefix))) <= 1e-12);
      if (k > 0) {
        CHECK(c.fer[k] >= c.fer[k - 1] - 1e-12);
        CHECK(c.gains[k] <= c.gains[k - 1] + 1e-12);
      }
    }
    const std::uint64_t size = std::min<std::uint64_t>(3, static_cast<std::uint64_t>(inputs));
    CHECK(c.fer[size - 1] >= optimal_code_oracle(ch, size).fer - 1e-12);
  }
}

TEST_CASE("tie-breaking") {
  const DeletionChannel d(DeletionSpec{4, 0.2});
  const AvbCurve low = greedy_avb(d, 16);
  CHECK(low.codewords.front() == 0);
  const AvbCurve r1 = greedy_avb(d, 16, TieBreak::seeded_random, 7);
  const AvbCurve r2 = greedy_avb(d, 16, TieBreak::seeded_random, 7);
  CHECK(r1.codewords == r2.codewords);
  CHECK(r1.fer.back() == doctest::Approx(low.fer.back()).epsilon(1e-12));
  const InsertionChannel ins(InsertionSpec{3, 0.2});
  CHECK(greedy_avb(ins, 4).codewords.front() == 0);
  CHECK_THROWS_AS(greedy_avb(d, 17), InvalidArgument);
  CHECK_THROWS_AS(greedy_avb(d, 0), InvalidArgument);
}

TEST_CASE("noiseless channel has zero error at every size") {
  const AvbCurve c = greedy_avb(noiseless_channel(6), 6);
  for (double f : c.fer) CHECK(f == 0.0);
  for (double g : c.gains) CHECK(g == 1.0);
}

TEST_CASE("exhaustive oracle") {
  const DeletionChannel d(DeletionSpec{3, 0.3});
  const OptimalCode best = optimal_code_oracle(d, 2);
  CHECK(best.code.size() == 2);
  CHECK(best.fer == doctest::Approx(1.0 - ml_success_prob(d, best.code)).epsilon(1e-14));
  for (std::uint64_t a = 0; a < 8; ++a) {
    for (std::uint64_t b = a + 1; b < 8; ++b) {
      const std::vector<std::uint64_t> code{a, b};
      CHECK(best.fer <= 1.0 - ml_success_prob(d, code) + 1e-14);
    }
  }
  CHECK_THROWS_AS(optimal_code_oracle(DeletionChannel(DeletionSpec{6, 0.3}), 32, 1000), BudgetExceeded);
  CHECK_THROWS_AS(optimal_code_oracle(DeletionChannel(DeletionSpec{7, 0.3}), 2), BudgetExceeded);
}

}  // TEST_SUITE
