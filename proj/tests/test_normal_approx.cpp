#include <doctest.h>

#include <cmath>
#include <random>

#include "indel/error.hpp"
#include "indel/normal_approx.hpp"
#include "oracles.hpp"

using namespace indel;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST_SUITE("normal_approx") {

TEST_CASE("information measures") {
  const SparseChannel id = noiseless_channel(8);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(8, 0.125);
  CHECK(mutual_information(id, u) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(info_variance(id, u) == doctest::Approx(0.0).epsilon(1e-14));
  const SparseChannel bsc = binary_symmetric_channel(0.11);
  const Eigen::VectorXd half = Eigen::VectorXd::Constant(2, 0.5);
  CHECK(mutual_information(bsc, half) == doctest::Approx(1 - h2(0.11)).epsilon(1e-13));
  const double v = 0.11 * 0.89 * std::pow(std::log2(0.89 / 0.11), 2);
  CHECK(info_variance(bsc, half) == doctest::Approx(v).epsilon(1e-12));
  CHECK_THROWS_AS(mutual_information(bsc, Eigen::VectorXd::Constant(3, 1.0 / 3)), InvalidArgument);
  CHECK_THROWS_AS(mutual_information(bsc, Eigen::VectorXd::Constant(2, 0.3)), InvalidArgument);
}

TEST_CASE("Blahut-Arimoto on closed-form channels") {
  for (double p : {0.01, 0.1, 0.25, 0.4}) {
    const BlahutArimotoResult r = blahut_arimoto(binary_symmetric_channel(p));
    CHECK(r.converged);
    CHECK(std::abs(r.information - (1 - h2(p))) <= 1e-8);
    const BlahutArimotoResult e = blahut_arimoto(binary_erasure_channel(p));
    CHECK(std::abs(e.information - (1 - p)) <= 1e-8);
  }
  Eigen::MatrixXd z(2, 2);
  z << 1.0, 0.0, 0.3, 0.7;
  const double q = 0.3;
  const double capacity = std::log2(1 + (1 - q) * std::pow(q, q / (1 - q)));
  CHECK(std::abs(blahut_arimoto(make_channel(z)).information - capacity) <= 1e-8);
}

TEST_CASE("Blahut-Arimoto iterates never decrease") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const int inputs = oracle::uniform_int(rng, 2, 6);
    const int outputs = oracle::uniform_int(rng, 2, 6);
    Eigen::MatrixXd w(inputs, outputs);
    for (int i = 0; i < inputs; ++i) {
      for (int j = 0; j < outputs; ++j) w(i, j) = oracle::uniform(rng, 0.0, 1.0);
      w.row(i) /= w.row(i).sum();
    }
    BlahutArimotoOptions opt;
    opt.record_trace = true;
    const BlahutArimotoResult r = blahut_arimoto(make_channel(w), opt);
    CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations));
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] >= r.trace[k - 1] - 1e-12);
    CHECK(r.information <= std::log2(std::min(inputs, outputs)) + 1e-12);
  }
  BlahutArimotoOptions bad;
  bad.tol = 0.0;
  CHECK_THROWS_AS(blahut_arimoto(noiseless_channel(2), bad), InvalidArgument);
}

TEST_CASE("inverse Gaussian tail") {
  CHECK(inv_gaussian_tail(0.5) == 0.0);
  CHECK(std::abs(inv_gaussian_tail(0.2) - 0.841621) <= 1e-6);
  CHECK(inv_gaussian_tail(0.025) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(inv_gaussian_tail(0.8) == doctest::Approx(-inv_gaussian_tail(0.2)).epsilon(1e-10));
  CHECK_THROWS_AS(inv_gaussian_tail(0.0), InvalidArgument);
  CHECK_THROWS_AS(inv_gaussian_tail(1.0), InvalidArgument);
}

TEST_CASE("normal approximation") {
  const NAResult r = normal_approx_logM(0.5, 0.3, 100, 0.2);
  CHECK(r.log2M_estimate == doctest::Approx(50 - std::sqrt(30.0) * 0.841621).epsilon(1e-6));
  double last = -1e300;
  for (int n = 1; n <= 4096; n *= 2) {
    const double v = normal_approx_logM(0.5, 0.3, n, 0.2).log2M_estimate;
    CHECK(v > last);
    last = v;
  }
  CHECK(normal_approx_logM(0.5, 0.3, 10, 0.3).log2M_estimate > normal_approx_logM(0.5, 0.3, 10, 0.2).log2M_estimate);
  CHECK_THROWS_AS(normal_approx_logM(0.5, -1.0, 10, 0.2), InvalidArgument);
  CHECK_THROWS_AS(normal_approx_logM(0.5, 0.3, 0, 0.2), InvalidArgument);
}

TEST_CASE("blocked channels") {
  const SparseChannel d = blocked_dmc(DeletionSpec{4, 0.2});
  CHECK(d.input_count() == 16);
  CHECK(d.output_count() == 31);
  const SparseChannel i = blocked_dmc(InsertionSpec{3, 0.2});
  CHECK(i.output_count() == 120);
  CHECK_THROWS_AS(blocked_dmc(DeletionSpec{15, 0.2}), ResourceLimit);
  const BlahutArimotoResult r = blahut_arimoto(blocked_dmc(DeletionSpec{1, 0.3}));
  CHECK(std::abs(r.information - 0.7) <= 1e-8);
  const BlahutArimotoResult big = blahut_arimoto(blocked_dmc(DeletionSpec{6, 0.2}));
  CHECK(big.information / 6 <= 0.8 + 1e-9);
  CHECK(big.information / 6 > 0.3);
}

}  // TEST_SUITE
