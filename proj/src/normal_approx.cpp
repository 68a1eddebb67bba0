#include "indel/normal_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "indel/error.hpp"

namespace indel {

namespace {

using RowMatrix = SparseChannel::RowMatrix;

// Smallest input probability kept by Blahut-Arimoto. Without it the
// multiplicative update underflows to zero and outputs reachable only from
// those inputs get q = 0.
constexpr double kProbabilityFloor = 1e-250;

double positive(double q) { return std::max(q, std::numeric_limits<double>::min()); }

void check_distribution(const SparseChannel& channel, const Eigen::VectorXd& p) {
  if (p.size() != channel.matrix().rows()) throw InvalidArgument("input distribution size does not match channel");
  if ((p.array() < 0.0).any() || std::abs(p.sum() - 1.0) > 1e-12) {
    throw InvalidArgument("input distribution must be nonnegative and sum to one");
  }
}

Eigen::VectorXd output_distribution(const SparseChannel& channel, const Eigen::VectorXd& p) {
  return channel.matrix().transpose() * p;
}

// Per-input divergence D(W(.|x) || q) in bits.
Eigen::VectorXd divergences(const RowMatrix& w, const Eigen::VectorXd& q) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(w.rows());
  for (Eigen::Index x = 0; x < w.outerSize(); ++x) {
    double sum = 0.0;
    for (RowMatrix::InnerIterator it(w, x); it; ++it) {
      if (it.value() > 0.0) sum += it.value() * std::log2(it.value() / positive(q[it.col()]));
    }
    d[x] = sum;
  }
  return d;
}

}  // namespace

double mutual_information(const SparseChannel& channel, const Eigen::VectorXd& p) {
  check_distribution(channel, p);
  const Eigen::VectorXd q = output_distribution(channel, p);
  const RowMatrix& w = channel.matrix();
  double info = 0.0;
  for (Eigen::Index x = 0; x < w.outerSize(); ++x) {
    if (p[x] <= 0.0) continue;
    for (RowMatrix::InnerIterator it(w, x); it; ++it) {
      if (it.value() > 0.0) info += p[x] * it.value() * std::log2(it.value() / positive(q[it.col()]));
    }
  }
  return std::max(0.0, info);
}

double info_variance(const SparseChannel& channel, const Eigen::VectorXd& p) {
  check_distribution(channel, p);
  const Eigen::VectorXd q = output_distribution(channel, p);
  const RowMatrix& w = channel.matrix();
  double first = 0.0;
  double second = 0.0;
  for (Eigen::Index x = 0; x < w.outerSize(); ++x) {
    if (p[x] <= 0.0) continue;
    for (RowMatrix::InnerIterator it(w, x); it; ++it) {
      if (it.value() <= 0.0) continue;
      const double density = std::log2(it.value() / positive(q[it.col()]));
      const double mass = p[x] * it.value();
      first += mass * density;
      second += mass * density * density;
    }
  }
  return std::max(0.0, second - first * first);
}

BlahutArimotoResult blahut_arimoto(const SparseChannel& channel, const BlahutArimotoOptions& options) {
  if (!(options.tol > 0.0)) throw InvalidArgument("Blahut-Arimoto tolerance must be positive");
  if (options.max_iter < 1) throw InvalidArgument("Blahut-Arimoto needs at least one iteration");
  const RowMatrix& w = channel.matrix();
  const auto inputs = w.rows();
  BlahutArimotoResult result;
  result.p = Eigen::VectorXd::Constant(inputs, 1.0 / static_cast<double>(inputs));
  for (int iter = 1;; ++iter) {
    const Eigen::VectorXd q = output_distribution(channel, result.p);
    const Eigen::VectorXd d = divergences(w, q);
    const double lower = result.p.dot(d);
    const double upper = d.maxCoeff();
    result.information = std::max(0.0, lower);
    result.gap = upper - lower;
    result.iterations = iter;
    if (options.record_trace) result.trace.push_back(result.information);
    if (result.gap < options.tol) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;
    // p_x <- p_x 2^(D_x) / normalizer; the shift by `upper` avoids overflow.
    Eigen::VectorXd next = result.p.array() * ((d.array() - upper) * std::log(2.0)).exp();
    next /= next.sum();
    next = next.cwiseMax(kProbabilityFloor);
    result.p = next / next.sum();
  }
  return result;
}

double inv_gaussian_tail(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("inv_gaussian_tail needs 0 < eps < 1");
  double lo = -40.0;
  double hi = 40.0;
  double mid = 0.0;
  while (hi - lo > 1e-12) {
    mid = 0.5 * (lo + hi);
    const double tail = 0.5 * std::erfc(mid / std::sqrt(2.0));
    if (tail == eps) return mid;
    if (tail > eps) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

NAResult normal_approx_logM(double information, double variance, int n, double epsilon) {
  if (n < 1) throw InvalidArgument("block count n must be >= 1");
  if (!(variance >= 0.0)) throw InvalidArgument("information variance must be nonnegative");
  NAResult r;
  r.information = information;
  r.variance = variance;
  r.n = n;
  r.epsilon = epsilon;
  const double z = inv_gaussian_tail(epsilon);
  r.log2M_estimate = n * information - std::sqrt(n * variance) * z;
  return r;
}

SparseChannel blocked_dmc(const ChannelSpec& spec) {
  const int m = input_length(spec);
  if (m > kMaxBlockedLength) {
    throw ResourceLimit("blocked channel input length", static_cast<std::uint64_t>(m), kMaxBlockedLength);
  }
  if (const auto* d = std::get_if<DeletionSpec>(&spec)) return materialize(DeletionChannel(*d));
  return materialize(InsertionChannel(std::get<InsertionSpec>(spec)));
}

}  // namespace indel
