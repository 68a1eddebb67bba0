#pragma once

#include <Eigen/Core>

#include <vector>

#include "indel/channels.hpp"

namespace indel {

// Information measures are in bits. Sums skip pairs with p(x) W(y|x) = 0.
double mutual_information(const SparseChannel& channel, const Eigen::VectorXd& p);
double info_variance(const SparseChannel& channel, const Eigen::VectorXd& p);

struct BlahutArimotoOptions {
  double tol = 1e-9;        // stop when the capacity bracket is narrower (bits)
  int max_iter = 100000;
  bool record_trace = false;
};

struct BlahutArimotoResult {
  Eigen::VectorXd p;
  double information = 0.0;  // I(W, p) at the returned p
  double gap = 0.0;          // upper minus lower capacity estimate at stop
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;  // I(W, p_k) per iteration when requested
};

BlahutArimotoResult blahut_arimoto(const SparseChannel& channel,
                                   const BlahutArimotoOptions& options = {});

// z with 0.5 erfc(z / sqrt 2) = eps, by bisection to 1e-12.
double inv_gaussian_tail(double eps);

struct NAResult {
  double information = 0.0;
  double variance = 0.0;
  int n = 1;
  double epsilon = 0.0;
  double log2M_estimate = 0.0;  // an approximation, not a bound
};

// n I - sqrt(n V) Q^-1(eps).
NAResult normal_approx_logM(double information, double variance, int n, double epsilon);

inline constexpr int kMaxBlockedLength = 14;

// D_m or I_m as an explicit DMC, for m <= kMaxBlockedLength.
SparseChannel blocked_dmc(const ChannelSpec& spec);

}  // namespace indel
