#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "indel/channels.hpp"
#include "indel/embedding.hpp"

namespace indel {

// One output-length layer: its max-oriented mass and its probability.
struct LayerStats {
  int w = 0;
  double tau = 0.0;
  double p = 0.0;
};

struct LayerProfile {
  ChannelKind kind = ChannelKind::deletion;
  int m = 0;
  double parameter = 0.0;
  std::vector<LayerStats> layers;  // ascending w, one per available table entry
  bool complete = false;           // every admissible length present
};

// tau_w = E * weight(w), p_w = layer_prob(spec, w) for every table entry.
// Throws InvalidArgument on kind/m mismatch or an empty table.
LayerProfile layer_stats(const ChannelSpec& spec, const EmbeddingTable& table);

// Sum of tau_w in ascending w. Both mo_cvb and the full-set LO-CVB use it.
double total_tau(const LayerProfile& profile);

// Subset of output lengths; `lengths` is sorted ascending.
struct LambdaSet {
  std::vector<int> lengths;
  bool full = false;  // every length of the profile

  std::string str() const;  // "full" or runs such as "3-7+9"
};

enum class BoundMethod { mocvb, locvb, bec, symbolwise, normal };

std::string to_string(BoundMethod method);

struct BoundResult {
  double log2_M = std::numeric_limits<double>::infinity();
  double rate = std::numeric_limits<double>::infinity();  // log2_M / (m n)
  BoundMethod method = BoundMethod::mocvb;
  LambdaSet lambda;
  int n = 1;
  int m = 1;
  double parameter = 0.0;
  double epsilon = 0.0;
};

// log2((P^n) - eps), or -inf when P^n <= eps. Evaluated as
// n ln P + log1p(-eps P^-n) so it stays accurate for large n.
double log2_layer_denominator(double p, int n, double epsilon);

/// Max-oriented converse bound for n uses of a channel with max-mass tau:
/// log2 M <= n log2(tau) - log2(1 - epsilon). `m` only scales the rate.
BoundResult mo_cvb(double tau, int n, double epsilon, int m = 1);

/// Layer-oriented bound for a single Lambda:
/// (sum tau)^n / ((sum p)^n - epsilon), +inf when the denominator is <= 0.
/// When Lambda covers a complete profile its probability is exactly one.
BoundResult lo_cvb_single(const LayerProfile& profile, const LambdaSet& lambda, int n,
                          double epsilon);

enum class LambdaStrategy { exhaustive, segments, full };

std::string to_string(LambdaStrategy strategy);
LambdaStrategy parse_lambda_strategy(const std::string& text);

inline constexpr std::size_t kMaxExhaustiveLengths = 25;

/// Minimum of lo_cvb_single over the strategy's family of Lambda:
///  - exhaustive: every nonempty subset of the available lengths (at most
///    kMaxExhaustiveLengths of them), searched by branch and bound;
///  - segments: every run of consecutive available lengths;
///  - full: the set of all available lengths.
/// Ties go to the lexicographically smallest Lambda. When every candidate is
/// infinite the result is +inf with Lambda = full.
BoundResult lo_cvb(const LayerProfile& profile, int n, double epsilon,
                   LambdaStrategy strategy = LambdaStrategy::exhaustive);

/// Erasure-channel converse: lower bound on the error probability of any code
/// with log2 M = log2M over n uses of BEC(delta),
///   sum_{l > n - log2M} C(n,l) delta^l (1-delta)^(n-l) (1 - 2^(n-l)/M).
double bec_epsilon_lower(int n, double delta, double log2M);

// Largest real log2 M with bec_epsilon_lower <= epsilon, by bisection to 1e-9.
BoundResult bec_max_logM(int n, double delta, double epsilon);

// log2(tau) / m.
double asymptotic_rate(double tau, int m);

struct MaxOrientedDistribution {
  Eigen::VectorXd q;  // indexed by output
  double tau = 0.0;   // sum_y max_x W(y|x)
};

MaxOrientedDistribution max_oriented_distribution(const FiniteChannelView& channel);

/// Symbol-wise converse (1 / (phi - eps)) max_x q_x(phi), where q_x(phi) is
/// the smallest attained value rho of W(Y|x)/Q(Y), Y ~ W(.|x), with
/// Pr[ratio <= rho] >= phi. Cumulative probabilities within 1e-12 of phi
/// count as reaching it, so phi = 1 selects the largest attained ratio.
/// Throws InvalidArgument on zero Q mass at a reachable output or phi <= eps.
BoundResult symbolwise_bound_generic(const FiniteChannelView& channel, const Eigen::VectorXd& q,
                                     double epsilon, double phi);

// asymptotic_rate(total_tau, m); requires a complete profile.
double blocked_capacity_upper(const LayerProfile& profile);

}  // namespace indel
