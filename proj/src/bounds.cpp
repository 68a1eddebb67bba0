#include "indel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "indel/combinatorics.hpp"
#include "indel/error.hpp"

namespace indel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must be in [0, 1)");
}

void check_blocks(int n) {
  if (n < 1) throw InvalidArgument("block count n must be >= 1");
}

// n log2(T) - log2(P^n - eps); +inf when the denominator is not positive.
double layer_bound_log2(double tau_sum, double p_sum, int n, double epsilon) {
  const double den = log2_layer_denominator(p_sum, n, epsilon);
  if (den == -kInf) return kInf;
  return n * std::log2(tau_sum) - den;
}

BoundResult make_result(double log2_M, BoundMethod method, int n, int m, double parameter, double epsilon) {
  BoundResult r;
  r.log2_M = log2_M;
  r.rate = log2_M == kInf ? kInf : log2_M / (static_cast<double>(m) * n);
  r.method = method;
  r.n = n;
  r.m = m;
  r.parameter = parameter;
  r.epsilon = epsilon;
  return r;
}

}  // namespace

LayerProfile layer_stats(const ChannelSpec& spec, const EmbeddingTable& table) {
  const int m = input_length(spec);
  if (table.kind() != kind_of(spec) || table.m() != m) {
    throw InvalidArgument("table (" + to_string(table.kind()) + ", m=" + std::to_string(table.m()) +
                          ") does not match the channel (" + to_string(kind_of(spec)) +
                          ", m=" + std::to_string(m) + ")");
  }
  if (table.size() == 0) throw InvalidArgument("empty embedding table");
  LayerProfile profile;
  profile.kind = kind_of(spec);
  profile.m = m;
  profile.parameter = parameter_of(spec);
  profile.complete = table.complete();
  const double a = profile.parameter;
  for (const auto& [w, entry] : table.entries()) {
    const auto e = static_cast<double>(entry.value);
    double weight = 0.0;
    if (profile.kind == ChannelKind::deletion) {
      weight = ipow(a, m - w) * ipow(1.0 - a, w);
    } else {
      const int d = w - m;
      weight = ipow(a, d) * ipow(1.0 - a, m - d) * std::ldexp(1.0, -d);
    }
    profile.layers.push_back({w, e * weight, layer_prob(spec, w)});
  }
  return profile;
}

double total_tau(const LayerProfile& profile) {
  double sum = 0.0;
  for (const auto& layer : profile.layers) sum += layer.tau;
  return sum;
}

std::string LambdaSet::str() const {
  if (full) return "full";
  std::string out;
  for (std::size_t i = 0; i < lengths.size();) {
    std::size_t j = i;
    while (j + 1 < lengths.size() && lengths[j + 1] == lengths[j] + 1) ++j;
    if (!out.empty()) out += '+';
    out += std::to_string(lengths[i]);
    if (j > i) out += "-" + std::to_string(lengths[j]);
    i = j + 1;
  }
  return out;
}

std::string to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::mocvb: return "mocvb";
    case BoundMethod::locvb: return "locvb";
    case BoundMethod::bec: return "bec";
    case BoundMethod::symbolwise: return "symbolwise";
    case BoundMethod::normal: return "normal";
  }
  return "unknown";
}

double log2_layer_denominator(double p, int n, double epsilon) {
  if (p >= 1.0) return std::log1p(-epsilon) / std::numbers::ln2;
  if (p <= 0.0) return -kInf;
  const double log_pn = n * std::log(p);
  if (epsilon == 0.0) return log_pn / std::numbers::ln2;
  // eps P^-n must stay below one.
  const double t = std::log(epsilon) - log_pn;
  if (t >= 0.0) return -kInf;
  return (log_pn + std::log1p(-std::exp(t))) / std::numbers::ln2;
}

BoundResult mo_cvb(double tau, int n, double epsilon, int m) {
  check_epsilon(epsilon);
  check_blocks(n);
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  BoundResult r = make_result(layer_bound_log2(tau, 1.0, n, epsilon), BoundMethod::mocvb, n, m, 0.0, epsilon);
  r.lambda.full = true;
  return r;
}

BoundResult lo_cvb_single(const LayerProfile& profile, const LambdaSet& lambda, int n, double epsilon) {
  check_epsilon(epsilon);
  check_blocks(n);
  double tau_sum = 0.0;
  double p_sum = 0.0;
  std::size_t used = 0;
  if (lambda.full) {
    tau_sum = total_tau(profile);
    for (const auto& layer : profile.layers) p_sum += layer.p;
    used = profile.layers.size();
  } else {
    if (lambda.lengths.empty()) throw InvalidArgument("empty Lambda");
    for (int w : lambda.lengths) {
      auto it = std::find_if(profile.layers.begin(), profile.layers.end(),
                             [w](const LayerStats& s) { return s.w == w; });
      if (it == profile.layers.end()) throw InvalidArgument("Lambda length " + std::to_string(w) + " unavailable");
      tau_sum += it->tau;
      p_sum += it->p;
      ++used;
    }
  }
  const bool everything = profile.complete && used == profile.layers.size();
  if (everything) p_sum = 1.0;
  BoundResult r = make_result(layer_bound_log2(tau_sum, p_sum, n, epsilon), BoundMethod::locvb, n, profile.m,
                              profile.parameter, epsilon);
  r.lambda = lambda;
  if (used == profile.layers.size()) r.lambda = LambdaSet{{}, true};
  return r;
}

std::string to_string(LambdaStrategy strategy) {
  switch (strategy) {
    case LambdaStrategy::exhaustive: return "exhaustive";
    case LambdaStrategy::segments: return "segments";
    case LambdaStrategy::full: return "full";
  }
  return "unknown";
}

LambdaStrategy parse_lambda_strategy(const std::string& text) {
  if (text == "exhaustive") return LambdaStrategy::exhaustive;
  if (text == "segments") return LambdaStrategy::segments;
  if (text == "full") return LambdaStrategy::full;
  throw InvalidArgument("unknown Lambda strategy '" + text + "'");
}

namespace {

/// Depth-first search over subsets in lexicographic order (include first).
/// Two exact pruning rules:
///  - adding a layer whose tau/p lies below the T/P of a set strictly lowers
///    the objective, so a set that leaves out layer u can only be optimal if
///    its T/P does not exceed tau_u/p_u;
///  - the objective n log2(T/P) - log2(1 - eps P^-n) is bounded below by the
///    smallest reachable ratio and the largest reachable probability.
class LambdaSearch {
 public:
  LambdaSearch(const LayerProfile& profile, int n, double epsilon) : profile_(profile), n_(n), eps_(epsilon) {
    const std::size_t k = profile.layers.size();
    suffix_p_.assign(k + 1, 0.0);
    suffix_min_ratio_.assign(k + 1, kInf);
    for (std::size_t i = k; i-- > 0;) {
      suffix_p_[i] = suffix_p_[i + 1] + profile.layers[i].p;
      suffix_min_ratio_[i] = std::min(suffix_min_ratio_[i + 1], ratio(i));
    }
  }

  // `known` is the value of some member of the family; it only tightens
  // pruning, the reported optimum still comes from the search itself.
  void run(double known) {
    threshold_ = known;
    visit(0, 0.0, 0.0, kInf);
  }

  double best = kInf;
  std::vector<int> best_set;

 private:
  double ratio(std::size_t i) const {
    const auto& l = profile_.layers[i];
    return l.p > 0.0 ? l.tau / l.p : kInf;
  }

  void visit(std::size_t i, double tau_sum, double p_sum, double cap) {
    if (i == profile_.layers.size()) return;
    const double ratio_floor = p_sum > 0.0 ? std::min(tau_sum / p_sum, suffix_min_ratio_[i]) : suffix_min_ratio_[i];
    if (ratio_floor > cap * (1.0 + 1e-12)) return;
    const double p_max = std::min(1.0, p_sum + suffix_p_[i]);
    const double den = log2_layer_denominator(p_max, n_, eps_);
    if (den == -kInf) return;
    if (ratio_floor > 0.0 && ratio_floor < kInf) {
      const double bound = n_ * std::log2(ratio_floor) - (den - n_ * std::log2(p_max));
      const double limit = std::min(best, threshold_);
      if (bound > limit + 1e-12 * std::max(1.0, std::abs(limit))) return;
    }

    const auto& layer = profile_.layers[i];
    current_.push_back(layer.w);
    const double t = tau_sum + layer.tau;
    double p = p_sum + layer.p;
    if (profile_.complete && current_.size() == profile_.layers.size()) p = 1.0;
    const double value = layer_bound_log2(t, p, n_, eps_);
    if (value < best) {
      best = value;
      best_set = current_;
    }
    visit(i + 1, t, p, cap);
    current_.pop_back();
    visit(i + 1, tau_sum, p_sum, std::min(cap, ratio(i)));
  }

  const LayerProfile& profile_;
  int n_;
  double eps_;
  std::vector<double> suffix_p_;
  std::vector<double> suffix_min_ratio_;
  std::vector<int> current_;
  double threshold_ = kInf;
};

bool lexicographically_less(const LambdaSet& a, const LambdaSet& b, const LayerProfile& profile) {
  auto lengths = [&](const LambdaSet& s) {
    if (!s.full) return s.lengths;
    std::vector<int> all;
    for (const auto& l : profile.layers) all.push_back(l.w);
    return all;
  };
  return lengths(a) < lengths(b);
}

}  // namespace

BoundResult lo_cvb(const LayerProfile& profile, int n, double epsilon, LambdaStrategy strategy) {
  check_epsilon(epsilon);
  check_blocks(n);
  if (profile.layers.empty()) throw InvalidArgument("empty layer profile");
  const LambdaSet full{{}, true};
  switch (strategy) {
    case LambdaStrategy::full:
      return lo_cvb_single(profile, full, n, epsilon);
    case LambdaStrategy::segments: {
      BoundResult best = lo_cvb_single(profile, full, n, epsilon);
      best.log2_M = kInf;
      best.rate = kInf;
      const std::size_t k = profile.layers.size();
      for (std::size_t i = 0; i < k; ++i) {
        LambdaSet run;
        for (std::size_t j = i; j < k; ++j) {
          run.lengths.push_back(profile.layers[j].w);
          BoundResult r = lo_cvb_single(profile, run, n, epsilon);
          if (r.log2_M < best.log2_M) best = r;
        }
      }
      if (best.log2_M == kInf) best.lambda = full;
      return best;
    }
    case LambdaStrategy::exhaustive: {
      if (profile.layers.size() > kMaxExhaustiveLengths) {
        throw InvalidArgument("exhaustive Lambda search limited to " + std::to_string(kMaxExhaustiveLengths) +
                              " lengths, profile has " + std::to_string(profile.layers.size()));
      }
      const BoundResult segment = lo_cvb(profile, n, epsilon, LambdaStrategy::segments);
      LambdaSearch search(profile, n, epsilon);
      search.run(segment.log2_M);
      if (search.best == kInf) return segment;
      BoundResult found = lo_cvb_single(profile, LambdaSet{search.best_set, false}, n, epsilon);
      // Segments belong to the family; keeping the smaller of the two makes
      // the nesting exhaustive <= segments hold in floating point as well.
      if (segment.log2_M < found.log2_M ||
          (segment.log2_M == found.log2_M && lexicographically_less(segment.lambda, found.lambda, profile))) {
        return segment;
      }
      return found;
    }
  }
  throw InvalidArgument("unknown Lambda strategy");
}

double bec_epsilon_lower(int n, double delta, double log2M) {
  check_blocks(n);
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("erasure probability must be in [0, 1]");
  const double start = std::floor(n - log2M) + 1.0;
  const int first = start < 0.0 ? 0 : static_cast<int>(std::min<double>(start, n + 1.0));
  const double log_d = std::log(delta);
  const double log_1d = std::log1p(-delta);
  double sum = 0.0;
  for (int l = first; l <= n; ++l) {
    double prob = 0.0;
    if (delta == 0.0) {
      prob = l == 0 ? 1.0 : 0.0;
    } else if (delta == 1.0) {
      prob = l == n ? 1.0 : 0.0;
    } else {
      prob = std::exp(log_binomial(n, l) + l * log_d + (n - l) * log_1d);
    }
    if (prob == 0.0) continue;
    // 1 - 2^(n-l)/M, exact near zero.
    const double miss = -std::expm1((n - l - log2M) * std::numbers::ln2);
    sum += prob * miss;
  }
  return sum;
}

BoundResult bec_max_logM(int n, double delta, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must be in (0, 1)");
  double lo = 0.0;
  double hi = n;
  if (bec_epsilon_lower(n, delta, hi) <= epsilon) {
    lo = hi;
  } else {
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (bec_epsilon_lower(n, delta, mid) <= epsilon) lo = mid;
      else hi = mid;
    }
  }
  BoundResult r = make_result(lo, BoundMethod::bec, n, 1, delta, epsilon);
  r.lambda.full = true;
  return r;
}

double asymptotic_rate(double tau, int m) {
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  return std::log2(tau) / m;
}

MaxOrientedDistribution max_oriented_distribution(const FiniteChannelView& channel) {
  MaxOrientedDistribution out;
  out.q = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(channel.output_count()));
  std::vector<Transition> row;
  for (std::uint64_t x = 0; x < channel.input_count(); ++x) {
    channel.row(x, row);
    for (const auto& t : row) {
      double& slot = out.q[static_cast<Eigen::Index>(t.index)];
      slot = std::max(slot, t.prob);
    }
  }
  out.tau = out.q.sum();
  if (out.tau > 0.0) out.q /= out.tau;
  return out;
}

BoundResult symbolwise_bound_generic(const FiniteChannelView& channel, const Eigen::VectorXd& q, double epsilon,
                                     double phi) {
  check_epsilon(epsilon);
  if (!(phi > epsilon && phi <= 1.0)) throw InvalidArgument("phi must satisfy epsilon < phi <= 1");
  if (static_cast<std::uint64_t>(q.size()) != channel.output_count()) {
    throw InvalidArgument("reference distribution size does not match the channel outputs");
  }
  double worst = 0.0;
  std::vector<Transition> row;
  std::vector<std::pair<double, double>> ratios;  // (ratio, probability)
  for (std::uint64_t x = 0; x < channel.input_count(); ++x) {
    channel.row(x, row);
    ratios.clear();
    for (const auto& t : row) {
      const double qy = q[static_cast<Eigen::Index>(t.index)];
      if (!(qy > 0.0)) {
        throw InvalidArgument("reference distribution has zero mass at reachable output " + std::to_string(t.index));
      }
      ratios.emplace_back(t.prob / qy, t.prob);
    }
    std::sort(ratios.begin(), ratios.end());
    double cumulative = 0.0;
    double quantile = ratios.empty() ? 0.0 : ratios.back().first;
    for (std::size_t i = 0; i < ratios.size();) {
      std::size_t j = i;
      while (j < ratios.size() && ratios[j].first == ratios[i].first) cumulative += ratios[j++].second;
      if (cumulative >= phi - 1e-12) {
        quantile = ratios[i].first;
        break;
      }
      i = j;
    }
    worst = std::max(worst, quantile);
  }
  BoundResult r = make_result(std::log2(worst) - std::log2(phi - epsilon), BoundMethod::symbolwise, 1, 1, 0.0,
                              epsilon);
  r.lambda.full = true;
  return r;
}

double blocked_capacity_upper(const LayerProfile& profile) {
  if (!profile.complete) throw InvalidArgument("capacity bound needs a complete table");
  return asymptotic_rate(total_tau(profile), profile.m);
}

}  // namespace indel
