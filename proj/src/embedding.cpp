#include "indel/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "indel/combinatorics.hpp"
#include "indel/error.hpp"
#include "parallel.hpp"

namespace indel {

std::string to_string(ChannelKind kind) {
  return kind == ChannelKind::deletion ? "deletion" : "insertion";
}

ChannelKind parse_channel_kind(const std::string& text) {
  if (text == "deletion") return ChannelKind::deletion;
  if (text == "insertion") return ChannelKind::insertion;
  throw InvalidArgument("unknown channel kind '" + text + "'");
}

std::uint64_t embedding_number(const BitString& x, const BitString& y) {
  const int m = x.size();
  const int w = y.size();
  if (w > m) throw InvalidArgument("embedding_number: len(y) > len(x)");
  // ways[j]: embeddings of y_1..y_j into the prefix of x read so far.
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(w) + 1, 0);
  ways[0] = 1;
  for (int i = 0; i < m; ++i) {
    for (int j = std::min(i + 1, w); j >= 1; --j) {
      if (x[i] == y[j - 1]) ways[j] += ways[j - 1];
    }
  }
  return ways[w];
}

std::uint64_t one_embedding_number(const BitString& y, const BitString& x) {
  const int m = x.size();
  const int w = y.size();
  if (w < m || w > 2 * m) throw InvalidArgument("one_embedding_number: need len(x) <= len(y) <= 2 len(x)");
  // kept[j] / inserted[j]: ways where j symbols of x are matched and the last
  // symbol of y read so far was kept / inserted.
  std::vector<std::uint64_t> kept(static_cast<std::size_t>(m) + 1, 0);
  std::vector<std::uint64_t> inserted(static_cast<std::size_t>(m) + 1, 0);
  std::vector<std::uint64_t> next_kept(kept.size()), next_inserted(kept.size());
  kept[0] = 1;
  for (int i = 0; i < w; ++i) {
    std::fill(next_kept.begin(), next_kept.end(), 0);
    std::fill(next_inserted.begin(), next_inserted.end(), 0);
    for (int j = 0; j <= m; ++j) {
      const std::uint64_t total = kept[j] + inserted[j];
      if (total == 0) continue;
      if (j < m && y[i] == x[j]) next_kept[j + 1] += total;
      // An inserted symbol directly follows a kept one, never position 1.
      if (i > 0 && j > 0) next_inserted[j] += kept[j];
    }
    kept.swap(next_kept);
    inserted.swap(next_inserted);
  }
  return kept[m] + inserted[m];
}

namespace {

constexpr std::uint64_t pow2(int k) { return std::uint64_t{1} << k; }

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > ~std::uint64_t{0} / a) return ~std::uint64_t{0};
  return a * b;
}

int lo_len(int i, int m, int w) { return std::max(0, w - (m - i)); }
int hi_len(int i, int w) { return std::min(i, w); }

std::uint64_t prefix_dp_cost(int m, int w) {
  // Internal nodes apply and undo one transition each; canonical leaves fold
  // 2^w counts. Inputs start with 0, so depth i holds 2^(i-1) nodes.
  std::uint64_t ops = 0;
  for (int i = 1; i <= m - 1; ++i) {
    std::uint64_t per_node = 0;
    for (int k = std::max(lo_len(i, m, w), 1); k <= hi_len(i, w); ++k) per_node += pow2(k - 1);
    ops += pow2(i - 1) * per_node * 2;
  }
  ops += pow2(m - 1) / 2 * pow2(w);
  return ops;
}

std::uint64_t deletion_pattern_cost(int m, int w) {
  const int d = m - w;
  return saturating_mul(pow2(m - 2 > 0 ? m - 2 : 0), binomial(m, d) * static_cast<std::uint64_t>(d + 2));
}

void check_deletion_args(int m, int w) {
  if (m < 1 || m > 32 || w < 0 || w > m) {
    throw InvalidArgument("E(m, w) needs 0 <= w <= m <= 32, got m=" + std::to_string(m) +
                          " w=" + std::to_string(w));
  }
}

void check_insertion_args(int w, int m) {
  if (m < 1 || m > 32 || w < m || w > 2 * m) {
    throw InvalidArgument("E_1(w, m) needs m <= w <= 2m, m <= 32, got w=" + std::to_string(w) +
                          " m=" + std::to_string(m));
  }
}

// Per-worker max arrays and their sizes must fit this many bytes.
constexpr std::uint64_t kKernelMemory = std::uint64_t{3} << 30;

unsigned fit_workers(unsigned workers, std::uint64_t bytes_per_worker, const std::string& what) {
  if (bytes_per_worker > kKernelMemory) {
    throw ResourceLimit(what + ": per-worker arrays exceed memory limit", bytes_per_worker, kKernelMemory);
  }
  const auto fit = static_cast<unsigned>(kKernelMemory / std::max<std::uint64_t>(bytes_per_worker, 1));
  return std::max(1U, std::min(workers, fit));
}

void merge_max(std::vector<std::uint32_t>& into, const std::vector<std::uint32_t>& from) {
  for (std::size_t i = 0; i < into.size(); ++i) into[i] = std::max(into[i], from[i]);
}

// Orbit representative test for the group {id, reverse, complement, both}
// restricted to words whose first symbol is 0.
bool canonical_input(std::uint64_t x, int m) {
  const std::uint64_t r = reverse_bits(x, m);
  const std::uint64_t partner = ((x >> (m - 1)) & 1U) ? (~r & low_mask(m)) : r;
  return x <= partner;
}

std::uint64_t symmetrized_sum(const std::vector<std::uint32_t>& best, int w, bool use_reverse) {
  const std::uint64_t mask = low_mask(w);
  std::uint64_t total = 0;
  for (std::uint64_t y = 0; y < best.size(); ++y) {
    std::uint32_t v = std::max(best[y], best[~y & mask]);
    if (use_reverse) {
      const std::uint64_t r = reverse_bits(y, w);
      v = std::max({v, best[r], best[~r & mask]});
    }
    total += v;
  }
  return total;
}

/// Depth-first walk over input prefixes. counts_[k] holds, for every output
/// word of length k, the number of its embeddings into the current prefix.
/// Only lengths that can still grow to w by the end of the input are kept.
class PrefixDpWalker {
 public:
  PrefixDpWalker(int m, int w, std::vector<std::uint32_t>& best)
      : m_(m), w_(w), storage_(pow2(w + 1) - 1, 0), best_(best) {}

  // Walks every input whose first `depth` symbols equal `prefix`.
  void run(std::uint64_t prefix, int depth) {
    std::fill(storage_.begin(), storage_.end(), 0);
    level(0)[0] = 1;
    for (int i = 1; i <= depth; ++i) apply(i, static_cast<int>((prefix >> (i - 1)) & 1U));
    walk(depth, prefix);
  }

 private:
  std::uint32_t* level(int k) { return storage_.data() + (pow2(k) - 1); }

  // Moves from depth i-1 to depth i by appending symbol b.
  void apply(int i, int b) {
    const int kmin = std::max(lo_len(i, m_, w_), 1);
    for (int k = hi_len(i, w_); k >= kmin; --k) {
      const std::uint64_t half = pow2(k - 1);
      std::uint32_t* dst = level(k) + (b ? half : 0);
      const std::uint32_t* src = level(k - 1);
      for (std::uint64_t y = 0; y < half; ++y) dst[y] += src[y];
    }
  }

  void undo(int i, int b) {
    const int kmin = std::max(lo_len(i, m_, w_), 1);
    for (int k = kmin; k <= hi_len(i, w_); ++k) {
      const std::uint64_t half = pow2(k - 1);
      std::uint32_t* dst = level(k) + (b ? half : 0);
      const std::uint32_t* src = level(k - 1);
      for (std::uint64_t y = 0; y < half; ++y) dst[y] -= src[y];
    }
  }

  void walk(int depth, std::uint64_t x) {
    if (depth == m_ - 1) {
      for (int b = 0; b < 2; ++b) {
        const std::uint64_t leaf = x | (static_cast<std::uint64_t>(b) << (m_ - 1));
        if (canonical_input(leaf, m_)) fold(b);
      }
      return;
    }
    for (int b = 0; b < 2; ++b) {
      apply(depth + 1, b);
      walk(depth + 1, x | (static_cast<std::uint64_t>(b) << depth));
      undo(depth + 1, b);
    }
  }

  // Final symbol b: counts of length w are level(w) plus level(w-1) shifted
  // into the half whose last symbol is b.
  void fold(int b) {
    const std::uint64_t half = pow2(w_ - 1);
    const std::uint32_t* full = level(w_);
    const std::uint32_t* shorter = level(w_ - 1);
    std::uint32_t* best = best_.data();
    const std::uint64_t same = b ? half : 0;
    const std::uint64_t other = b ? 0 : half;
    for (std::uint64_t y = 0; y < half; ++y) {
      best[same + y] = std::max(best[same + y], full[same + y] + shorter[y]);
    }
    for (std::uint64_t y = 0; y < half; ++y) {
      best[other + y] = std::max(best[other + y], full[other + y]);
    }
  }

  int m_;
  int w_;
  std::vector<std::uint32_t> storage_;
  std::vector<std::uint32_t>& best_;
};

/// Multiplicity counter for the outputs generated from one input. Uses a
/// stamped direct-address table for short outputs and sorting otherwise.
class OutputCounter {
 public:
  explicit OutputCounter(int w) : direct_(w <= kDirectBits) {
    if (direct_) {
      stamp_.assign(pow2(w), 0);
      count_.assign(pow2(w), 0);
    }
  }

  static constexpr int kDirectBits = 22;

  static std::uint64_t bytes_for(int w) { return w <= kDirectBits ? pow2(w) * 8 : 0; }

  void begin() {
    touched_.clear();
    if (direct_ && ++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }

  void add(std::uint64_t y) {
    if (!direct_) {
      touched_.push_back(y);
      return;
    }
    if (stamp_[y] != epoch_) {
      stamp_[y] = epoch_;
      count_[y] = 0;
      touched_.push_back(y);
    }
    ++count_[y];
  }

  // Folds the per-output multiplicities into best[y] = max(best[y], count).
  void fold_into(std::vector<std::uint32_t>& best) {
    if (direct_) {
      for (std::uint64_t y : touched_) best[y] = std::max(best[y], count_[y]);
      return;
    }
    std::sort(touched_.begin(), touched_.end());
    for (std::size_t i = 0; i < touched_.size();) {
      std::size_t j = i;
      while (j < touched_.size() && touched_[j] == touched_[i]) ++j;
      const auto c = static_cast<std::uint32_t>(j - i);
      best[touched_[i]] = std::max(best[touched_[i]], c);
      i = j;
    }
  }

 private:
  bool direct_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint64_t> touched_;
};

void delete_positions(std::uint64_t bits, int len, int start, int remaining, OutputCounter& counter) {
  if (remaining == 0) {
    counter.add(bits);
    return;
  }
  for (int p = start; p <= len - remaining; ++p) {
    const std::uint64_t shorter = (bits & low_mask(p)) | ((bits >> (p + 1)) << p);
    delete_positions(shorter, len - 1, p, remaining - 1, counter);
  }
}

void insert_symbols(std::uint64_t x, int m, int i, std::uint64_t y, int ylen, int remaining,
                    OutputCounter& counter) {
  if (i == m) {
    if (remaining == 0) counter.add(y);
    return;
  }
  y |= ((x >> i) & 1U) << ylen;
  ++ylen;
  if (remaining <= m - i - 1) insert_symbols(x, m, i + 1, y, ylen, remaining, counter);
  if (remaining > 0) {
    insert_symbols(x, m, i + 1, y, ylen + 1, remaining - 1, counter);
    insert_symbols(x, m, i + 1, y | (std::uint64_t{1} << ylen), ylen + 1, remaining - 1, counter);
  }
}

constexpr std::uint64_t kInputsPerTask = 1 << 10;

std::uint64_t compute_E_prefix_dp(int m, int w, unsigned workers) {
  const std::uint64_t per_worker = pow2(w) * 4 + (pow2(w + 1) - 1) * 4;
  workers = fit_workers(workers, per_worker, "E(m,w) prefix DP");
  // Split the input tree below a fixed prefix depth; the first symbol is 0.
  const int split = std::clamp(m - 8, 1, 10);
  const std::size_t tasks = pow2(split - 1);
  std::vector<std::vector<std::uint32_t>> best(workers, std::vector<std::uint32_t>(pow2(w), 0));
  std::vector<std::unique_ptr<PrefixDpWalker>> walkers;
  for (unsigned id = 0; id < workers; ++id) walkers.push_back(std::make_unique<PrefixDpWalker>(m, w, best[id]));
  detail::parallel_tasks(workers, tasks, [&](unsigned id, std::size_t task) {
    walkers[id]->run(static_cast<std::uint64_t>(task) << 1, split);
  });
  for (unsigned id = 1; id < workers; ++id) merge_max(best[0], best[id]);
  return symmetrized_sum(best[0], w, true);
}

std::uint64_t compute_E_patterns(int m, int w, unsigned workers) {
  const int d = m - w;
  const std::uint64_t per_worker = pow2(w) * 4 + OutputCounter::bytes_for(w);
  workers = fit_workers(workers, per_worker, "E(m,w) deletion patterns");
  const std::uint64_t inputs = pow2(m - 1);
  const std::size_t tasks = (inputs + kInputsPerTask - 1) / kInputsPerTask;
  std::vector<std::vector<std::uint32_t>> best(workers, std::vector<std::uint32_t>(pow2(w), 0));
  std::vector<std::unique_ptr<OutputCounter>> counters;
  for (unsigned id = 0; id < workers; ++id) counters.push_back(std::make_unique<OutputCounter>(w));
  detail::parallel_tasks(workers, tasks, [&](unsigned id, std::size_t task) {
    const std::uint64_t begin = task * kInputsPerTask;
    const std::uint64_t end = std::min(inputs, begin + kInputsPerTask);
    for (std::uint64_t half = begin; half < end; ++half) {
      const std::uint64_t x = half << 1;
      if (!canonical_input(x, m)) continue;
      counters[id]->begin();
      delete_positions(x, m, 0, d, *counters[id]);
      counters[id]->fold_into(best[id]);
    }
  });
  for (unsigned id = 1; id < workers; ++id) merge_max(best[0], best[id]);
  return symmetrized_sum(best[0], w, true);
}

}  // namespace

CostEstimate estimate_E_cost(int m, int w) {
  check_deletion_args(m, w);
  if (w == 0) return {EmbeddingMethod::trivial, 1};
  const std::uint64_t patterns = deletion_pattern_cost(m, w);
  if (m < 3) return {EmbeddingMethod::deletion_patterns, patterns};
  // The prefix DP inner loops vectorize; one of its ops costs about a
  // quarter of a pattern-kernel op.
  const std::uint64_t dp = prefix_dp_cost(m, w);
  return dp / 4 <= patterns ? CostEstimate{EmbeddingMethod::prefix_dp, dp}
                        : CostEstimate{EmbeddingMethod::deletion_patterns, patterns};
}

CostEstimate estimate_E1_cost(int w, int m) {
  check_insertion_args(w, m);
  const int d = w - m;
  const std::uint64_t outputs = saturating_mul(binomial(m, d), pow2(d));
  return {EmbeddingMethod::insertion_patterns, saturating_mul(pow2(m - 1), saturating_mul(outputs, 2))};
}

std::uint64_t compute_E(int m, int w, const ComputeOptions& options) {
  const CostEstimate cost = estimate_E_cost(m, w);
  if (cost.ops > options.budget) {
    throw BudgetExceeded("E(" + std::to_string(m) + "," + std::to_string(w) + ") refused", cost.ops,
                         options.budget);
  }
  const unsigned workers = detail::resolve_threads(options.threads);
  switch (cost.method) {
    case EmbeddingMethod::trivial:
      return 1;
    case EmbeddingMethod::prefix_dp:
      return compute_E_prefix_dp(m, w, workers);
    default:
      return compute_E_patterns(m, w, workers);
  }
}

std::uint64_t compute_E1(int w, int m, const ComputeOptions& options) {
  const CostEstimate cost = estimate_E1_cost(w, m);
  if (cost.ops > options.budget) {
    throw BudgetExceeded("E_1(" + std::to_string(w) + "," + std::to_string(m) + ") refused", cost.ops,
                         options.budget);
  }
  const int d = w - m;
  unsigned workers = detail::resolve_threads(options.threads);
  workers = fit_workers(workers, pow2(w) * 4 + OutputCounter::bytes_for(w), "E_1(w,m)");
  const std::uint64_t inputs = pow2(m - 1);
  const std::size_t tasks = (inputs + kInputsPerTask - 1) / kInputsPerTask;
  std::vector<std::vector<std::uint32_t>> best(workers, std::vector<std::uint32_t>(pow2(w), 0));
  std::vector<std::unique_ptr<OutputCounter>> counters;
  for (unsigned id = 0; id < workers; ++id) counters.push_back(std::make_unique<OutputCounter>(w));
  detail::parallel_tasks(workers, tasks, [&](unsigned id, std::size_t task) {
    const std::uint64_t begin = task * kInputsPerTask;
    const std::uint64_t end = std::min(inputs, begin + kInputsPerTask);
    for (std::uint64_t half = begin; half < end; ++half) {
      counters[id]->begin();
      insert_symbols(half << 1, m, 0, 0, 0, d, *counters[id]);
      counters[id]->fold_into(best[id]);
    }
  });
  for (unsigned id = 1; id < workers; ++id) merge_max(best[0], best[id]);
  return symmetrized_sum(best[0], w, false);
}

std::string to_string(Provenance p) { return p == Provenance::paper ? "paper" : "computed"; }

EmbeddingTable::EmbeddingTable(ChannelKind kind, int m) : kind_(kind), m_(m) {
  if (m < 1 || m > 32) throw InvalidArgument("table length m must be in [1, 32], got " + std::to_string(m));
}

int EmbeddingTable::min_length() const { return kind_ == ChannelKind::deletion ? 0 : m_; }
int EmbeddingTable::max_length() const { return kind_ == ChannelKind::deletion ? m_ : 2 * m_; }

void EmbeddingTable::set(int w, std::uint64_t value, Provenance provenance) {
  if (w < min_length() || w > max_length()) {
    throw InvalidArgument("output length " + std::to_string(w) + " outside [" + std::to_string(min_length()) +
                          ", " + std::to_string(max_length()) + "] for " + to_string(kind_) +
                          " m=" + std::to_string(m_));
  }
  entries_[w] = TableEntry{value, provenance};
}

std::optional<std::uint64_t> EmbeddingTable::value(int w) const {
  auto it = entries_.find(w);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

bool EmbeddingTable::complete() const {
  return entries_.size() == static_cast<std::size_t>(max_length() - min_length() + 1);
}

TableComputation compute_table(ChannelKind kind, int m, int w_min, int w_max, const ComputeOptions& options) {
  TableComputation out{EmbeddingTable(kind, m), {}, {}};
  w_min = std::max(w_min, out.table.min_length());
  w_max = std::min(w_max, out.table.max_length());
  for (int w = w_min; w <= w_max; ++w) {
    const CostEstimate cost = kind == ChannelKind::deletion ? estimate_E_cost(m, w) : estimate_E1_cost(w, m);
    if (cost.ops > options.budget) {
      out.refused.push_back(w);
      continue;
    }
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t v = kind == ChannelKind::deletion ? compute_E(m, w, options) : compute_E1(w, m, options);
    out.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    out.table.set(w, v, Provenance::computed);
  }
  return out;
}

std::vector<std::string> audit_table(const EmbeddingTable& table) {
  std::vector<std::string> issues;
  const int m = table.m();
  const std::string where = to_string(table.kind()) + " m=" + std::to_string(m);
  auto expect = [&](int w, std::uint64_t want) {
    auto v = table.value(w);
    if (v && *v != want) {
      issues.push_back(where + " w=" + std::to_string(w) + ": expected " + std::to_string(want) + ", found " +
                       std::to_string(*v));
    }
  };
  auto in_range = [&](int w, std::uint64_t value, std::uint64_t lo, std::uint64_t hi) {
    if (value < lo || value > hi) {
      issues.push_back(where + " w=" + std::to_string(w) + ": value " + std::to_string(value) +
                       " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  };
  if (table.kind() == ChannelKind::deletion) {
    expect(0, 1);
    if (m >= 1) expect(1, 2 * static_cast<std::uint64_t>(m));
    expect(m, pow2(m));
    for (const auto& [w, e] : table.entries()) {
      const std::uint64_t c = binomial(m, w);
      in_range(w, e.value, c, saturating_mul(pow2(w), c));
    }
  } else {
    expect(m, pow2(m));
    if (2 * m < 64) expect(2 * m, pow2(2 * m));
    for (const auto& [w, e] : table.entries()) {
      const int d = w - m;
      const std::uint64_t lo = saturating_mul(binomial(m, d), pow2(d));
      in_range(w, e.value, lo, saturating_mul(pow2(m), lo));
    }
  }
  return issues;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& text, const std::string& source, std::size_t line, const char* name) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(source, line, std::string("bad ") + name + " '" + text + "'");
  }
  return value;
}

}  // namespace

TableSet parse_tables(const std::string& text, const std::string& source_name, bool audit) {
  TableSet tables;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    const auto fields = split_fields(line);
    if (!header_seen) {
      header_seen = true;
      if (!fields.empty() && fields[0] == "kind") {
        if (fields.size() < 4 || fields[1] != "m" || fields[2] != "w" || fields[3] != "value") {
          throw ParseError(source_name, number, "expected header kind,m,w,value[,provenance]");
        }
        continue;
      }
    }
    if (fields.size() != 4 && fields.size() != 5) {
      throw ParseError(source_name, number, "expected 4 or 5 fields, got " + std::to_string(fields.size()));
    }
    ChannelKind kind{};
    try {
      kind = parse_channel_kind(fields[0]);
    } catch (const InvalidArgument& e) {
      throw ParseError(source_name, number, e.what());
    }
    const int m = parse_number<int>(fields[1], source_name, number, "m");
    const int w = parse_number<int>(fields[2], source_name, number, "w");
    const auto value = parse_number<std::uint64_t>(fields[3], source_name, number, "value");
    Provenance prov = Provenance::computed;
    if (fields.size() == 5) {
      if (fields[4] == "paper") prov = Provenance::paper;
      else if (fields[4] != "computed" && !fields[4].empty())
        throw ParseError(source_name, number, "bad provenance '" + fields[4] + "'");
    }
    try {
      auto [it, inserted] = tables.try_emplace({kind, m}, kind, m);
      if (it->second.contains(w)) {
        throw ParseError(source_name, number,
                         "duplicate entry " + to_string(kind) + " m=" + std::to_string(m) + " w=" + std::to_string(w));
      }
      it->second.set(w, value, prov);
    } catch (const InvalidArgument& e) {
      throw ParseError(source_name, number, e.what());
    }
  }
  if (audit) {
    for (const auto& [key, table] : tables) {
      auto issues = audit_table(table);
      if (!issues.empty()) throw ParseError(source_name, 0, "audit failed: " + issues.front());
    }
  }
  return tables;
}

void merge_tables(TableSet& into, const TableSet& from, const std::string& source_name) {
  for (const auto& [key, table] : from) {
    auto [it, inserted] = into.try_emplace(key, table.kind(), table.m());
    for (const auto& [w, e] : table.entries()) {
      if (auto old = it->second.value(w); old && *old != e.value) {
        throw ParseError(source_name, 0,
                         "conflicting value for " + to_string(key.first) + " m=" + std::to_string(key.second) +
                             " w=" + std::to_string(w) + ": " + std::to_string(*old) + " vs " +
                             std::to_string(e.value));
      }
      it->second.set(w, e.value, e.provenance);
    }
  }
}

std::string format_tables(const TableSet& tables) {
  std::ostringstream out;
  out << "kind,m,w,value,provenance\n";
  for (const auto& [key, table] : tables) {
    for (const auto& [w, e] : table.entries()) {
      out << to_string(table.kind()) << ',' << table.m() << ',' << w << ',' << e.value << ','
          << to_string(e.provenance) << '\n';
    }
  }
  return out.str();
}

TableSet load_table(const std::filesystem::path& path, bool audit) {
  std::ifstream in(path);
  if (!in) throw MissingData("cannot open table file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_tables(text.str(), path.string(), audit);
}

void save_table(const std::filesystem::path& path, const TableSet& tables) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_tables(tables);
}

void save_table(const std::filesystem::path& path, const EmbeddingTable& table) {
  TableSet one;
  one.emplace(std::make_pair(table.kind(), table.m()), table);
  save_table(path, one);
}

TableSet load_table_directory(const std::filesystem::path& dir, bool audit) {
  if (!std::filesystem::is_directory(dir)) throw MissingData("table directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  if (files.empty()) throw MissingData("no table files in " + dir.string());
  std::sort(files.begin(), files.end());
  TableSet all;
  for (const auto& f : files) merge_tables(all, load_table(f, audit), f.string());
  return all;
}

}  // namespace indel
