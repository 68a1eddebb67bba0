#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "indel/bitstring.hpp"

namespace indel {

enum class ChannelKind { deletion, insertion };

std::string to_string(ChannelKind kind);
ChannelKind parse_channel_kind(const std::string& text);

// Number of index sets S with x_S = y. Requires len(y) <= len(x).
std::uint64_t embedding_number(const BitString& x, const BitString& y);

// Number of sets S of positions {2..len(y)} (1-based), |S| = len(y) - len(x),
// with no two adjacent elements, such that deleting S from y leaves x.
// Requires len(x) <= len(y) <= 2 len(x).
std::uint64_t one_embedding_number(const BitString& y, const BitString& x);

/// Work limits for the max-sum table kernels. The unit of `budget` is an
/// estimated count of 64-bit additions; see estimate_E_cost().
struct ComputeOptions {
  std::uint64_t budget = std::uint64_t{1} << 34;
  unsigned threads = 0;  // 0 = hardware concurrency
};

enum class EmbeddingMethod { trivial, prefix_dp, deletion_patterns, insertion_patterns };

struct CostEstimate {
  EmbeddingMethod method;
  std::uint64_t ops;
};

// Cheapest kernel for E(m, w) and its estimated cost.
CostEstimate estimate_E_cost(int m, int w);
// Cost of E_1(w, m).
CostEstimate estimate_E1_cost(int w, int m);

/// E(m, w): sum over all y of length w of max_x embedding_number(x, y),
/// x ranging over length-m words. Exact.
///
/// Two kernels are available and the cheaper one is used:
///  - prefix_dp walks the tree of input prefixes depth-first and keeps, for
///    every candidate output prefix length, the number of embeddings into the
///    current input prefix; each leaf folds its 2^w counts into a per-y max.
///  - deletion_patterns enumerates the C(m, m-w) deletion sets of each input.
/// Only inputs that are minimal in their orbit under reversal and complement
/// are visited; the per-y maxima are symmetrized at the end. Workers keep
/// private max arrays merged element-wise, so the result does not depend on
/// the thread count. Throws BudgetExceeded when the estimate exceeds budget.
std::uint64_t compute_E(int m, int w, const ComputeOptions& options = {});

/// E_1(w, m): sum over y of length w of max_x one_embedding_number(y, x).
/// Enumerates the C(m, w-m) 2^(w-m) insertion pattern/value pairs of each
/// input starting with 0 and symmetrizes over complement.
std::uint64_t compute_E1(int w, int m, const ComputeOptions& options = {});

enum class Provenance { computed, paper };

std::string to_string(Provenance p);

struct TableEntry {
  std::uint64_t value = 0;
  Provenance provenance = Provenance::computed;

  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

/// Max-sum embedding numbers for one (kind, m): E(m, w) for deletion
/// (w in [0, m]) or E_1(w, m) for insertion (w in [m, 2m]), keyed by the
/// output length w. Entries may be partial.
class EmbeddingTable {
 public:
  EmbeddingTable(ChannelKind kind, int m);

  ChannelKind kind() const { return kind_; }
  int m() const { return m_; }
  int min_length() const;
  int max_length() const;

  // Throws InvalidArgument for w outside the admissible range.
  void set(int w, std::uint64_t value, Provenance provenance);
  bool contains(int w) const { return entries_.count(w) != 0; }
  std::optional<std::uint64_t> value(int w) const;
  const std::map<int, TableEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool complete() const;

  friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

 private:
  ChannelKind kind_;
  int m_;
  std::map<int, TableEntry> entries_;
};

struct TableComputation {
  EmbeddingTable table;
  std::vector<int> refused;        // lengths skipped because of the budget
  std::vector<double> seconds;     // wall time per computed entry, in table order
};

// Computes every entry of [w_min, w_max] whose estimated cost fits the budget.
TableComputation compute_table(ChannelKind kind, int m, int w_min, int w_max,
                               const ComputeOptions& options = {});

/// Consistency audit: closed-form entries (E(m,0)=1, E(m,1)=2m, E(m,m)=2^m,
/// E_1(m,m)=2^m, E_1(2m,m)=4^m) and the per-entry range
/// C(m,w) <= E(m,w) <= 2^w C(m,w) for deletion,
/// C(m,d) 2^d <= E_1 <= 2^m C(m,d) 2^d for insertion (d = w - m).
/// Returns a description of every violation; empty when the table is sound.
std::vector<std::string> audit_table(const EmbeddingTable& table);

// A collection of tables keyed by (kind, m).
using TableSet = std::map<std::pair<ChannelKind, int>, EmbeddingTable>;

// CSV with header `kind,m,w,value,provenance`. Parsing rejects malformed
// lines (ParseError with line number) and duplicate (kind, m, w) keys.
TableSet parse_tables(const std::string& text, const std::string& source_name,
                      bool audit = false);
void merge_tables(TableSet& into, const TableSet& from, const std::string& source_name);
std::string format_tables(const TableSet& tables);

TableSet load_table(const std::filesystem::path& path, bool audit = false);
void save_table(const std::filesystem::path& path, const TableSet& tables);
void save_table(const std::filesystem::path& path, const EmbeddingTable& table);

// Loads and merges every *.csv in a directory. Throws MissingData when the
// directory does not exist or holds no table files.
TableSet load_table_directory(const std::filesystem::path& dir, bool audit = false);

// The tables shipped under data/paper/, compiled into the library.
const TableSet& reference_tables();

}  // namespace indel
