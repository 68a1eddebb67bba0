#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indel/achievability.hpp"
#include "indel/bounds.hpp"
#include "indel/embedding.hpp"

namespace indel::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 2,
  kBudgetRefusal = 3,
  kMissingData = 4,
};

inline const std::filesystem::path kDefaultTablesDir = "data/paper";

struct TablesComputeArgs {
  ChannelKind kind = ChannelKind::deletion;
  int m = 5;
  std::optional<int> w_min;
  std::optional<int> w_max;
  std::optional<std::filesystem::path> out_path;  // stdout when empty
  unsigned threads = 0;
  std::uint64_t budget = ComputeOptions{}.budget;
};

struct TablesShowArgs {
  std::filesystem::path tables_dir = kDefaultTablesDir;
  std::optional<ChannelKind> kind;
  std::optional<int> m;
};

struct BoundArgs {
  BoundMethod method = BoundMethod::locvb;
  ChannelKind kind = ChannelKind::deletion;
  int m = 5;
  int n = 1;
  double param = 0.2;
  double eps = 0.2;
  std::filesystem::path tables_dir = kDefaultTablesDir;
  LambdaStrategy lambda = LambdaStrategy::exhaustive;
};

struct SweepArgs {
  ChannelKind kind = ChannelKind::deletion;
  double param = 0.2;
  double eps = 0.2;
  int n_max = 1024;
  bool dense = false;
  std::optional<int> m_min;  // 20 for deletion, 12 for insertion
  std::optional<int> m_max;
  int na_m = 8;              // 0 disables the normal approximation rows
  std::filesystem::path tables_dir = kDefaultTablesDir;
  std::optional<std::filesystem::path> out_path;
  std::vector<std::pair<std::string, double>> references;
};

struct AvbArgs {
  ChannelKind kind = ChannelKind::deletion;
  int m = 5;
  double param = 0.2;
  std::optional<std::uint64_t> max_size;  // all inputs when empty
  TieBreak tie_break = TieBreak::lowest_index;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out_path;
};

struct VerifyArgs {
  std::filesystem::path tables_dir = kDefaultTablesDir;
  double tolerance = 5e-6;
};

// One sweep grid point for one method.
struct SweepRow {
  int N = 0;
  int m = 0;
  int n = 0;
  BoundMethod method = BoundMethod::locvb;
  double log2M = 0.0;
  double rate = 0.0;
};

// Rows ordered by N, then method (locvb, mocvb, bec, normal).
std::vector<SweepRow> sweep_rows(const SweepArgs& args, const TableSet& tables);

// "inf" or fixed notation with the given decimals.
std::string format_real(double value, int decimals = 6);

int cmd_tables_compute(const TablesComputeArgs& args, std::ostream& out, std::ostream& err);
int cmd_tables_show(const TablesShowArgs& args, std::ostream& out, std::ostream& err);
int cmd_bound(const BoundArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_avb(const AvbArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

}  // namespace indel::cli
