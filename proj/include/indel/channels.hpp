#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "indel/bitstring.hpp"
#include "indel/embedding.hpp"

namespace indel {

// i.i.d. deletion of each of m input bits with probability delta.
struct DeletionSpec {
  int m = 1;
  double delta = 0.0;

  void validate() const;  // 1 <= m <= 32, 0 <= delta <= 1
};

// After each of m input bits, a uniformly random bit is inserted with
// probability iota.
struct InsertionSpec {
  int m = 1;
  double iota = 0.0;

  void validate() const;
};

using ChannelSpec = std::variant<DeletionSpec, InsertionSpec>;

ChannelKind kind_of(const ChannelSpec& spec);
int input_length(const ChannelSpec& spec);
double parameter_of(const ChannelSpec& spec);
ChannelSpec make_spec(ChannelKind kind, int m, double parameter);

// Admissible output lengths: [0, m] for deletion, [m, 2m] for insertion.
int min_output_length(const ChannelSpec& spec);
int max_output_length(const ChannelSpec& spec);

double deletion_prob(const BitString& x, const BitString& y, double delta);
double insertion_prob(const BitString& x, const BitString& y, double iota);

// Total probability of the outputs of length w; identical for every input.
double layer_prob(const ChannelSpec& spec, int w);

inline constexpr int kMaxRowInputLength = 20;

// Every output with nonzero probability, exactly once, ordered by
// (length, value). Throws ResourceLimit when m exceeds kMaxRowInputLength.
std::vector<std::pair<BitString, double>> enumerate_row(const ChannelSpec& spec,
                                                        const BitString& x);

struct Transition {
  std::uint64_t index;
  double prob;
};

/// Enumerable finite channel. Inputs and outputs are dense integer indices;
/// rows are W(.|x), columns are W(y|.) restricted to nonzero entries, both in
/// ascending index order.
class FiniteChannelView {
 public:
  virtual ~FiniteChannelView() = default;

  virtual std::uint64_t input_count() const = 0;
  virtual std::uint64_t output_count() const = 0;
  virtual void row(std::uint64_t x, std::vector<Transition>& out) const = 0;
  virtual void column(std::uint64_t y, std::vector<Transition>& out) const = 0;
};

/// Channel held as an explicit sparse transition matrix (inputs x outputs).
class SparseChannel final : public FiniteChannelView {
 public:
  using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

  // Throws InvalidArgument if an entry is negative or a row does not sum to
  // one within 1e-12.
  explicit SparseChannel(RowMatrix transitions);

  std::uint64_t input_count() const override { return static_cast<std::uint64_t>(rows_.rows()); }
  std::uint64_t output_count() const override { return static_cast<std::uint64_t>(rows_.cols()); }
  void row(std::uint64_t x, std::vector<Transition>& out) const override;
  void column(std::uint64_t y, std::vector<Transition>& out) const override;

  const RowMatrix& matrix() const { return rows_; }

 private:
  RowMatrix rows_;
  ColMatrix cols_;
};

// Builds a SparseChannel from a row-stochastic dense matrix.
SparseChannel make_channel(const Eigen::MatrixXd& transitions);

SparseChannel noiseless_channel(int symbols);
SparseChannel binary_symmetric_channel(double flip);
// Outputs {0, 1, erasure}.
SparseChannel binary_erasure_channel(double erasure);

/// D_m as an implicit view: inputs indexed by their packed bits, output y of
/// length w at index 2^w - 1 + bits(y).
class DeletionChannel final : public FiniteChannelView {
 public:
  explicit DeletionChannel(DeletionSpec spec);

  std::uint64_t input_count() const override;
  std::uint64_t output_count() const override;
  void row(std::uint64_t x, std::vector<Transition>& out) const override;
  void column(std::uint64_t y, std::vector<Transition>& out) const override;

  std::uint64_t output_index(const BitString& y) const;
  BitString output_at(std::uint64_t index) const;
  const DeletionSpec& spec() const { return spec_; }

 private:
  DeletionSpec spec_;
  std::vector<double> weight_;  // delta^(m-w) (1-delta)^w per w
};

/// I_m as an implicit view: output y of length w at index 2^w - 2^m + bits(y).
class InsertionChannel final : public FiniteChannelView {
 public:
  explicit InsertionChannel(InsertionSpec spec);

  std::uint64_t input_count() const override;
  std::uint64_t output_count() const override;
  void row(std::uint64_t x, std::vector<Transition>& out) const override;
  void column(std::uint64_t y, std::vector<Transition>& out) const override;

  std::uint64_t output_index(const BitString& y) const;
  BitString output_at(std::uint64_t index) const;
  const InsertionSpec& spec() const { return spec_; }

 private:
  InsertionSpec spec_;
  std::vector<double> weight_;  // iota^d (1-iota)^(m-d) 2^-d per d = w - m
};

inline constexpr std::uint64_t kDefaultMaterializeBytes = std::uint64_t{2} << 30;

// Copies any view into an explicit SparseChannel. Throws ResourceLimit when
// the estimated storage exceeds max_bytes.
SparseChannel materialize(const FiniteChannelView& channel,
                          std::uint64_t max_bytes = kDefaultMaterializeBytes);

}  // namespace indel
