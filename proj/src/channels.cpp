#include "indel/channels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "indel/combinatorics.hpp"
#include "indel/error.hpp"

namespace indel {

void DeletionSpec::validate() const {
  if (m < 1 || m > 32) throw InvalidArgument("deletion channel needs 1 <= m <= 32, got " + std::to_string(m));
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("deletion probability must be in [0, 1]");
}

void InsertionSpec::validate() const {
  if (m < 1 || m > 32) throw InvalidArgument("insertion channel needs 1 <= m <= 32, got " + std::to_string(m));
  if (!(iota >= 0.0 && iota <= 1.0)) throw InvalidArgument("insertion probability must be in [0, 1]");
}

ChannelKind kind_of(const ChannelSpec& spec) {
  return std::holds_alternative<DeletionSpec>(spec) ? ChannelKind::deletion : ChannelKind::insertion;
}

int input_length(const ChannelSpec& spec) {
  return std::visit([](const auto& s) { return s.m; }, spec);
}

double parameter_of(const ChannelSpec& spec) {
  if (const auto* d = std::get_if<DeletionSpec>(&spec)) return d->delta;
  return std::get<InsertionSpec>(spec).iota;
}

ChannelSpec make_spec(ChannelKind kind, int m, double parameter) {
  if (kind == ChannelKind::deletion) {
    DeletionSpec s{m, parameter};
    s.validate();
    return s;
  }
  InsertionSpec s{m, parameter};
  s.validate();
  return s;
}

int min_output_length(const ChannelSpec& spec) {
  return kind_of(spec) == ChannelKind::deletion ? 0 : input_length(spec);
}

int max_output_length(const ChannelSpec& spec) {
  return kind_of(spec) == ChannelKind::deletion ? input_length(spec) : 2 * input_length(spec);
}

namespace {

double deletion_weight(int m, int w, double delta) { return ipow(delta, m - w) * ipow(1.0 - delta, w); }

double insertion_weight(int m, int w, double iota) {
  const int d = w - m;
  return ipow(iota, d) * ipow(1.0 - iota, m - d) * std::ldexp(1.0, -d);
}

}  // namespace

double deletion_prob(const BitString& x, const BitString& y, double delta) {
  if (y.size() > x.size()) throw InvalidArgument("deletion_prob: output longer than input");
  return static_cast<double>(embedding_number(x, y)) * deletion_weight(x.size(), y.size(), delta);
}

double insertion_prob(const BitString& x, const BitString& y, double iota) {
  const int m = x.size();
  if (y.size() < m || y.size() > 2 * m) throw InvalidArgument("insertion_prob: output length outside [m, 2m]");
  return static_cast<double>(one_embedding_number(y, x)) * insertion_weight(m, y.size(), iota);
}

double layer_prob(const ChannelSpec& spec, int w) {
  const int m = input_length(spec);
  if (w < min_output_length(spec) || w > max_output_length(spec)) {
    throw InvalidArgument("layer_prob: output length " + std::to_string(w) + " out of range");
  }
  if (const auto* d = std::get_if<DeletionSpec>(&spec)) {
    return static_cast<double>(binomial(m, w)) * deletion_weight(m, w, d->delta);
  }
  const double iota = std::get<InsertionSpec>(spec).iota;
  const int d = w - m;
  return static_cast<double>(binomial(m, d)) * ipow(iota, d) * ipow(1.0 - iota, m - d);
}

namespace {

struct Word {
  int len;
  std::uint64_t bits;

  friend auto operator<=>(const Word&, const Word&) = default;
};

void delete_into(std::uint64_t bits, int len, int start, int remaining, std::vector<Word>& out) {
  if (remaining == 0) {
    out.push_back({len, bits});
    return;
  }
  for (int p = start; p <= len - remaining; ++p) {
    const std::uint64_t shorter = (bits & low_mask(p)) | ((bits >> (p + 1)) << p);
    delete_into(shorter, len - 1, p, remaining - 1, out);
  }
}

void insert_into(std::uint64_t x, int m, int i, std::uint64_t y, int ylen, std::vector<Word>& out) {
  if (i == m) {
    out.push_back({ylen, y});
    return;
  }
  y |= ((x >> i) & 1U) << ylen;
  ++ylen;
  insert_into(x, m, i + 1, y, ylen, out);
  insert_into(x, m, i + 1, y, ylen + 1, out);
  insert_into(x, m, i + 1, y | (std::uint64_t{1} << ylen), ylen + 1, out);
}

// Collapses a multiset of words into (word, multiplicity) pairs in ascending order.
std::vector<std::pair<Word, std::uint64_t>> count_words(std::vector<Word>& words) {
  std::sort(words.begin(), words.end());
  std::vector<std::pair<Word, std::uint64_t>> counted;
  for (std::size_t i = 0; i < words.size();) {
    std::size_t j = i;
    while (j < words.size() && words[j] == words[i]) ++j;
    counted.emplace_back(words[i], j - i);
    i = j;
  }
  return counted;
}

constexpr std::uint64_t kRowBytes = std::uint64_t{1} << 30;

std::uint64_t pow3(int k) {
  std::uint64_t r = 1;
  for (int i = 0; i < k; ++i) r *= 3;
  return r;
}

}  // namespace

std::vector<std::pair<BitString, double>> enumerate_row(const ChannelSpec& spec, const BitString& x) {
  const int m = input_length(spec);
  if (x.size() != m) throw InvalidArgument("enumerate_row: input length does not match channel");
  std::vector<Word> words;
  if (const auto* del = std::get_if<DeletionSpec>(&spec)) {
    if (m > kMaxRowInputLength) {
      throw ResourceLimit("enumerate_row: input length", static_cast<std::uint64_t>(m), kMaxRowInputLength);
    }
    words.reserve(std::uint64_t{1} << m);
    for (int d = 0; d <= m; ++d) delete_into(x.bits(), m, 0, d, words);
    std::vector<std::pair<BitString, double>> row;
    for (const auto& [word, count] : count_words(words)) {
      const double p = static_cast<double>(count) * deletion_weight(m, word.len, del->delta);
      if (p > 0.0) row.emplace_back(BitString(word.len, word.bits), p);
    }
    return row;
  }
  const double iota = std::get<InsertionSpec>(spec).iota;
  const std::uint64_t bytes = pow3(m) * sizeof(Word);
  if (m > kMaxRowInputLength || bytes > kRowBytes) {
    throw ResourceLimit("enumerate_row: insertion pattern storage in bytes", bytes, kRowBytes);
  }
  words.reserve(pow3(m));
  insert_into(x.bits(), m, 0, 0, 0, words);
  std::vector<std::pair<BitString, double>> row;
  for (const auto& [word, count] : count_words(words)) {
    const double p = static_cast<double>(count) * insertion_weight(m, word.len, iota);
    if (p > 0.0) row.emplace_back(BitString(word.len, word.bits), p);
  }
  return row;
}

SparseChannel::SparseChannel(RowMatrix transitions) : rows_(std::move(transitions)) {
  rows_.makeCompressed();
  for (Eigen::Index r = 0; r < rows_.outerSize(); ++r) {
    double sum = 0.0;
    for (RowMatrix::InnerIterator it(rows_, r); it; ++it) {
      if (!(it.value() >= 0.0)) throw InvalidArgument("channel has a negative or NaN transition probability");
      sum += it.value();
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InvalidArgument("channel row " + std::to_string(r) + " sums to " + std::to_string(sum));
    }
  }
  cols_ = ColMatrix(rows_);
  cols_.makeCompressed();
}

void SparseChannel::row(std::uint64_t x, std::vector<Transition>& out) const {
  out.clear();
  for (RowMatrix::InnerIterator it(rows_, static_cast<Eigen::Index>(x)); it; ++it) {
    if (it.value() > 0.0) out.push_back({static_cast<std::uint64_t>(it.col()), it.value()});
  }
}

void SparseChannel::column(std::uint64_t y, std::vector<Transition>& out) const {
  out.clear();
  for (ColMatrix::InnerIterator it(cols_, static_cast<Eigen::Index>(y)); it; ++it) {
    if (it.value() > 0.0) out.push_back({static_cast<std::uint64_t>(it.row()), it.value()});
  }
}

SparseChannel make_channel(const Eigen::MatrixXd& transitions) {
  return SparseChannel(transitions.sparseView(0.0, 0.0));
}

SparseChannel noiseless_channel(int symbols) {
  if (symbols < 1) throw InvalidArgument("noiseless channel needs at least one symbol");
  return make_channel(Eigen::MatrixXd::Identity(symbols, symbols));
}

SparseChannel binary_symmetric_channel(double flip) {
  if (!(flip >= 0.0 && flip <= 1.0)) throw InvalidArgument("crossover probability must be in [0, 1]");
  Eigen::MatrixXd w(2, 2);
  w << 1.0 - flip, flip, flip, 1.0 - flip;
  return make_channel(w);
}

SparseChannel binary_erasure_channel(double erasure) {
  if (!(erasure >= 0.0 && erasure <= 1.0)) throw InvalidArgument("erasure probability must be in [0, 1]");
  Eigen::MatrixXd w(2, 3);
  w << 1.0 - erasure, 0.0, erasure, 0.0, 1.0 - erasure, erasure;
  return make_channel(w);
}

DeletionChannel::DeletionChannel(DeletionSpec spec) : spec_(spec) {
  spec_.validate();
  if (spec_.m > kMaxRowInputLength) {
    throw ResourceLimit("deletion channel view: input length", static_cast<std::uint64_t>(spec_.m),
                        kMaxRowInputLength);
  }
  for (int w = 0; w <= spec_.m; ++w) weight_.push_back(deletion_weight(spec_.m, w, spec_.delta));
}

std::uint64_t DeletionChannel::input_count() const { return std::uint64_t{1} << spec_.m; }
std::uint64_t DeletionChannel::output_count() const { return (std::uint64_t{2} << spec_.m) - 1; }

std::uint64_t DeletionChannel::output_index(const BitString& y) const {
  if (y.size() > spec_.m) throw InvalidArgument("output longer than the channel input");
  return (std::uint64_t{1} << y.size()) - 1 + y.bits();
}

BitString DeletionChannel::output_at(std::uint64_t index) const {
  if (index >= output_count()) throw InvalidArgument("output index out of range");
  const int w = std::bit_width(index + 1) - 1;
  return BitString(w, index + 1 - (std::uint64_t{1} << w));
}

void DeletionChannel::row(std::uint64_t x, std::vector<Transition>& out) const {
  out.clear();
  for (const auto& [y, p] : enumerate_row(spec_, BitString(spec_.m, x))) out.push_back({output_index(y), p});
}

namespace {

// Depth-first over inputs; ways[j] counts embeddings of y_1..y_j into the
// current input prefix.
void supersequences(const BitString& y, int m, int i, std::uint64_t x, std::vector<std::uint64_t>& ways,
                    std::vector<std::pair<std::uint64_t, std::uint64_t>>& out) {
  const int w = y.size();
  if (i == m) {
    if (ways[w] > 0) out.emplace_back(x, ways[w]);
    return;
  }
  // Some embedding must still be completable with the m - i symbols left.
  bool alive = false;
  for (int j = std::max(0, w - (m - i)); j <= w && !alive; ++j) alive = ways[j] > 0;
  if (!alive) return;
  std::vector<std::uint64_t> saved(ways);
  for (int b = 0; b < 2; ++b) {
    for (int j = w; j >= 1; --j) {
      if (y[j - 1] == b) ways[j] += ways[j - 1];
    }
    supersequences(y, m, i + 1, x | (static_cast<std::uint64_t>(b) << i), ways, out);
    ways = saved;
  }
}

}  // namespace

void DeletionChannel::column(std::uint64_t y, std::vector<Transition>& out) const {
  const BitString word = output_at(y);
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(word.size()) + 1, 0);
  ways[0] = 1;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> found;
  supersequences(word, spec_.m, 0, 0, ways, found);
  std::sort(found.begin(), found.end());
  out.clear();
  const double weight = weight_[static_cast<std::size_t>(word.size())];
  for (const auto& [x, count] : found) {
    const double p = static_cast<double>(count) * weight;
    if (p > 0.0) out.push_back({x, p});
  }
}

InsertionChannel::InsertionChannel(InsertionSpec spec) : spec_(spec) {
  spec_.validate();
  if (spec_.m > kMaxRowInputLength) {
    throw ResourceLimit("insertion channel view: input length", static_cast<std::uint64_t>(spec_.m),
                        kMaxRowInputLength);
  }
  for (int w = spec_.m; w <= 2 * spec_.m; ++w) weight_.push_back(insertion_weight(spec_.m, w, spec_.iota));
}

std::uint64_t InsertionChannel::input_count() const { return std::uint64_t{1} << spec_.m; }

std::uint64_t InsertionChannel::output_count() const {
  return (std::uint64_t{2} << (2 * spec_.m)) - (std::uint64_t{1} << spec_.m);
}

std::uint64_t InsertionChannel::output_index(const BitString& y) const {
  if (y.size() < spec_.m || y.size() > 2 * spec_.m) throw InvalidArgument("output length outside [m, 2m]");
  return (std::uint64_t{1} << y.size()) - (std::uint64_t{1} << spec_.m) + y.bits();
}

BitString InsertionChannel::output_at(std::uint64_t index) const {
  if (index >= output_count()) throw InvalidArgument("output index out of range");
  const std::uint64_t shifted = index + (std::uint64_t{1} << spec_.m);
  const int w = std::bit_width(shifted) - 1;
  return BitString(w, shifted - (std::uint64_t{1} << w));
}

void InsertionChannel::row(std::uint64_t x, std::vector<Transition>& out) const {
  out.clear();
  for (const auto& [y, p] : enumerate_row(spec_, BitString(spec_.m, x))) out.push_back({output_index(y), p});
}

namespace {

// Removes non-adjacent position sets from {1..w-1} (0-based) of y.
void remove_nonadjacent(std::uint64_t bits, int len, int start, int remaining, std::vector<std::uint64_t>& out) {
  if (remaining == 0) {
    out.push_back(bits);
    return;
  }
  for (int p = start; p <= len - 1; ++p) {
    const std::uint64_t shorter = (bits & low_mask(p)) | ((bits >> (p + 1)) << p);
    // In the shortened word the next removable position is p + 1 (skipping
    // the original neighbour).
    remove_nonadjacent(shorter, len - 1, p + 1, remaining - 1, out);
  }
}

}  // namespace

void InsertionChannel::column(std::uint64_t y, std::vector<Transition>& out) const {
  const BitString word = output_at(y);
  const int d = word.size() - spec_.m;
  std::vector<std::uint64_t> inputs;
  remove_nonadjacent(word.bits(), word.size(), 1, d, inputs);
  std::sort(inputs.begin(), inputs.end());
  out.clear();
  const double weight = weight_[static_cast<std::size_t>(d)];
  for (std::size_t i = 0; i < inputs.size();) {
    std::size_t j = i;
    while (j < inputs.size() && inputs[j] == inputs[i]) ++j;
    const double p = static_cast<double>(j - i) * weight;
    if (p > 0.0) out.push_back({inputs[i], p});
    i = j;
  }
}

SparseChannel materialize(const FiniteChannelView& channel, std::uint64_t max_bytes) {
  const std::uint64_t inputs = channel.input_count();
  const std::uint64_t outputs = channel.output_count();
  constexpr std::uint64_t kEntryBytes = sizeof(Eigen::Triplet<double>) + 2 * (sizeof(double) + sizeof(int));
  if (outputs > static_cast<std::uint64_t>(std::numeric_limits<int>::max()) || inputs * kEntryBytes > max_bytes) {
    throw ResourceLimit("materialize: channel size in bytes", inputs * kEntryBytes, max_bytes);
  }
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<Transition> row;
  for (std::uint64_t x = 0; x < inputs; ++x) {
    channel.row(x, row);
    for (const auto& t : row) triplets.emplace_back(static_cast<int>(x), static_cast<int>(t.index), t.prob);
    const std::uint64_t projected = triplets.size() * kEntryBytes / (x + 1) * inputs;
    if (triplets.size() * kEntryBytes > max_bytes || (x >= 64 && projected > max_bytes)) {
      throw ResourceLimit("materialize: channel size in bytes", projected, max_bytes);
    }
  }
  SparseChannel::RowMatrix matrix(static_cast<Eigen::Index>(inputs), static_cast<Eigen::Index>(outputs));
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return SparseChannel(std::move(matrix));
}

}  // namespace indel
