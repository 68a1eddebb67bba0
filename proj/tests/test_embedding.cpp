#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "indel/bitstring.hpp"
#include "indel/combinatorics.hpp"
#include "indel/embedding.hpp"
#include "indel/error.hpp"
#include "oracles.hpp"

using namespace indel;

TEST_SUITE("embedding") {

TEST_CASE("bitstring round trips and symmetries") {
  const BitString x = BitString::parse("0010111");
  CHECK(x.size() == 7);
  CHECK(x.str() == "0010111");
  CHECK(x[2] == 1);
  CHECK(x.reversed().str() == "1110100");
  CHECK(x.complemented().str() == "1101000");
  CHECK(BitString::parse("").empty());
  CHECK_THROWS_AS(BitString::parse("01a"), InvalidArgument);
  CHECK_THROWS_AS(BitString(3, 0b1000), InvalidArgument);
  CHECK_THROWS_AS(BitString(65, 0), InvalidArgument);
  CHECK(BitString(2, 3) < BitString(3, 0));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int len = oracle::uniform_int(rng, 0, 64);
    const BitString b(len, oracle::random_bits(rng, len));
    CHECK(b.reversed().reversed() == b);
    CHECK(b.complemented().complemented() == b);
    CHECK(BitString::parse(b.str()) == b);
  }
}

TEST_CASE("binomial") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(64, 32) == 1832624140942590534ULL);
  CHECK(binomial(4, 5) == 0);
  CHECK(binomial(4, -1) == 0);
}

TEST_CASE("embedding numbers agree with direct counting") {
  CHECK(embedding_number(BitString::parse("0101"), BitString::parse("01")) == 3);
  CHECK(embedding_number(BitString::parse("000"), BitString::parse("")) == 1);
  CHECK_THROWS_AS(embedding_number(BitString::parse("0"), BitString::parse("01")), InvalidArgument);
  CHECK(one_embedding_number(BitString::parse("001"), BitString::parse("01")) == 1);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = oracle::uniform_int(rng, 0, 14);
    const int w = oracle::uniform_int(rng, 0, m);
    const BitString x(m, oracle::random_bits(rng, m));
    const BitString y(w, oracle::random_bits(rng, w));
    CHECK(embedding_number(x, y) == oracle::subsequence_count(x.str(), y.str()));
  }
  for (int trial = 0; trial < 500; ++trial) {
    const int m = oracle::uniform_int(rng, 1, 8);
    const int w = oracle::uniform_int(rng, m, 2 * m);
    const BitString x(m, oracle::random_bits(rng, m));
    const BitString y(w, oracle::random_bits(rng, w));
    CHECK(one_embedding_number(y, x) == oracle::one_embedding_count(y.str(), x.str()));
  }
}

TEST_CASE("closed-form entries") {
  for (int m = 1; m <= 14; ++m) {
    CHECK(compute_E(m, 0) == 1);
    CHECK(compute_E(m, 1) == 2 * static_cast<std::uint64_t>(m));
    CHECK(compute_E(m, m) == (std::uint64_t{1} << m));
  }
  CHECK(compute_E(5, 2) == 32);
  CHECK(compute_E(5, 3) == 52);
  CHECK(compute_E(5, 4) == 54);
  CHECK(compute_E1(3, 2) == 12);
  for (int m = 1; m <= 10; ++m) {
    CHECK(compute_E1(m, m) == (std::uint64_t{1} << m));
    CHECK(compute_E1(2 * m, m) == (std::uint64_t{1} << (2 * m)));
  }
}

TEST_CASE("max-sum kernels match the per-output oracle") {
  for (int m = 1; m <= 9; ++m) {
    for (int w = 0; w <= m; ++w) {
      INFO("m=" << m << " w=" << w);
      CHECK(compute_E(m, w) == oracle::max_sum_deletion(m, w));
    }
  }
  for (int m = 1; m <= 7; ++m) {
    for (int w = m; w <= 2 * m; ++w) {
      INFO("m=" << m << " w=" << w);
      CHECK(compute_E1(w, m) == oracle::max_sum_insertion(w, m));
    }
  }
}

TEST_CASE("both deletion kernels agree and the thread count does not matter") {
  for (int m = 10; m <= 15; ++m) {
    for (int w : {2, m / 2, m - 2}) {
      const std::uint64_t single = compute_E(m, w, {std::uint64_t{1} << 40, 1});
      CHECK(compute_E(m, w, {std::uint64_t{1} << 40, 4}) == single);
      CHECK(single >= binomial(m, w));
      CHECK(single <= (binomial(m, w) << w));
    }
  }
  CHECK(compute_E1(20, 12, {std::uint64_t{1} << 40, 1}) == compute_E1(20, 12, {std::uint64_t{1} << 40, 3}));
}

TEST_CASE("cost estimates and budget refusal") {
  CHECK(estimate_E_cost(20, 0).method == EmbeddingMethod::trivial);
  CHECK(estimate_E_cost(30, 15).ops > estimate_E_cost(20, 10).ops);
  CHECK(estimate_E1_cost(30, 20).ops > estimate_E1_cost(25, 20).ops);
  CHECK_THROWS_AS(compute_E(28, 14, {1000, 1}), BudgetExceeded);
  CHECK_THROWS_AS(compute_E1(40, 20, {1000, 1}), BudgetExceeded);
  CHECK_THROWS_AS(compute_E(5, 6), InvalidArgument);
  CHECK_THROWS_AS(compute_E1(4, 5), InvalidArgument);
  CHECK_THROWS_AS(compute_E1(11, 5), InvalidArgument);

  const TableComputation t = compute_table(ChannelKind::deletion, 24, 0, 24, {1 << 20, 0});
  CHECK(!t.refused.empty());
  CHECK(t.table.size() + t.refused.size() == 25);
  CHECK(t.seconds.size() == t.table.size());
  CHECK(!t.table.complete());
}

TEST_CASE("embedding table bookkeeping") {
  EmbeddingTable t(ChannelKind::insertion, 3);
  CHECK(t.min_length() == 3);
  CHECK(t.max_length() == 6);
  CHECK_THROWS_AS(t.set(7, 1, Provenance::computed), InvalidArgument);
  CHECK_THROWS_AS(t.set(2, 1, Provenance::computed), InvalidArgument);
  for (int w = 3; w <= 6; ++w) t.set(w, compute_E1(w, 3), Provenance::computed);
  CHECK(t.complete());
  CHECK(t.value(4) == std::optional<std::uint64_t>{compute_E1(4, 3)});
  CHECK(!t.value(7));
  CHECK(audit_table(t).empty());

  EmbeddingTable bad(ChannelKind::deletion, 4);
  bad.set(0, 2, Provenance::computed);
  bad.set(2, 1000, Provenance::computed);
  CHECK(audit_table(bad).size() == 3);
  CHECK(parse_channel_kind("insertion") == ChannelKind::insertion);
  CHECK_THROWS_AS(parse_channel_kind("erasure"), InvalidArgument);
}

TEST_CASE("csv parsing and formatting") {
  const std::string text =
      "kind,m,w,value,provenance\n"
      "deletion,3,0,1,computed\n"
      "deletion,3,1,6,paper\n"
      "insertion,2,2,4\n";
  const TableSet tables = parse_tables(text, "mem");
  REQUIRE(tables.size() == 2);
  const auto& del = tables.at({ChannelKind::deletion, 3});
  CHECK(del.entries().at(1).provenance == Provenance::paper);
  CHECK(tables.at({ChannelKind::insertion, 2}).entries().at(2).provenance == Provenance::computed);
  CHECK(parse_tables(format_tables(tables), "again") == tables);

  auto line_of = [](const std::string& bad) {
    try {
      parse_tables(bad, "bad");
    } catch (const ParseError& e) {
      return e.line;
    }
    return std::size_t{0};
  };
  CHECK(line_of("kind,m,w\n") == 1);
  CHECK(line_of("kind,m,w,value,provenance\ndeletion,3,0\n") == 2);
  CHECK(line_of("kind,m,w,value,provenance\ndeletion,3,0,1\ndeletion,3,0,1\n") == 3);
  CHECK(line_of("kind,m,w,value,provenance\nerasure,3,0,1\n") == 2);
  CHECK(line_of("kind,m,w,value,provenance\ndeletion,3,0,-1\n") == 2);
  CHECK(line_of("kind,m,w,value,provenance\ndeletion,3,9,1\n") == 2);
  CHECK(line_of("kind,m,w,value,provenance\ndeletion,3,0,1,guessed\n") == 2);
  CHECK_THROWS_AS(parse_tables("kind,m,w,value,provenance\ndeletion,3,0,2\n", "a", true), ParseError);

  TableSet merged = tables;
  CHECK_NOTHROW(merge_tables(merged, tables, "same"));
  CHECK_THROWS_AS(merge_tables(merged, parse_tables("kind,m,w,value,provenance\ndeletion,3,1,7\n", "c"), "c"),
                  ParseError);
}

TEST_CASE("table files and directories") {
  const auto dir = std::filesystem::temp_directory_path() / "indel_embedding_test";
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_table_directory(dir), MissingData);
  std::filesystem::create_directories(dir);
  CHECK_THROWS_AS(load_table_directory(dir), MissingData);

  EmbeddingTable t(ChannelKind::deletion, 4);
  for (int w = 0; w <= 4; ++w) t.set(w, compute_E(4, w), Provenance::computed);
  save_table(dir / "d4.csv", t);
  EmbeddingTable u(ChannelKind::insertion, 2);
  u.set(2, 4, Provenance::computed);
  save_table(dir / "i2.csv", u);
  const TableSet loaded = load_table_directory(dir, true);
  CHECK(loaded.at({ChannelKind::deletion, 4}) == t);
  CHECK(loaded.at({ChannelKind::insertion, 2}) == u);
  CHECK(load_table(dir / "d4.csv").size() == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("shipped tables") {
  const TableSet& ref = reference_tables();
  for (int m : {5, 20, 21, 22, 23}) {
    REQUIRE(ref.count({ChannelKind::deletion, m}) == 1);
    CHECK(ref.at({ChannelKind::deletion, m}).complete());
  }
  for (int m = 24; m <= 32; ++m) CHECK(ref.count({ChannelKind::deletion, m}) == 1);
  for (int m = 12; m <= 25; ++m) CHECK(ref.count({ChannelKind::insertion, m}) == 1);
  for (int m = 12; m <= 16; ++m) CHECK(ref.at({ChannelKind::insertion, m}).complete());
  for (const auto& [key, table] : ref) {
    INFO(to_string(key.first) << " m=" << key.second);
    CHECK(audit_table(table).empty());
    for (const auto& [w, e] : table.entries()) CHECK(e.provenance == Provenance::paper);
  }
  CHECK(load_table_directory(INDEL_SOURCE_DIR "/data/paper") == ref);
  for (int w = 0; w <= 5; ++w) CHECK(ref.at({ChannelKind::deletion, 5}).value(w) == compute_E(5, w));
}

}  // TEST_SUITE
