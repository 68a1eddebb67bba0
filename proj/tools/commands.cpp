#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "indel/error.hpp"
#include "indel/normal_approx.hpp"
#include "reference_rates.hpp"

namespace indel::cli {

std::string format_real(double value, int decimals) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

namespace {

std::string format_param(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

// Maps library exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const MissingData& e) {
    err << "error: " << e.what() << '\n';
    return kMissingData;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetRefusal;
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetRefusal;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}

const EmbeddingTable& require_table(const TableSet& tables, ChannelKind kind, int m,
                                    const std::filesystem::path& dir) {
  auto it = tables.find({kind, m});
  if (it == tables.end()) {
    throw MissingData("no " + to_string(kind) + " table for m=" + std::to_string(m) + " in " + dir.string());
  }
  return it->second;
}

// Writes to the file when a path is given, else to `out`.
void emit(const std::optional<std::filesystem::path>& path, const std::string& text, std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  if (path->has_parent_path()) std::filesystem::create_directories(path->parent_path());
  std::ofstream file(*path);
  if (!file) throw InvalidArgument("cannot write " + path->string());
  file << text;
}

std::string bound_line(const BoundResult& r, const std::string& lambda) {
  std::ostringstream line;
  line << to_string(r.method) << ',' << r.m << ',' << r.n << ',' << format_param(r.parameter) << ','
       << format_param(r.epsilon) << ',' << format_real(r.log2_M) << ',' << format_real(r.rate) << ',' << lambda
       << '\n';
  return line.str();
}

struct BlockInformation {
  double information = 0.0;  // bits per block
  double variance = 0.0;
};

BlockInformation block_information(ChannelKind kind, int m, double param) {
  const SparseChannel channel = blocked_dmc(make_spec(kind, m, param));
  const BlahutArimotoResult ba = blahut_arimoto(channel);
  return {ba.information, info_variance(channel, ba.p)};
}

}  // namespace

int cmd_tables_compute(const TablesComputeArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const EmbeddingTable shape(args.kind, args.m);
    const int lo = args.w_min.value_or(shape.min_length());
    const int hi = args.w_max.value_or(shape.max_length());
    if (lo > hi || lo < shape.min_length() || hi > shape.max_length()) {
      throw InvalidArgument("output length range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] outside [" + std::to_string(shape.min_length()) + ", " +
                            std::to_string(shape.max_length()) + "]");
    }
    const TableComputation result = compute_table(args.kind, args.m, lo, hi, {args.budget, args.threads});
    std::size_t k = 0;
    for (const auto& [w, entry] : result.table.entries()) {
      err << to_string(args.kind) << " m=" << args.m << " w=" << w << " value=" << entry.value << " seconds="
          << format_real(result.seconds[k++], 3) << '\n';
    }
    TableSet one;
    one.emplace(std::make_pair(args.kind, args.m), result.table);
    emit(args.out_path, format_tables(one), out);
    if (!result.refused.empty()) {
      err << "refused (over budget " << args.budget << "):";
      for (int w : result.refused) err << ' ' << w;
      err << '\n';
      return static_cast<int>(kBudgetRefusal);
    }
    return static_cast<int>(kOk);
  });
}

int cmd_tables_show(const TablesShowArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TableSet all = load_table_directory(args.tables_dir);
    TableSet selected;
    for (const auto& [key, table] : all) {
      if (args.kind && key.first != *args.kind) continue;
      if (args.m && key.second != *args.m) continue;
      selected.emplace(key, table);
    }
    if (selected.empty()) throw MissingData("no matching tables in " + args.tables_dir.string());
    out << format_tables(selected);
    return static_cast<int>(kOk);
  });
}

int cmd_bound(const BoundArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.method == BoundMethod::bec) {
      if (args.kind != ChannelKind::deletion) throw InvalidArgument("the erasure bound applies to deletion only");
      out << bound_line(bec_max_logM(args.n, args.param, args.eps), "-");
      return static_cast<int>(kOk);
    }
    const ChannelSpec spec = make_spec(args.kind, args.m, args.param);
    if (args.method == BoundMethod::normal) {
      const BlockInformation info = block_information(args.kind, args.m, args.param);
      const NAResult na = normal_approx_logM(info.information, info.variance, args.n, args.eps);
      BoundResult r;
      r.method = BoundMethod::normal;
      r.log2_M = na.log2M_estimate;
      r.rate = na.log2M_estimate / (static_cast<double>(args.m) * args.n);
      r.n = args.n;
      r.m = args.m;
      r.parameter = args.param;
      r.epsilon = args.eps;
      out << bound_line(r, "-");
      return static_cast<int>(kOk);
    }
    const TableSet tables = load_table_directory(args.tables_dir);
    const LayerProfile profile = layer_stats(spec, require_table(tables, args.kind, args.m, args.tables_dir));
    if (args.method == BoundMethod::mocvb) {
      if (!profile.complete) {
        throw MissingData("max-oriented bound needs a complete table for m=" + std::to_string(args.m));
      }
      BoundResult r = mo_cvb(total_tau(profile), args.n, args.eps, args.m);
      r.parameter = args.param;
      out << bound_line(r, r.lambda.str());
      return static_cast<int>(kOk);
    }
    if (args.method != BoundMethod::locvb) throw InvalidArgument("unsupported bound method");
    const BoundResult r = lo_cvb(profile, args.n, args.eps, args.lambda);
    out << bound_line(r, r.lambda.str());
    return static_cast<int>(kOk);
  });
}

std::vector<SweepRow> sweep_rows(const SweepArgs& args, const TableSet& tables) {
  if (args.n_max < 1) throw InvalidArgument("n-max must be >= 1");
  const int m_min = args.m_min.value_or(args.kind == ChannelKind::deletion ? 20 : 12);
  const int m_max = args.m_max.value_or(32);

  std::vector<int> ns;
  if (args.dense) {
    for (int n = 1; n <= args.n_max; ++n) ns.push_back(n);
  } else {
    for (int n = 1; n <= args.n_max; n *= 2) ns.push_back(n);
  }

  std::map<int, LayerProfile> profiles;
  for (const auto& [key, table] : tables) {
    if (key.first != args.kind || key.second < m_min || key.second > m_max) continue;
    profiles.emplace(key.second, layer_stats(make_spec(args.kind, key.second, args.param), table));
  }
  if (profiles.empty()) {
    throw MissingData("no " + to_string(args.kind) + " tables with m in [" + std::to_string(m_min) + ", " +
                      std::to_string(m_max) + "]");
  }

  // N -> candidate (m, n) pairs.
  std::map<int, std::vector<std::pair<int, int>>> grid;
  for (const auto& [m, profile] : profiles) {
    for (int n : ns) grid[m * n].emplace_back(m, n);
  }

  std::optional<BlockInformation> info;
  if (args.na_m > 0) info = block_information(args.kind, args.na_m, args.param);

  std::vector<SweepRow> rows;
  for (const auto& [N, pairs] : grid) {
    auto capped = [N = N](double log2M) { return std::min(log2M, static_cast<double>(N)); };
    SweepRow lo{N, pairs.front().first, pairs.front().second, BoundMethod::locvb,
                std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    std::optional<SweepRow> mo;
    for (const auto& [m, n] : pairs) {
      const LayerProfile& profile = profiles.at(m);
      const double raw = lo_cvb(profile, n, args.eps).log2_M;
      if (!std::isfinite(raw)) continue;
      const double l = capped(raw);
      if (l < lo.log2M) lo = {N, m, n, BoundMethod::locvb, l, l / N};
      if (profile.complete) {
        const double v = capped(mo_cvb(total_tau(profile), n, args.eps, m).log2_M);
        if (!mo || v < mo->log2M) mo = SweepRow{N, m, n, BoundMethod::mocvb, v, v / N};
      }
    }
    // No row when every candidate bound is infinite.
    if (std::isfinite(lo.log2M)) rows.push_back(lo);
    if (mo) rows.push_back(*mo);
    if (args.kind == ChannelKind::deletion) {
      const double b = capped(bec_max_logM(N, args.param, args.eps).log2_M);
      rows.push_back({N, 1, N, BoundMethod::bec, b, b / N});
    }
    if (info) {
      const double bits = static_cast<double>(args.na_m);
      const NAResult na = normal_approx_logM(info->information / bits, info->variance / bits, N, args.eps);
      rows.push_back({N, 1, N, BoundMethod::normal, na.log2M_estimate, na.log2M_estimate / N});
    }
  }
  return rows;
}

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TableSet tables = load_table_directory(args.tables_dir);
    const std::vector<SweepRow> rows = sweep_rows(args, tables);
    std::ostringstream csv;
    csv << "N,m,n,method,log2M,rate";
    for (const auto& [label, value] : args.references) {
      csv << (args.references.size() == 1 ? std::string(",reference") : ",reference_" + label);
    }
    csv << '\n';
    for (const auto& r : rows) {
      csv << r.N << ',' << r.m << ',' << r.n << ',' << to_string(r.method) << ',' << format_real(r.log2M) << ','
          << format_real(r.rate);
      for (const auto& [label, value] : args.references) csv << ',' << format_real(value);
      csv << '\n';
    }
    emit(args.out_path, csv.str(), out);
    return static_cast<int>(kOk);
  });
}

int cmd_avb(const AvbArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::unique_ptr<FiniteChannelView> view;
    if (args.kind == ChannelKind::deletion) {
      view = std::make_unique<DeletionChannel>(DeletionSpec{args.m, args.param});
    } else {
      view = std::make_unique<InsertionChannel>(InsertionSpec{args.m, args.param});
    }
    const AvbCurve curve = greedy_avb(*view, args.max_size.value_or(view->input_count()), args.tie_break, args.seed);
    std::ostringstream csv;
    csv << "M,log2M,fer\n";
    char buf[64];
    for (std::size_t i = 0; i < curve.fer.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", curve.fer[i]);
      csv << i + 1 << ',' << format_real(std::log2(static_cast<double>(i + 1))) << ',' << buf << '\n';
    }
    emit(args.out_path, csv.str(), out);
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const TableSet tables = load_table_directory(args.tables_dir);
    int failures = 0;
    auto report = [&](bool ok, const std::string& what) {
      out << (ok ? "PASS " : "FAIL ") << what << '\n';
      if (!ok) ++failures;
    };

    // Loaded tables against the compiled-in copy; mismatching (kind, m)
    // pairs also fail every rate computed from them.
    std::set<std::pair<ChannelKind, int>> corrupted;
    for (const auto& [key, reference] : reference_tables()) {
      auto it = tables.find(key);
      for (const auto& [w, entry] : reference.entries()) {
        const auto loaded = it == tables.end() ? std::nullopt : it->second.value(w);
        const bool ok = loaded && *loaded == entry.value;
        if (!ok) {
          corrupted.insert(key);
          report(false, "table " + to_string(key.first) + " m=" + std::to_string(key.second) + " w=" +
                            std::to_string(w) + " loaded=" + (loaded ? std::to_string(*loaded) : "missing") +
                            " expected=" + std::to_string(entry.value));
        }
      }
      if (!corrupted.count(key)) {
        report(true, "table " + to_string(key.first) + " m=" + std::to_string(key.second) + " (" +
                         std::to_string(reference.size()) + " entries)");
      }
    }
    for (const auto& [key, table] : tables) {
      for (const auto& issue : audit_table(table)) {
        corrupted.insert(key);
        report(false, "audit " + issue);
      }
    }

    // Small identities recomputed from scratch.
    const std::array<std::uint64_t, 6> e5 = {1, 10, 32, 52, 54, 32};
    for (int w = 0; w <= 5; ++w) {
      const std::uint64_t v = compute_E(5, w);
      report(v == e5[static_cast<std::size_t>(w)],
             "identity E(5," + std::to_string(w) + ")=" + std::to_string(v) + " expected " +
                 std::to_string(e5[static_cast<std::size_t>(w)]));
    }
    {
      const std::uint64_t v = compute_E1(3, 2);
      report(v == 12, "identity E1(3,2)=" + std::to_string(v) + " expected 12");
    }

    for (std::size_t j = 0; j < kReferenceLengths.size(); ++j) {
      const int m = kReferenceLengths[j];
      const auto key = std::make_pair(ChannelKind::deletion, m);
      auto it = tables.find(key);
      const bool intact = !corrupted.count(key);
      auto check = [&](const std::string& cell, double rate, double expected) {
        const double diff = rate - expected;
        report(intact && std::abs(diff) <= args.tolerance,
               cell + " rate=" + format_real(rate, 7) + " expected=" + format_param(expected) +
                   " diff=" + format_real(diff, 7) + (intact ? "" : " (table mismatch)"));
      };
      if (it == tables.end()) {
        report(false, "rates m=" + std::to_string(m) + ": table missing");
        continue;
      }
      const LayerProfile profile = layer_stats(DeletionSpec{m, kReferenceDelta}, it->second);
      for (const auto& row : kReferenceRates) {
        const double expected = j == 0 ? row.locvb_m5 : (j == 1 ? row.locvb_m22 : row.locvb_m23);
        const BoundResult r = lo_cvb(profile, row.n, kReferenceEpsilon);
        check("locvb m=" + std::to_string(m) + " n=" + std::to_string(row.n) + " lambda=" + r.lambda.str(), r.rate,
              expected);
      }
      if (profile.complete) {
        check("asymptotic m=" + std::to_string(m), blocked_capacity_upper(profile), kReferenceAsymptotic[j]);
      } else {
        report(false, "asymptotic m=" + std::to_string(m) + ": table incomplete");
      }
    }
    for (const auto& row : kReferenceRates) {
      const BoundResult r = bec_max_logM(kReferenceBecBlock * row.n, kReferenceDelta, kReferenceEpsilon);
      const double diff = r.rate - row.bec;
      report(std::abs(diff) <= args.tolerance, "bec N=" + std::to_string(kReferenceBecBlock * row.n) + " rate=" +
                                                   format_real(r.rate, 7) + " expected=" + format_param(row.bec) +
                                                   " diff=" + format_real(diff, 7));
    }
    {
      const double rate = 1.0 - kReferenceDelta;
      report(std::abs(rate - kReferenceBecAsymptotic) <= args.tolerance,
             "bec asymptotic rate=" + format_real(rate, 7) + " expected=" + format_param(kReferenceBecAsymptotic));
    }

    out << (failures == 0 ? "verify: all checks passed" : "verify: " + std::to_string(failures) + " check(s) failed")
        << '\n';
    return static_cast<int>(failures == 0 ? kOk : kValidationFailure);
  });
}

}  // namespace indel::cli
