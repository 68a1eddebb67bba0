#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "commands.hpp"

namespace {

using indel::ChannelKind;

const std::map<std::string, ChannelKind> kKinds = {{"deletion", ChannelKind::deletion},
                                                   {"insertion", ChannelKind::insertion}};

}  // namespace

int main(int argc, char** argv) {
  using namespace indel::cli;
  CLI::App app{"Finite-length converse and achievability bounds for binary deletion and insertion channels"};
  app.require_subcommand(1);
  int status = kOk;
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads for table kernels (0 = all cores)");

  auto* tables = app.add_subcommand("tables", "Compute or inspect embedding-number tables");
  tables->require_subcommand(1);

  TablesComputeArgs compute;
  std::string compute_out;
  int compute_w_min = -1;
  int compute_w_max = -1;
  auto* tcompute = tables->add_subcommand("compute", "Compute one table column and write it as CSV");
  tcompute->add_option("--kind", compute.kind, "deletion or insertion")
      ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  tcompute->add_option("--m", compute.m, "Input block length")->required();
  tcompute->add_option("--w-min", compute_w_min, "Smallest output length");
  tcompute->add_option("--w-max", compute_w_max, "Largest output length");
  tcompute->add_option("--out", compute_out, "Output CSV path (stdout when omitted)");
  tcompute->add_option("--threads", compute.threads, "Worker threads (0 = all cores)");
  tcompute->add_option("--budget", compute.budget, "Per-entry operation budget");
  tcompute->callback([&] {
    if (compute_w_min >= 0) compute.w_min = compute_w_min;
    if (compute_w_max >= 0) compute.w_max = compute_w_max;
    if (!compute_out.empty()) compute.out_path = compute_out;
    if (compute.threads == 0) compute.threads = threads;
    status = cmd_tables_compute(compute, std::cout, std::cerr);
  });

  TablesShowArgs show;
  std::string show_kind;
  int show_m = -1;
  auto* tshow = tables->add_subcommand("show", "Print tables from a table directory");
  tshow->add_option("--tables", show.tables_dir, "Table directory");
  tshow->add_option("--kind", show_kind, "deletion or insertion")->check(CLI::IsMember({"deletion", "insertion"}));
  tshow->add_option("--m", show_m, "Input block length");
  tshow->callback([&] {
    if (!show_kind.empty()) show.kind = kKinds.at(show_kind);
    if (show_m >= 0) show.m = show_m;
    status = cmd_tables_show(show, std::cout, std::cerr);
  });

  BoundArgs bound;
  std::string bound_lambda = "exhaustive";
  auto* cbound = app.add_subcommand("bound", "Evaluate one bound; prints method,m,n,param,eps,log2M,rate,lambda");
  cbound->add_option("--method", bound.method, "locvb, mocvb, bec or normal")
      ->required()
      ->transform(CLI::CheckedTransformer(std::map<std::string, indel::BoundMethod>{
          {"locvb", indel::BoundMethod::locvb},
          {"mocvb", indel::BoundMethod::mocvb},
          {"bec", indel::BoundMethod::bec},
          {"normal", indel::BoundMethod::normal}}));
  cbound->add_option("--kind", bound.kind, "deletion or insertion")
      ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  cbound->add_option("--m", bound.m, "Input block length");
  cbound->add_option("--n", bound.n, "Number of blocks (total length N for bec)")->required();
  cbound->add_option("--param", bound.param, "Deletion or insertion probability");
  cbound->add_option("--eps", bound.eps, "Target frame error rate");
  cbound->add_option("--tables", bound.tables_dir, "Table directory");
  cbound->add_option("--lambda", bound_lambda, "exhaustive, segments or full")
      ->check(CLI::IsMember({"exhaustive", "segments", "full"}));
  cbound->callback([&] {
    bound.lambda = indel::parse_lambda_strategy(bound_lambda);
    status = cmd_bound(bound, std::cout, std::cerr);
  });

  SweepArgs sweep;
  std::string sweep_out;
  int sweep_m_min = -1;
  int sweep_m_max = -1;
  std::vector<std::string> sweep_refs;
  auto* csweep = app.add_subcommand("sweep", "Bounds versus total input length N = m n as CSV");
  csweep->add_option("--kind", sweep.kind, "deletion or insertion")
      ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  csweep->add_option("--param", sweep.param, "Deletion or insertion probability");
  csweep->add_option("--eps", sweep.eps, "Target frame error rate");
  csweep->add_option("--n-max", sweep.n_max, "Largest number of blocks");
  csweep->add_flag("--dense", sweep.dense, "Every n up to n-max instead of powers of two");
  csweep->add_option("--m-min", sweep_m_min, "Smallest table length used (default 20 deletion, 12 insertion)");
  csweep->add_option("--m-max", sweep_m_max, "Largest table length used");
  csweep->add_option("--na-m", sweep.na_m, "Block length of the normal approximation (0 disables)");
  csweep->add_option("--tables", sweep.tables_dir, "Table directory");
  csweep->add_option("--out", sweep_out, "Output CSV path (stdout when omitted)");
  csweep->add_option("--reference", sweep_refs, "label=value constant copied into a reference column");
  csweep->callback([&] {
    if (sweep_m_min >= 0) sweep.m_min = sweep_m_min;
    if (sweep_m_max >= 0) sweep.m_max = sweep_m_max;
    if (!sweep_out.empty()) sweep.out_path = sweep_out;
    for (const auto& ref : sweep_refs) {
      const auto eq = ref.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--reference", "expected label=value");
      try {
        sweep.references.emplace_back(ref.substr(0, eq), std::stod(ref.substr(eq + 1)));
      } catch (const std::exception&) {
        throw CLI::ValidationError("--reference", "bad value in '" + ref + "'");
      }
    }
    status = cmd_sweep(sweep, std::cout, std::cerr);
  });

  AvbArgs avb;
  std::string avb_out;
  std::string avb_tie = "lowest";
  std::uint64_t avb_max = 0;
  auto* cavb = app.add_subcommand("avb", "Greedy achievability curve as CSV M,log2M,fer");
  cavb->add_option("--kind", avb.kind, "deletion or insertion")
      ->transform(CLI::CheckedTransformer(kKinds, CLI::ignore_case));
  cavb->add_option("--m", avb.m, "Input block length")->required();
  cavb->add_option("--param", avb.param, "Deletion or insertion probability");
  cavb->add_option("--max-size", avb_max, "Largest code size (default: all inputs)");
  cavb->add_option("--tie-break", avb_tie, "lowest or random")->check(CLI::IsMember({"lowest", "random"}));
  cavb->add_option("--seed", avb.seed, "Seed for --tie-break random");
  cavb->add_option("--out", avb_out, "Output CSV path (stdout when omitted)");
  cavb->callback([&] {
    if (avb_max > 0) avb.max_size = avb_max;
    avb.tie_break = avb_tie == "random" ? indel::TieBreak::seeded_random : indel::TieBreak::lowest_index;
    if (!avb_out.empty()) avb.out_path = avb_out;
    status = cmd_avb(avb, std::cout, std::cerr);
  });

  VerifyArgs verify;
  auto* cverify = app.add_subcommand("verify", "Recompute the published rate bounds from the tables");
  cverify->add_option("--tables", verify.tables_dir, "Table directory");
  cverify->callback([&] { status = cmd_verify(verify, std::cout, std::cerr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kValidationFailure);
  }
  return status;
}
