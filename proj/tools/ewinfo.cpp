// ewinfo: command-line front end for the witness information experiment.
//
//   ewinfo run       --dims 2x2 --family optimal,pt,random --out results/
//   ewinfo summarize --in results/
//   ewinfo emit-hist --in results/ --hist-bins 100
//   ewinfo validate  [--quick]
//
// Exit codes: 0 success, 1 config error, 2 validation failure, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ewinfo/diagnostics.hpp"
#include "ewinfo/pipeline.hpp"
#include "ewinfo/report_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

ewinfo::BipartiteDims parse_dims(const std::string &s) {
  if (s == "2x2")
    return {2, 2};
  if (s == "2x3")
    return {2, 3};
  throw ewinfo::ConfigError("--dims must be 2x2 or 2x3, got '" + s + "'");
}

std::vector<ewinfo::WitnessFamily> parse_families(const std::string &s, const ewinfo::BipartiteDims &dims) {
  using ewinfo::WitnessFamily;
  if (s == "all") {
    if (dims == ewinfo::BipartiteDims{2, 2})
      return {WitnessFamily::Optimal, WitnessFamily::PartialTranspose, WitnessFamily::RandomObservable};
    return {WitnessFamily::PartialTranspose, WitnessFamily::RandomObservable};
  }
  std::vector<WitnessFamily> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(ewinfo::parse_family(item));
    } catch (const std::invalid_argument &e) {
      throw ewinfo::ConfigError(e.what());
    }
  }
  return out;
}

void print_summary(std::ostream &os, const std::vector<ewinfo::FamilySummary> &summary) {
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %8s  %-22s  %-22s\n", "family", "count", "I_WE/H(E) mean (std)",
                "I_SE/H(E) mean (std)");
  os << line;
  for (const auto &s : summary) {
    std::snprintf(line, sizeof line, "%-8s %8llu  %.3e (%.1e)    %.3e (%.1e)\n",
                  std::string(ewinfo::family_name(s.family)).c_str(),
                  static_cast<unsigned long long>(s.count), s.I_WE_norm_mean, s.I_WE_norm_std,
                  s.I_SE_norm_mean, s.I_SE_norm_std);
    os << line;
  }
}

struct RunOptions {
  std::string dims = "2x2";
  std::string family = "pt";
  std::uint64_t n_states = 10'000;
  std::uint64_t n_witnesses = 1'000;
  std::size_t bins = 100;
  std::uint64_t seed = 1;
  std::string gamma_grouping = "literal";
  double ppt_tol = ewinfo::kDefaultPptTolerance;
  std::size_t workers = 0;
  std::string out = "results";
  bool full_scale = false;
  std::vector<std::uint64_t> joint_hist;
  std::size_t hist_bins = 100;
};

int cmd_run(const RunOptions &o) {
  ewinfo::ExperimentConfig c;
  c.dims = parse_dims(o.dims);
  c.families = parse_families(o.family, c.dims);
  c.n_states = o.n_states;
  c.n_witnesses = o.n_witnesses;
  if (o.full_scale) {
    c.n_states = 100'000;
    c.n_witnesses = 100'000;
    std::cerr << "warning: full scale (1e5 states x 1e5 witnesses per family) takes hours\n";
  }
  c.n_bins = o.bins;
  c.master_seed = o.seed;
  try {
    c.gamma_grouping = ewinfo::parse_gamma_grouping(o.gamma_grouping);
  } catch (const std::invalid_argument &e) {
    throw ewinfo::ConfigError(e.what());
  }
  c.ppt_tol = o.ppt_tol;
  c.workers = o.workers;
  c.joint_hist_indices = o.joint_hist;
  ewinfo::validate_config(c);

  const ewinfo::ExperimentReport report = ewinfo::run_experiment(c);
  ewinfo::write_report(o.out, report, o.hist_bins);

  std::cout << "dims " << c.dims.label() << ", " << report.n_states << " states, p_separable "
            << report.p_separable << ", H(E) " << report.H_E << " bits\n";
  print_summary(std::cout, report.summary);
  std::cout << "wrote " << o.out << " in " << report.timings.total_seconds << " s\n";

  try {
    ewinfo::audit_report(report);
  } catch (const ewinfo::ValidationError &e) {
    std::cerr << "audit failed: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_summarize(const std::vector<std::string> &inputs, const std::string &json_out) {
  std::vector<ewinfo::WitnessRecord> records;
  for (const auto &dir : inputs) {
    auto r = ewinfo::read_records_csv(ewinfo::fs::path(dir) / "witness_records.csv");
    records.insert(records.end(), r.begin(), r.end());
  }
  if (records.empty())
    throw ewinfo::ConfigError("no witness records found");
  const auto summary = ewinfo::summarize(records);
  print_summary(std::cout, summary);
  if (!json_out.empty())
    ewinfo::write_json(json_out, ewinfo::summary_json(summary));
  return kExitOk;
}

int cmd_emit_hist(const std::string &in, std::string out, std::size_t hist_bins) {
  if (out.empty())
    out = in;
  const auto records = ewinfo::read_records_csv(ewinfo::fs::path(in) / "witness_records.csv");
  if (records.empty())
    throw ewinfo::ConfigError("no witness records found");
  ewinfo::ensure_directory(out);
  ewinfo::write_mi_distributions(out, records, hist_bins);
  return kExitOk;
}

int cmd_validate(std::uint64_t seed, bool quick, std::size_t workers) {
  ewinfo::DiagnosticsConfig cfg = quick ? ewinfo::DiagnosticsConfig::quick() : ewinfo::DiagnosticsConfig{};
  cfg.seed = seed;
  cfg.workers = workers;
  bool all = true;
  for (const auto &r : ewinfo::run_diagnostics(cfg)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  measured=" << ewinfo::format_double(r.measured)
              << "  (" << r.detail << ")\n";
    all = all && r.passed;
  }
  return all ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Mutual information between entanglement-witness values and PPT entanglement labels"};
  app.require_subcommand(1);

  RunOptions run;
  auto *run_cmd = app.add_subcommand("run", "Run the Monte Carlo experiment and write reports");
  run_cmd->add_option("--dims", run.dims, "Bipartite dimensions: 2x2 or 2x3");
  run_cmd->add_option("--family", run.family, "optimal, pt, random, a comma list, or all");
  run_cmd->add_option("--n-states", run.n_states, "Number of random states");
  run_cmd->add_option("--n-witnesses", run.n_witnesses, "Witnesses per family");
  run_cmd->add_option("--bins", run.bins, "Bins of the per-witness (w, e) histogram");
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--gamma-grouping", run.gamma_grouping, "literal or mean");
  run_cmd->add_option("--ppt-tol", run.ppt_tol, "PPT tolerance");
  run_cmd->add_option("--workers", run.workers, "Worker threads (0 = all cores)");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_flag("--full-scale", run.full_scale, "1e5 states and 1e5 witnesses per family");
  run_cmd->add_option("--joint-hist", run.joint_hist, "Global witness indices to dump joint histograms for");
  run_cmd->add_option("--hist-bins", run.hist_bins, "Bins of the MI distribution histograms");

  std::vector<std::string> sum_in;
  std::string sum_json;
  auto *sum_cmd = app.add_subcommand("summarize", "Per-family statistics from witness_records.csv");
  sum_cmd->add_option("--in", sum_in, "Run directories")->required();
  sum_cmd->add_option("--json", sum_json, "Also write the summary as JSON");

  std::string hist_in, hist_out;
  std::size_t hist_bins = 100;
  auto *hist_cmd = app.add_subcommand("emit-hist", "Write MI distribution histograms from records");
  hist_cmd->add_option("--in", hist_in, "Run directory")->required();
  hist_cmd->add_option("--out", hist_out, "Output directory (default: --in)");
  hist_cmd->add_option("--hist-bins", hist_bins, "Number of bins");

  std::uint64_t val_seed = 2024;
  bool val_quick = false;
  std::size_t val_workers = 0;
  auto *val_cmd = app.add_subcommand("validate", "Run the property suites");
  val_cmd->add_option("--seed", val_seed, "Seed");
  val_cmd->add_flag("--quick", val_quick, "Reduced sample sizes");
  val_cmd->add_option("--workers", val_workers, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd)
      return cmd_run(run);
    if (*sum_cmd)
      return cmd_summarize(sum_in, sum_json);
    if (*hist_cmd)
      return cmd_emit_hist(hist_in, hist_out, hist_bins);
    if (*val_cmd)
      return cmd_validate(val_seed, val_quick, val_workers);
  } catch (const ewinfo::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ewinfo::IoError &e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ewinfo::ValidationError &e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
