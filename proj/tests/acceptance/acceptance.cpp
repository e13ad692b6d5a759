// Acceptance suite. `--prepare DIR` produces the desk-scale runs; each
// criterion then prints one PASS or FAIL line. Criteria that need run data
// read them from DIR.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ewinfo/diagnostics.hpp"
#include "ewinfo/pipeline.hpp"
#include "ewinfo/report_io.hpp"

using namespace ewinfo;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

constexpr std::uint64_t kDeskStates = 100'000;
constexpr std::uint64_t kDeskWitnesses = 10'000;
constexpr std::uint64_t kSeed = 20'240'601;

struct DeskRun {
  std::string name;
  BipartiteDims dims;
  std::size_t workers;
};

const std::vector<DeskRun> &desk_runs() {
  static const std::vector<DeskRun> runs{
      {"desk_2x2_w1", {2, 2}, 1}, {"desk_2x2_w8", {2, 2}, 8}, {"desk_2x3_w1", {2, 3}, 1}, {"desk_2x3_w8", {2, 3}, 8}};
  return runs;
}

ExperimentConfig desk_config(const DeskRun &r) {
  ExperimentConfig c;
  c.dims = r.dims;
  c.families = r.dims == BipartiteDims{2, 2}
                   ? std::vector{WitnessFamily::Optimal, WitnessFamily::PartialTranspose,
                                 WitnessFamily::RandomObservable}
                   : std::vector{WitnessFamily::PartialTranspose, WitnessFamily::RandomObservable};
  c.n_states = kDeskStates;
  c.n_witnesses = kDeskWitnesses;
  c.n_bins = 100;
  c.master_seed = kSeed;
  c.workers = r.workers;
  return c;
}

void prepare(const fs::path &dir) {
  for (const auto &run : desk_runs()) {
    std::cout << "running " << run.name << " (" << kDeskWitnesses << " witnesses per family x " << kDeskStates
              << " states)" << std::endl;
    const ExperimentReport r = run_experiment(desk_config(run));
    write_report(dir / run.name, r);
    std::cout << "  done in " << format_double(std::round(r.timings.total_seconds * 10) / 10) << " s" << std::endl;
  }
}

struct Outcome {
  bool passed = false;
  std::vector<std::string> lines;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class Data {
public:
  explicit Data(fs::path dir) : dir_(std::move(dir)) {}

  const Json &report(const std::string &run) {
    auto it = reports_.find(run);
    if (it == reports_.end()) {
      std::ifstream in(dir_ / run / "report.json");
      if (!in)
        throw IoError("missing " + (dir_ / run / "report.json").string() + "; run with --prepare first");
      it = reports_.emplace(run, Json::parse(in)).first;
    }
    return it->second;
  }

  Json timings(const std::string &run) {
    std::ifstream in(dir_ / run / "timings.json");
    if (!in)
      throw IoError("missing timings for " + run);
    return Json::parse(in);
  }

  std::vector<WitnessRecord> records(const std::string &run) {
    return read_records_csv(dir_ / run / "witness_records.csv");
  }

  const Json &family(const std::string &run, const std::string &fam) {
    for (const auto &s : report(run)["summary"])
      if (s["family"] == fam)
        return s;
    throw IoError(run + ": no summary for family " + fam);
  }

  const fs::path &dir() const { return dir_; }

private:
  fs::path dir_;
  std::map<std::string, Json> reports_;
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome entropy(Data &d, const std::string &run, double target, double tol, double max_seconds) {
  const Json &r = d.report(run);
  const double h = r["H_E"];
  const double secs = d.timings(run)["states_seconds"];
  Outcome o;
  o.passed = std::abs(h - target) <= tol && r["n_states"] == kDeskStates && secs <= max_seconds;
  o.lines.push_back("H_E = " + fmt(h) + " (target " + fmt(target) + " +/- " + fmt(tol) + "), p_sep = " +
                    fmt(r["p_separable"]) + ", n_states = " + r["n_states"].dump() + ", state sampling " +
                    fmt(secs) + " s (limit " + fmt(max_seconds) + " s)");
  return o;
}

Outcome table1(Data &d) {
  const std::string run = "desk_2x2_w1";
  const double opt = d.family(run, "optimal")["I_WE_norm"]["mean"];
  const double pt = d.family(run, "pt")["I_WE_norm"]["mean"];
  const double rnd = d.family(run, "random")["I_WE_norm"]["mean"];
  const double secs = d.timings(run)["total_seconds"];
  struct Part {
    std::string name;
    double value, lo, hi;
  };
  Outcome o;
  o.passed = true;
  for (const Part &p : {Part{"optimal", opt, 0.015, 0.025}, Part{"pt", pt, 0.005, 0.02}, Part{"random", rnd, 0.004, 0.012}}) {
    const bool ok = p.value >= p.lo && p.value <= p.hi;
    o.passed = o.passed && ok;
    o.lines.push_back(std::string(ok ? "ok  " : "out ") + p.name + " mean I_WE_norm = " + fmt(p.value) +
                      " (window [" + fmt(p.lo) + ", " + fmt(p.hi) + "], std " +
                      fmt(d.family(run, p.name)["I_WE_norm"]["std"]) + ")");
  }
  const bool ordered = opt > pt && pt > rnd;
  o.passed = o.passed && ordered && secs <= 1800.0;
  o.lines.push_back(std::string(ordered ? "ok  " : "out ") + "ordering optimal > pt > random");
  o.lines.push_back("run time " + fmt(secs) + " s (limit 1800 s)");
  return o;
}

Outcome sign_gap(Data &d) {
  Outcome o;
  o.passed = true;
  for (const std::string run : {"desk_2x2_w1", "desk_2x3_w1"})
    for (const auto &s : d.report(run)["summary"]) {
      const double we = s["I_WE_norm"]["mean"], se = s["I_SE_norm"]["mean"];
      const bool ok = we >= 3.0 * se;
      o.passed = o.passed && ok;
      o.lines.push_back(std::string(ok ? "ok  " : "out ") + run + " " + s["family"].get<std::string>() +
                        ": I_WE_norm " + fmt(we) + " vs 3 x I_SE_norm " + fmt(3.0 * se) + " (ratio " +
                        fmt(se > 0 ? we / se : INFINITY) + ")");
    }
  return o;
}

Outcome table2(Data &d) {
  const std::string run = "desk_2x3_w1";
  Outcome o;
  o.passed = true;
  for (const auto &[fam, ref] : std::vector<std::pair<std::string, double>>{{"pt", 0.007}, {"random", 0.006}}) {
    const double v = d.family(run, fam)["I_WE_norm"]["mean"];
    const bool ok = v >= ref / 2.0 && v <= ref * 2.0;
    o.passed = o.passed && ok;
    o.lines.push_back(std::string(ok ? "ok  " : "out ") + fam + " mean I_WE_norm = " + fmt(v) + " (within x2 of " +
                      fmt(ref) + ": [" + fmt(ref / 2) + ", " + fmt(ref * 2) + "])");
  }
  return o;
}

Outcome dpi(Data &d) {
  Outcome o;
  o.passed = true;
  for (const auto &run : desk_runs()) {
    const auto rs = d.records(run.name);
    std::uint64_t bad = 0;
    double worst = -INFINITY;
    for (const auto &r : rs) {
      bad += r.I_SE > r.I_WE + 1e-12 ? 1 : 0;
      worst = std::max(worst, r.I_SE - r.I_WE);
    }
    const std::uint64_t reported = d.report(run.name)["audit"]["dpi_violations"];
    o.passed = o.passed && bad == 0 && reported == 0 && !rs.empty();
    o.lines.push_back(run.name + ": " + std::to_string(bad) + " of " + std::to_string(rs.size()) +
                      " records with I_SE > I_WE + 1e-12; max(I_SE - I_WE) = " + fmt(worst));
  }
  return o;
}

Outcome ppt_oracle() {
  double worst = 0.0;
  bool flips = true;
  constexpr int n = 1000;
  for (int k = 0; k < n; ++k) {
    const double p = static_cast<double>(k) / (n - 1);
    const auto l = ppt_label(werner_state(p), {2, 2});
    const double closed = (1.0 - 3.0 * p) / 4.0;
    worst = std::max(worst, std::abs(l.min_pt_eigenvalue - closed));
    if (std::abs(closed) > 1e-9 && l.entangled() != (p > 1.0 / 3.0))
      flips = false;
  }
  const double bell = ppt_label(bell_projector(), {2, 2}).min_pt_eigenvalue;
  Outcome o;
  o.passed = flips && worst <= 1e-10 && std::abs(bell + 0.5) <= 1e-10;
  o.lines.push_back("Werner sweep of " + std::to_string(n) + " points: max |min PT eig - (1-3p)/4| = " + fmt(worst) +
                    ", labels flip at p = 1/3: " + (flips ? "yes" : "no"));
  o.lines.push_back("Bell state min PT eig = " + format_double(bell) + " (|+0.5| = " + fmt(std::abs(bell + 0.5)) + ")");
  return o;
}

Outcome soundness(Data &d) {
  Outcome o;
  o.passed = true;
  for (auto fam : {WitnessFamily::Optimal, WitnessFamily::PartialTranspose}) {
    double worst = INFINITY;
    for (std::uint64_t j = 0; j < 1000; ++j) {
      RngStream ws = derive_stream(kSeed + 1, stream_index(family_domain(fam), j));
      const Witness w = sample_witness(fam, ws, {2, 2});
      RngStream ps = derive_stream(kSeed + 2, stream_index(family_domain(fam), j));
      worst = std::min(worst, estimate_block_positivity(w, 10'000, ps));
    }
    const bool ok = worst >= -1e-9;
    o.passed = o.passed && ok;
    o.lines.push_back(std::string(ok ? "ok  " : "out ") + std::string(family_name(fam)) +
                      ": min over 1000 witnesses x 10000 product states = " + fmt(worst) + " (limit -1e-9)");
  }
  const std::uint64_t v = d.family("desk_2x2_w1", "optimal")["separable_violations"];
  o.passed = o.passed && v == 0;
  o.lines.push_back(std::string(v == 0 ? "ok  " : "out ") +
                    "full 2x2 run: separable states with w < -1e-9 under optimal witnesses = " + std::to_string(v));
  return o;
}

Outcome haar() {
  const double dev = mean_state_deviation({2, 2}, 100'000, kSeed + 3);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    RngStream s = derive_stream(kSeed + 4, i);
    const ComplexMatrix u = sample_cue_unitary(s, 16);
    worst = std::max(worst, max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(16)));
  }
  std::vector<double> x(100'000);
  for (std::uint64_t i = 0; i < x.size(); ++i) {
    RngStream s = derive_stream(kSeed + 5, i);
    x[i] = std::norm(sample_cue_unitary(s, 2)(0, 0));
  }
  const double ks = ks_statistic_uniform(x), crit = ks_critical_1pct(x.size());
  Outcome o;
  o.passed = dev <= 5e-3 && worst <= 1e-10 && ks < crit;
  o.lines.push_back("mean of 1e5 2x2 states: max |mean - I/4| = " + fmt(dev) + " (limit 5e-3)");
  o.lines.push_back("CUE n=16, 1000 draws: max |U^dagger U - I| = " + fmt(worst) + " (limit 1e-10)");
  o.lines.push_back("|U00|^2 at n=2, 1e5 draws: KS = " + fmt(ks) + " (1% critical " + fmt(crit) + ")");
  return o;
}

Outcome fast_path() {
  Outcome o;
  o.passed = true;
  for (BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}}) {
    std::vector<DensityMatrix> states;
    std::vector<Witness> ws;
    for (std::uint64_t i = 0; i < 64; ++i) {
      RngStream s = derive_stream(kSeed + 6, i);
      states.push_back(sample_state(s, dims));
      const auto fam = i % 2 ? WitnessFamily::PartialTranspose : WitnessFamily::RandomObservable;
      ws.push_back(sample_witness(fam, s, dims));
    }
    const auto fast = compute_expectation_matrix(std::span<const DensityMatrix>(states), std::span<const Witness>(ws));
    double worst = 0.0;
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j) {
        cplx naive = 0.0;
        const auto &w = ws[j].op.matrix();
        const auto &r = states[i].matrix();
        for (std::size_t a = 0; a < w.rows(); ++a)
          for (std::size_t b = 0; b < w.cols(); ++b)
            naive += w(a, b) * r(b, a);
        worst = std::max(worst, std::abs(fast(i, j) - naive.real()));
      }
    o.passed = o.passed && worst <= 1e-12;
    o.lines.push_back(dims.label() + ": max |fast - Tr(W rho)| over 64 x 64 = " + fmt(worst) + " (limit 1e-12)");
  }
  return o;
}

Outcome determinism(Data &d) {
  Outcome o;
  o.passed = true;
  for (const std::string dims : {"2x2", "2x3"}) {
    const fs::path a = d.dir() / ("desk_" + dims + "_w1"), b = d.dir() / ("desk_" + dims + "_w8");
    std::size_t same = 0, differ = 0;
    for (const auto &entry : fs::directory_iterator(a)) {
      const auto name = entry.path().filename().string();
      const bool compared = name == "report.json" || entry.path().extension() == ".csv";
      if (!compared)
        continue;
      if (fs::exists(b / name) && slurp(entry.path()) == slurp(b / name))
        ++same;
      else
        ++differ;
    }
    const bool ok = differ == 0 && same >= 3 && fs::exists(a / "report.json");
    o.passed = o.passed && ok;
    o.lines.push_back(std::string(ok ? "ok  " : "out ") + dims + ": workers 1 vs 8, " + std::to_string(same) +
                      " identical files, " + std::to_string(differ) + " differing");
  }
  return o;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"ewinfo acceptance suite"};
  std::string data_dir = "acceptance_data";
  std::string prepare_dir;
  std::vector<std::string> only;
  app.add_option("--data", data_dir, "Directory holding the desk-scale runs");
  app.add_option("--prepare", prepare_dir, "Produce the desk-scale runs into this directory and exit");
  app.add_option("--criterion", only, "Run only the named criteria");
  CLI11_PARSE(app, argc, argv);

  if (!prepare_dir.empty()) {
    prepare(prepare_dir);
    return 0;
  }

  Data data(data_dir);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"entropy_2x2", [&] { return entropy(data, "desk_2x2_w1", 0.80, 0.02, 120.0); }},
      {"entropy_2x3", [&] { return entropy(data, "desk_2x3_w1", 0.17, 0.03, 180.0); }},
      {"table1_scale", [&] { return table1(data); }},
      {"sign_gap", [&] { return sign_gap(data); }},
      {"table2_scale", [&] { return table2(data); }},
      {"dpi_exactness", [&] { return dpi(data); }},
      {"ppt_oracle", ppt_oracle},
      {"witness_soundness", [&] { return soundness(data); }},
      {"haar_sanity", haar},
      {"fast_path_equivalence", fast_path},
      {"determinism", [&] { return determinism(data); }},
  };

  for (const auto &name : only) {
    bool known = false;
    for (const auto &c : criteria)
      known = known || c.first == name;
    if (!known) {
      std::cerr << "unknown criterion " << name << '\n';
      return 2;
    }
  }

  int failures = 0;
  for (const auto &[name, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end())
      continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception &e) {
      o.passed = false;
      o.lines = {std::string("error: ") + e.what()};
    }
    std::cout << (o.passed ? "PASS " : "FAIL ") << name << '\n';
    for (const auto &l : o.lines)
      std::cout << "    " << l << '\n';
    failures += o.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
