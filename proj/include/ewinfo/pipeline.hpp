#pragma once

// The Monte Carlo campaign: one shared, PPT-labelled state sample; per family,
// n_witnesses observables; for each observable the (w, e) joint histogram and
// the mutual informations I(W:E) and I(S:E), normalized by the ensemble H(E).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewinfo/expectation.hpp"
#include "ewinfo/infotheory.hpp"
#include "ewinfo/oracle.hpp"
#include "ewinfo/parallel.hpp"
#include "ewinfo/rng.hpp"
#include "ewinfo/sampling.hpp"
#include "ewinfo/witnesses.hpp"

namespace ewinfo {

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kSeparableAuditTolerance = 1e-9;

struct ExperimentConfig {
  BipartiteDims dims{2, 2};
  std::vector<WitnessFamily> families{WitnessFamily::PartialTranspose};
  std::uint64_t n_states = 10'000;
  std::uint64_t n_witnesses = 1'000;
  std::size_t n_bins = 100;
  std::uint64_t master_seed = 1;
  double ppt_tol = kDefaultPptTolerance;
  GammaGrouping gamma_grouping = GammaGrouping::Literal;
  std::size_t workers = 0; // 0 = hardware concurrency
  // Global witness indices whose joint histograms are kept in the report.
  // Empty means the first witness of every family.
  std::vector<std::uint64_t> joint_hist_indices;
};

/// Families in canonical order without duplicates.
inline std::vector<WitnessFamily> canonical_families(std::vector<WitnessFamily> fams) {
  std::sort(fams.begin(), fams.end());
  fams.erase(std::unique(fams.begin(), fams.end()), fams.end());
  return fams;
}

inline void validate_config(const ExperimentConfig &c) {
  if (!c.dims.ppt_exact() || c.dims.dA != 2)
    throw ConfigError("dims must be 2x2 or 2x3, got " + c.dims.label());
  if (c.families.empty())
    throw ConfigError("at least one witness family is required");
  for (auto f : c.families)
    if (f == WitnessFamily::Optimal && !(c.dims == BipartiteDims{2, 2}))
      throw ConfigError("the optimal family is defined only for 2x2");
  if (c.n_states == 0 || c.n_witnesses == 0)
    throw ConfigError("n_states and n_witnesses must be positive");
  if (c.n_bins < 2)
    throw ConfigError("bins must be at least 2");
  if (!(c.ppt_tol >= 0.0))
    throw ConfigError("ppt tolerance must be non-negative");
}

struct StateSample {
  BipartiteDims dims;
  CoordinateBlock coords;
  std::vector<std::uint8_t> codes; // 0 entangled, 1 separable
  std::vector<double> min_pt_eigenvalues;
  std::uint64_t n_entangled = 0;

  std::size_t size() const { return codes.size(); }
  double p_separable() const {
    return 1.0 - static_cast<double>(n_entangled) / static_cast<double>(size());
  }
};

inline StateSample sample_labelled_states(const BipartiteDims &dims, std::uint64_t n_states,
                                          std::uint64_t master_seed, double ppt_tol,
                                          std::size_t workers) {
  StateSample s{dims, CoordinateBlock(dims.total(), n_states), std::vector<std::uint8_t>(n_states),
                std::vector<double>(n_states), 0};
  parallel_chunks(n_states, resolve_workers(workers), 1024, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      RngStream stream = derive_stream(master_seed, stream_index(StreamDomain::State, i));
      const DensityMatrix rho = sample_state(stream, dims);
      const EntanglementLabel label = ppt_label(rho, ppt_tol);
      s.coords.set(i, rho.op());
      s.codes[i] = label.code();
      s.min_pt_eigenvalues[i] = label.min_pt_eigenvalue;
    }
  });
  s.n_entangled = static_cast<std::uint64_t>(std::count(s.codes.begin(), s.codes.end(), 0));
  return s;
}

struct WitnessRecord {
  std::uint64_t witness_index = 0;
  WitnessFamily family = WitnessFamily::PartialTranspose;
  double I_WE = 0.0;
  double I_SE = 0.0;
  double I_WE_norm = 0.0;
  double I_SE_norm = 0.0;
  double min_eig = 0.0;
  double frac_detected = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;
  // Separable states with w < -1e-9; in-memory audit only.
  std::uint64_t separable_violations = 0;
  // Parameter triples drawn for an optimal witness (1 for other families).
  std::uint64_t draws = 1;
};

struct FamilySummary {
  WitnessFamily family = WitnessFamily::PartialTranspose;
  std::uint64_t count = 0;
  double I_WE_norm_mean = 0.0;
  double I_WE_norm_std = 0.0;
  double I_SE_norm_mean = 0.0;
  double I_SE_norm_std = 0.0;
  double I_WE_mean = 0.0;
  double I_SE_mean = 0.0;
  double frac_negative_min_eig = 0.0;
  std::uint64_t separable_violations = 0;
  std::uint64_t records_with_violations = 0;
  std::optional<double> acceptance_rate; // optimal family only
};

struct Timings {
  double states_seconds = 0.0;
  double witnesses_seconds = 0.0;
  double total_seconds = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string rng_identifier{kRngIdentifier};
  std::uint64_t n_states = 0;
  std::uint64_t n_entangled = 0;
  double p_separable = 0.0;
  double H_E = 0.0;
  double mi_bias_bits = 0.0;
  std::vector<WitnessRecord> records;
  std::vector<FamilySummary> summary;
  std::map<std::uint64_t, JointHistogram> joint_histograms;
  std::uint64_t dpi_violations = 0;
  Timings timings;
};

namespace detail {
inline double mean_of(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v)
    s += x;
  return s / static_cast<double>(v.size());
}
inline double pop_std_of(const std::vector<double> &v, double mean) {
  double s = 0.0;
  for (double x : v)
    s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}
} // namespace detail

/// Per-family mean and population standard deviation of the normalized MIs.
inline std::vector<FamilySummary> summarize(const std::vector<WitnessRecord> &records) {
  if (records.empty())
    throw std::invalid_argument("summarize: no records");
  std::vector<FamilySummary> out;
  for (auto fam : {WitnessFamily::Optimal, WitnessFamily::PartialTranspose,
                   WitnessFamily::RandomObservable}) {
    std::vector<double> iwe, ise, rwe, rse;
    std::uint64_t negative = 0, violations = 0, violating = 0, draws = 0;
    for (const auto &r : records) {
      if (r.family != fam)
        continue;
      iwe.push_back(r.I_WE_norm);
      ise.push_back(r.I_SE_norm);
      rwe.push_back(r.I_WE);
      rse.push_back(r.I_SE);
      negative += r.min_eig < 0.0 ? 1 : 0;
      violations += r.separable_violations;
      violating += r.separable_violations > 0 ? 1 : 0;
      draws += r.draws;
    }
    if (iwe.empty())
      continue;
    FamilySummary s;
    s.family = fam;
    s.count = iwe.size();
    s.I_WE_norm_mean = detail::mean_of(iwe);
    s.I_WE_norm_std = detail::pop_std_of(iwe, s.I_WE_norm_mean);
    s.I_SE_norm_mean = detail::mean_of(ise);
    s.I_SE_norm_std = detail::pop_std_of(ise, s.I_SE_norm_mean);
    s.I_WE_mean = detail::mean_of(rwe);
    s.I_SE_mean = detail::mean_of(rse);
    s.frac_negative_min_eig = static_cast<double>(negative) / static_cast<double>(s.count);
    s.separable_violations = violations;
    s.records_with_violations = violating;
    if (fam == WitnessFamily::Optimal)
      s.acceptance_rate = static_cast<double>(s.count) / static_cast<double>(draws);
    out.push_back(s);
  }
  return out;
}

/// Evaluates one witness against the labelled sample. `w` is scratch space
/// of size n_states and holds Tr(W rho_i) on return.
inline WitnessRecord evaluate_witness(const Witness &witness, const StateSample &states,
                                      std::size_t n_bins, double H_E, std::vector<double> &w,
                                      JointHistogram *keep = nullptr) {
  w.resize(states.size());
  const auto coeffs = hermitian_coordinates(witness.op);
  expectation_column(states.coords, coeffs, w);

  const JointHistogram h = build_joint_histogram(w, states.codes, n_bins);
  WitnessRecord r;
  r.family = witness.family;
  r.I_WE = mutual_information(histogram_to_joint(h));
  r.I_SE = mutual_information(coarse_grain_sign(h));
  r.I_WE_norm = H_E > 0.0 ? r.I_WE / H_E : 0.0;
  r.I_SE_norm = H_E > 0.0 ? r.I_SE / H_E : 0.0;
  r.min_eig = witness.min_eigenvalue;
  r.draws = witness.params ? witness.params->draws : 1;

  std::uint64_t detected = 0, entangled = 0;
  double lo = w.front(), hi = w.front();
  for (std::size_t i = 0; i < w.size(); ++i) {
    lo = std::min(lo, w[i]);
    hi = std::max(hi, w[i]);
    if (states.codes[i] == 0) {
      ++entangled;
      detected += w[i] < 0.0 ? 1 : 0;
    } else if (w[i] < -kSeparableAuditTolerance) {
      ++r.separable_violations;
    }
  }
  r.frac_detected = entangled > 0 ? static_cast<double>(detected) / static_cast<double>(entangled) : 0.0;
  r.w_min = lo;
  r.w_max = hi;
  if (keep)
    *keep = h;
  return r;
}

inline ExperimentReport run_experiment(ExperimentConfig config) {
  validate_config(config);
  config.families = canonical_families(config.families);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t workers = resolve_workers(config.workers);

  ExperimentReport report;
  report.config = config;

  const StateSample states =
      sample_labelled_states(config.dims, config.n_states, config.master_seed, config.ppt_tol, workers);
  const auto t1 = std::chrono::steady_clock::now();

  report.n_states = states.size();
  report.n_entangled = states.n_entangled;
  report.p_separable = states.p_separable();
  const double ps[2] = {report.p_separable, 1.0 - report.p_separable};
  report.H_E = shannon_entropy(ps);
  report.mi_bias_bits = plugin_mi_bias_bits(config.n_bins, 2, config.n_states);

  const std::uint64_t per_family = config.n_witnesses;
  const std::uint64_t total = per_family * config.families.size();
  std::set<std::uint64_t> keep;
  if (config.joint_hist_indices.empty()) {
    for (std::size_t f = 0; f < config.families.size(); ++f)
      keep.insert(f * per_family);
  } else {
    keep.insert(config.joint_hist_indices.begin(), config.joint_hist_indices.end());
  }

  report.records.resize(total);
  std::vector<std::optional<JointHistogram>> kept(total);
  parallel_chunks(total, workers, 8, [&](std::size_t b, std::size_t e) {
    std::vector<double> w(states.size());
    for (std::size_t g = b; g < e; ++g) {
      const WitnessFamily fam = config.families[g / per_family];
      const std::uint64_t ordinal = g % per_family;
      RngStream stream =
          derive_stream(config.master_seed, stream_index(family_domain(fam), ordinal));
      const Witness witness = sample_witness(fam, stream, config.dims, config.gamma_grouping);
      JointHistogram h;
      const bool want = keep.count(g) > 0;
      WitnessRecord r = evaluate_witness(witness, states, config.n_bins, report.H_E, w,
                                         want ? &h : nullptr);
      r.witness_index = g;
      report.records[g] = r;
      if (want)
        kept[g] = std::move(h);
    }
  });
  for (std::uint64_t g = 0; g < total; ++g)
    if (kept[g])
      report.joint_histograms.emplace(g, std::move(*kept[g]));

  for (const auto &r : report.records)
    if (r.I_SE > r.I_WE + 1e-12)
      ++report.dpi_violations;
  report.summary = summarize(report.records);

  const auto t2 = std::chrono::steady_clock::now();
  report.timings.states_seconds = std::chrono::duration<double>(t1 - t0).count();
  report.timings.witnesses_seconds = std::chrono::duration<double>(t2 - t1).count();
  report.timings.total_seconds = std::chrono::duration<double>(t2 - t0).count();
  return report;
}

/// Hard audit: optimal witnesses must be non-negative on every state the PPT
/// oracle calls separable. Partial-transpose violations are only recorded.
inline void audit_report(const ExperimentReport &report) {
  if (report.dpi_violations > 0)
    throw ValidationError("data-processing inequality violated on " +
                          std::to_string(report.dpi_violations) + " records");
  for (const auto &s : report.summary)
    if (s.family == WitnessFamily::Optimal && s.separable_violations > 0)
      throw ValidationError("optimal witnesses negative on " +
                            std::to_string(s.separable_violations) + " separable (state, witness) pairs");
}

struct MiDistribution {
  WitnessFamily family;
  std::string quantity; // "I_WE_norm" or "I_SE_norm"
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
};

/// Histograms of the normalized MI values over witnesses, per family and
/// quantity, with uniform bins over the observed range.
inline std::vector<MiDistribution> emit_mi_distribution(const std::vector<WitnessRecord> &records,
                                                        std::size_t n_hist_bins = 100) {
  if (n_hist_bins == 0)
    throw std::invalid_argument("emit_mi_distribution: need at least one bin");
  std::vector<MiDistribution> out;
  for (auto fam : {WitnessFamily::Optimal, WitnessFamily::PartialTranspose,
                   WitnessFamily::RandomObservable})
    for (const char *quantity : {"I_WE_norm", "I_SE_norm"}) {
      std::vector<double> v;
      for (const auto &r : records)
        if (r.family == fam)
          v.push_back(std::string_view(quantity) == "I_WE_norm" ? r.I_WE_norm : r.I_SE_norm);
      if (v.empty())
        continue;
      const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
      const double lo = *mn;
      double hi = *mx;
      if (hi <= lo)
        hi = lo + std::max(std::abs(lo), 1e-12);
      const double width = (hi - lo) / static_cast<double>(n_hist_bins);
      MiDistribution d{fam, quantity, std::vector<double>(n_hist_bins + 1),
                       std::vector<std::uint64_t>(n_hist_bins, 0)};
      for (std::size_t b = 0; b <= n_hist_bins; ++b)
        d.edges[b] = lo + static_cast<double>(b) * width;
      d.edges.back() = hi;
      for (double x : v) {
        auto it = std::upper_bound(d.edges.begin(), d.edges.end(), x);
        std::size_t b = static_cast<std::size_t>(it - d.edges.begin());
        b = std::min(b == 0 ? 0 : b - 1, n_hist_bins - 1);
        ++d.counts[b];
      }
      out.push_back(std::move(d));
    }
  return out;
}

} // namespace ewinfo
