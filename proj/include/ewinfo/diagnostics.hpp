#pragma once

// Cross-module property suites behind `ewinfo validate`: Haar sanity, PPT
// oracle on Werner states, witness block positivity, DPI and separable-state
// audits, and fast-path expectation agreement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ewinfo/expectation.hpp"
#include "ewinfo/oracle.hpp"
#include "ewinfo/pipeline.hpp"
#include "ewinfo/report_io.hpp"
#include "ewinfo/sampling.hpp"
#include "ewinfo/witnesses.hpp"

namespace ewinfo {

struct PropertyResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  std::string detail;
};

struct DiagnosticsConfig {
  std::uint64_t seed = 2024;
  std::uint64_t mean_state_samples = 100'000;
  std::uint64_t unitarity_draws = 1'000;
  std::uint64_t ks_draws = 100'000;
  std::uint64_t werner_points = 1'000;
  std::uint64_t block_witnesses = 1'000;
  std::uint64_t block_product_states = 10'000;
  std::uint64_t audit_states = 10'000;
  std::uint64_t audit_witnesses = 200;
  std::size_t workers = 0;

  static DiagnosticsConfig quick() {
    DiagnosticsConfig c;
    c.mean_state_samples = 20'000;
    c.ks_draws = 20'000;
    c.block_witnesses = 50;
    c.block_product_states = 2'000;
    c.audit_states = 2'000;
    c.audit_witnesses = 40;
    return c;
  }
};

inline HermitianOperator bell_projector() {
  const double r = 1.0 / std::sqrt(2.0);
  return HermitianOperator(ComplexMatrix::outer({r, 0.0, 0.0, r}));
}

inline HermitianOperator werner_state(double p) {
  ComplexMatrix m = bell_projector().matrix() * cplx(p);
  m += ComplexMatrix::identity(4) * cplx((1.0 - p) / 4.0);
  return HermitianOperator(std::move(m));
}

/// Largest |entry| deviation of the sample mean of states from I/d.
inline double mean_state_deviation(const BipartiteDims &dims, std::uint64_t n, std::uint64_t seed) {
  const std::size_t d = dims.total();
  ComplexMatrix acc(d, d);
  for (std::uint64_t i = 0; i < n; ++i) {
    RngStream s = derive_stream(seed, stream_index(StreamDomain::Diagnostics, i));
    acc += sample_state(s, dims).matrix();
  }
  acc *= 1.0 / static_cast<double>(n);
  return max_abs_diff(acc, ComplexMatrix::identity(d) * cplx(1.0 / static_cast<double>(d)));
}

inline double ks_statistic_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = std::clamp(x[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

inline std::vector<PropertyResult> run_diagnostics(const DiagnosticsConfig &cfg) {
  std::vector<PropertyResult> out;
  const std::uint64_t seed = cfg.seed;

  {
    const double dev = mean_state_deviation({2, 2}, cfg.mean_state_samples, seed);
    out.push_back({"haar_mean_state_2x2", dev <= 5e-3, dev,
                   "max |mean(rho) - I/4| over " + std::to_string(cfg.mean_state_samples) +
                       " states, limit 5e-3"});
  }
  {
    double worst = 0.0;
    for (std::uint64_t i = 0; i < cfg.unitarity_draws; ++i) {
      RngStream s = derive_stream(seed + 1, i);
      const ComplexMatrix u = sample_cue_unitary(s, 16);
      worst = std::max(worst, max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(16)));
    }
    out.push_back({"cue_unitarity_n16", worst <= 1e-10, worst, "max |U^dagger U - I|, limit 1e-10"});
  }
  {
    std::vector<double> x(cfg.ks_draws);
    for (std::uint64_t i = 0; i < cfg.ks_draws; ++i) {
      RngStream s = derive_stream(seed + 2, i);
      x[i] = std::norm(sample_cue_unitary(s, 2)(0, 0));
    }
    const double ks = ks_statistic_uniform(x);
    const double crit = ks_critical_1pct(x.size());
    out.push_back({"cue_u00_uniform_ks", ks < crit, ks,
                   "KS distance of |U00|^2 from U[0,1], 1% critical " + format_double(crit)});
  }
  {
    double worst = 0.0;
    bool flips_ok = true;
    for (std::uint64_t k = 0; k < cfg.werner_points; ++k) {
      const double p = static_cast<double>(k) / static_cast<double>(cfg.werner_points - 1);
      const EntanglementLabel l = ppt_label(werner_state(p), {2, 2});
      worst = std::max(worst, std::abs(l.min_pt_eigenvalue - (1.0 - 3.0 * p) / 4.0));
      const double closed = (1.0 - 3.0 * p) / 4.0;
      if (std::abs(closed) > 1e-9 && l.entangled() != (closed < 0.0))
        flips_ok = false;
    }
    const double bell = ppt_label(bell_projector(), {2, 2}).min_pt_eigenvalue;
    const bool ok = flips_ok && worst <= 1e-10 && std::abs(bell + 0.5) <= 1e-10;
    out.push_back({"werner_sweep_ppt", ok, worst,
                   "label flips at p = 1/3 and |min PT eig - (1-3p)/4| <= 1e-10; Bell min PT eig " +
                       format_double(bell)});
  }
  for (auto fam : {WitnessFamily::Optimal, WitnessFamily::PartialTranspose}) {
    double worst = 1.0;
    for (std::uint64_t j = 0; j < cfg.block_witnesses; ++j) {
      RngStream ws = derive_stream(seed + 3, stream_index(family_domain(fam), j));
      const Witness w = sample_witness(fam, ws, {2, 2});
      RngStream ps = derive_stream(seed + 4, j);
      worst = std::min(worst, estimate_block_positivity(w, cfg.block_product_states, ps));
    }
    out.push_back({"block_positivity_" + std::string(family_name(fam)), worst >= -1e-9, worst,
                   "min over witnesses of sampled product-state minimum, limit -1e-9"});
  }
  {
    std::uint64_t failing = 0;
    for (std::uint64_t j = 0; j < cfg.block_witnesses; ++j) {
      RngStream ws = derive_stream(seed + 5, j);
      const Witness w = sample_random_observable(ws, {2, 2});
      RngStream ps = derive_stream(seed + 6, j);
      failing += estimate_block_positivity(w, cfg.block_product_states, ps) < -1e-9 ? 1 : 0;
    }
    const double frac = static_cast<double>(failing) / static_cast<double>(cfg.block_witnesses);
    out.push_back({"random_observable_block_positivity_failures", true, frac,
                   "diagnostic only: fraction of random observables negative on some product state"});
  }
  {
    bool ok = true;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      RngStream s = derive_stream(seed + 7, i);
      ok = ok && !ppt_label(sample_product_state(s, {2, 3})).entangled();
    }
    out.push_back({"product_states_separable", ok, ok ? 1.0 : 0.0, "1000 random 2x3 product states"});
  }
  for (BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}}) {
    std::vector<HermitianOperator> states, witnesses;
    for (std::uint64_t i = 0; i < 64; ++i) {
      RngStream s = derive_stream(seed + 8, i);
      states.push_back(sample_state(s, dims).op());
      witnesses.push_back(sample_random_observable(s, dims).op);
    }
    const ExpectationMatrix fast = compute_expectation_matrix(std::span<const HermitianOperator>(states),
                                                              std::span<const HermitianOperator>(witnesses));
    double worst = 0.0;
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j)
        worst = std::max(worst, std::abs(fast(i, j) - (witnesses[j].matrix() * states[i].matrix()).trace().real()));
    out.push_back({"fast_path_equivalence_" + dims.label(), worst <= 1e-12, worst,
                   "max |fast - Tr(W rho)| on 64x64, limit 1e-12"});
  }
  for (BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}}) {
    ExperimentConfig c;
    c.dims = dims;
    c.families = dims == BipartiteDims{2, 2}
                     ? std::vector{WitnessFamily::Optimal, WitnessFamily::PartialTranspose,
                                   WitnessFamily::RandomObservable}
                     : std::vector{WitnessFamily::PartialTranspose, WitnessFamily::RandomObservable};
    c.n_states = cfg.audit_states;
    c.n_witnesses = cfg.audit_witnesses;
    c.master_seed = seed + 9;
    c.workers = cfg.workers;
    const ExperimentReport r = run_experiment(c);
    out.push_back({"dpi_audit_" + dims.label(), r.dpi_violations == 0,
                   static_cast<double>(r.dpi_violations), "records with I_SE > I_WE + 1e-12"});
    std::uint64_t optimal_violations = 0, pt_violations = 0;
    for (const auto &s : r.summary) {
      if (s.family == WitnessFamily::Optimal)
        optimal_violations = s.separable_violations;
      if (s.family == WitnessFamily::PartialTranspose)
        pt_violations = s.separable_violations;
    }
    out.push_back({"separable_audit_" + dims.label(), optimal_violations == 0 && pt_violations == 0,
                   static_cast<double>(optimal_violations + pt_violations),
                   "separable states with w < -1e-9 under optimal or PT witnesses"});
  }
  return out;
}

} // namespace ewinfo
