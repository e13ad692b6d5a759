#pragma once

// File formats written by the pipeline: witness_records.csv, report.json,
// timings.json, joint_hist_<index>.csv and mi_hist_<family>_<quantity>.csv.

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ewinfo/pipeline.hpp"

namespace ewinfo {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace fs = std::filesystem;

/// Shortest representation that round-trips.
inline std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

inline constexpr const char *kRecordsHeader =
    "witness_index,family,I_WE,I_SE,I_WE_norm,I_SE_norm,min_eig,frac_detected,w_min,w_max";

namespace detail {
inline std::ofstream open_for_write(const fs::path &p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + p.string() + " for writing");
  return out;
}
inline void finish(std::ofstream &out, const fs::path &p) {
  out.flush();
  if (!out)
    throw IoError("write to " + p.string() + " failed");
}
inline double parse_double(const std::string &s, const std::string &where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("bad number '" + s + "' in " + where);
  return v;
}
} // namespace detail

inline void write_records_csv(const fs::path &p, const std::vector<WitnessRecord> &records) {
  auto out = detail::open_for_write(p);
  out << kRecordsHeader << '\n';
  for (const auto &r : records)
    out << r.witness_index << ',' << family_name(r.family) << ',' << format_double(r.I_WE) << ','
        << format_double(r.I_SE) << ',' << format_double(r.I_WE_norm) << ','
        << format_double(r.I_SE_norm) << ',' << format_double(r.min_eig) << ','
        << format_double(r.frac_detected) << ',' << format_double(r.w_min) << ','
        << format_double(r.w_max) << '\n';
  detail::finish(out, p);
}

inline std::vector<WitnessRecord> read_records_csv(const fs::path &p) {
  std::ifstream in(p);
  if (!in)
    throw IoError("cannot open " + p.string());
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader)
    throw IoError(p.string() + ": unexpected header");
  std::vector<WitnessRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    const std::string where = p.string() + ":" + std::to_string(lineno);
    if (cells.size() != 10)
      throw IoError(where + ": expected 10 columns");
    WitnessRecord r;
    r.witness_index = static_cast<std::uint64_t>(detail::parse_double(cells[0], where));
    try {
      r.family = parse_family(cells[1]);
    } catch (const std::invalid_argument &e) {
      throw IoError(where + ": " + e.what());
    }
    double *fields[] = {&r.I_WE, &r.I_SE, &r.I_WE_norm, &r.I_SE_norm,
                        &r.min_eig, &r.frac_detected, &r.w_min, &r.w_max};
    for (std::size_t k = 0; k < 8; ++k)
      *fields[k] = detail::parse_double(cells[k + 2], where);
    records.push_back(r);
  }
  return records;
}

inline nlohmann::ordered_json summary_json(const std::vector<FamilySummary> &summary) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto &s : summary) {
    nlohmann::ordered_json j;
    j["family"] = family_name(s.family);
    j["count"] = s.count;
    j["I_WE_norm"] = {{"mean", s.I_WE_norm_mean}, {"std", s.I_WE_norm_std}};
    j["I_SE_norm"] = {{"mean", s.I_SE_norm_mean}, {"std", s.I_SE_norm_std}};
    j["I_WE_mean_bits"] = s.I_WE_mean;
    j["I_SE_mean_bits"] = s.I_SE_mean;
    j["frac_negative_min_eig"] = s.frac_negative_min_eig;
    j["separable_violations"] = s.separable_violations;
    j["records_with_separable_violations"] = s.records_with_violations;
    if (s.acceptance_rate)
      j["acceptance_rate"] = *s.acceptance_rate;
    arr.push_back(std::move(j));
  }
  return arr;
}

/// Deterministic part of the report: no timings, no worker count, no paths.
inline nlohmann::ordered_json report_json(const ExperimentReport &r) {
  nlohmann::ordered_json j;
  auto &c = j["config"];
  c["dims"] = r.config.dims.label();
  auto fams = nlohmann::ordered_json::array();
  for (auto f : r.config.families)
    fams.push_back(family_name(f));
  c["families"] = fams;
  c["n_states"] = r.config.n_states;
  c["n_witnesses"] = r.config.n_witnesses;
  c["bins"] = r.config.n_bins;
  c["seed"] = r.config.master_seed;
  c["ppt_tol"] = r.config.ppt_tol;
  c["gamma_grouping"] = gamma_grouping_name(r.config.gamma_grouping);
  j["rng"] = r.rng_identifier;
  j["n_states"] = r.n_states;
  j["n_entangled"] = r.n_entangled;
  j["p_separable"] = r.p_separable;
  j["H_E"] = r.H_E;
  j["mi_estimator"] = "plug-in, zero-anchored uniform bins per witness, no bias correction";
  j["mi_plugin_bias_bits"] = r.mi_bias_bits;
  j["summary"] = summary_json(r.summary);
  j["audit"] = {{"dpi_violations", r.dpi_violations}};
  return j;
}

inline void write_json(const fs::path &p, const nlohmann::ordered_json &j) {
  auto out = detail::open_for_write(p);
  out << j.dump(2) << '\n';
  detail::finish(out, p);
}

inline void write_joint_hist_csv(const fs::path &p, const JointHistogram &h) {
  auto out = detail::open_for_write(p);
  out << "bin_left,bin_right,count_entangled,count_separable\n";
  for (std::size_t b = 0; b < h.n_bins(); ++b)
    out << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ','
        << h.counts_entangled[b] << ',' << h.counts_separable[b] << '\n';
  detail::finish(out, p);
}

inline fs::path mi_hist_filename(const MiDistribution &d) {
  return "mi_hist_" + std::string(family_name(d.family)) + "_" + d.quantity + ".csv";
}

inline void write_mi_hist_csv(const fs::path &p, const MiDistribution &d) {
  auto out = detail::open_for_write(p);
  out << "bin_left,bin_right,count\n";
  for (std::size_t b = 0; b < d.counts.size(); ++b)
    out << format_double(d.edges[b]) << ',' << format_double(d.edges[b + 1]) << ',' << d.counts[b]
        << '\n';
  detail::finish(out, p);
}

inline void write_mi_distributions(const fs::path &dir, const std::vector<WitnessRecord> &records,
                                   std::size_t n_hist_bins) {
  for (const auto &d : emit_mi_distribution(records, n_hist_bins))
    write_mi_hist_csv(dir / mi_hist_filename(d), d);
}

inline void ensure_directory(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
}

/// Writes every artifact of a run into `dir`.
inline void write_report(const fs::path &dir, const ExperimentReport &r, std::size_t n_hist_bins = 100) {
  ensure_directory(dir);
  write_records_csv(dir / "witness_records.csv", r.records);
  write_json(dir / "report.json", report_json(r));
  nlohmann::ordered_json t;
  t["states_seconds"] = r.timings.states_seconds;
  t["witnesses_seconds"] = r.timings.witnesses_seconds;
  t["total_seconds"] = r.timings.total_seconds;
  write_json(dir / "timings.json", t);
  for (const auto &[index, h] : r.joint_histograms)
    write_joint_hist_csv(dir / ("joint_hist_" + std::to_string(index) + ".csv"), h);
  write_mi_distributions(dir, r.records, n_hist_bins);
}

} // namespace ewinfo
