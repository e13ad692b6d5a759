#pragma once

// Plug-in entropy and mutual information estimates from counts, and the
// zero-anchored joint histogram of (w, e) with its sign coarse-graining.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ewinfo/oracle.hpp"

namespace ewinfo {

inline constexpr double kProbabilitySumTolerance = 1e-9;

namespace detail {
inline void require_distribution(std::span<const double> p, const char *what) {
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0))
      throw std::invalid_argument(std::string(what) + ": negative or NaN probability");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance)
    throw std::invalid_argument(std::string(what) + ": probabilities do not sum to 1");
}

inline double entropy_unchecked(std::span<const double> p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0)
      h -= x * std::log2(x);
  return h;
}
} // namespace detail

/// H = -sum p log2 p in bits, with 0 log 0 = 0.
inline double shannon_entropy(std::span<const double> p) {
  detail::require_distribution(p, "shannon_entropy");
  return detail::entropy_unchecked(p);
}

/// Joint distribution p(x, y) stored row-major, x major.
class DiscreteJoint {
public:
  DiscreteJoint(std::size_t n_x, std::size_t n_y, std::vector<double> probs)
      : n_x_(n_x), n_y_(n_y), probs_(std::move(probs)) {
    if (n_x_ == 0 || n_y_ == 0)
      throw std::invalid_argument("DiscreteJoint: shape must be positive");
    if (probs_.size() != n_x_ * n_y_)
      throw std::invalid_argument("DiscreteJoint: size does not match shape");
    detail::require_distribution(probs_, "DiscreteJoint");
  }

  std::size_t n_x() const { return n_x_; }
  std::size_t n_y() const { return n_y_; }
  double operator()(std::size_t x, std::size_t y) const { return probs_[x * n_y_ + y]; }
  const std::vector<double> &probs() const { return probs_; }

  std::vector<double> marginal_x() const {
    std::vector<double> m(n_x_, 0.0);
    for (std::size_t x = 0; x < n_x_; ++x)
      for (std::size_t y = 0; y < n_y_; ++y)
        m[x] += (*this)(x, y);
    return m;
  }
  std::vector<double> marginal_y() const {
    std::vector<double> m(n_y_, 0.0);
    for (std::size_t x = 0; x < n_x_; ++x)
      for (std::size_t y = 0; y < n_y_; ++y)
        m[y] += (*this)(x, y);
    return m;
  }

private:
  std::size_t n_x_;
  std::size_t n_y_;
  std::vector<double> probs_;
};

/// I(X:Y) = H(X) + H(Y) - H(X,Y), clamped below at 0.
inline double mutual_information(const DiscreteJoint &j) {
  const auto px = j.marginal_x();
  const auto py = j.marginal_y();
  const double i = detail::entropy_unchecked(px) + detail::entropy_unchecked(py) -
                   detail::entropy_unchecked(j.probs());
  return std::max(0.0, i);
}

/// Binned (w, e) counts. bin b covers [edges[b], edges[b+1]); the last bin is
/// closed on the right. edges[zero_edge] == 0 exactly.
struct JointHistogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts_entangled;
  std::vector<std::uint64_t> counts_separable;
  std::uint64_t total = 0;
  std::size_t zero_edge = 0;

  std::size_t n_bins() const { return counts_entangled.size(); }
};

namespace detail {

inline std::size_t locate_bin(double w, std::span<const double> edges, std::size_t guess) {
  const std::size_t last = edges.size() - 2;
  std::size_t b = std::min(guess, last);
  while (b > 0 && w < edges[b])
    --b;
  while (b < last && w >= edges[b + 1])
    ++b;
  return b;
}

inline void require_inputs(std::span<const double> w, std::span<const std::uint8_t> e) {
  if (w.empty())
    throw std::invalid_argument("build_joint_histogram: empty input");
  if (w.size() != e.size())
    throw std::invalid_argument("build_joint_histogram: w and labels differ in length");
  for (double x : w)
    if (!std::isfinite(x))
      throw std::invalid_argument("build_joint_histogram: non-finite w");
}

inline void accumulate(JointHistogram &h, std::span<const double> w,
                       std::span<const std::uint8_t> e, double width, std::size_t n_neg) {
  const std::size_t n = h.n_bins();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double q = std::floor(w[i] / width) + static_cast<double>(n_neg);
    const std::size_t guess = q <= 0.0 ? 0 : std::min(static_cast<std::size_t>(q), n - 1);
    const std::size_t b = locate_bin(w[i], h.edges, guess);
    if (e[i] == 0)
      ++h.counts_entangled[b];
    else
      ++h.counts_separable[b];
  }
  h.total = w.size();
}

} // namespace detail

/// Uniform-width bins over [min(w, 0), max(w, 0)] shifted so that one edge is
/// exactly 0, with at least one bin on each side of it. `e` holds label codes
/// (0 entangled, 1 separable).
inline JointHistogram build_joint_histogram(std::span<const double> w,
                                            std::span<const std::uint8_t> e,
                                            std::size_t n_bins) {
  detail::require_inputs(w, e);
  if (n_bins < 2)
    throw std::invalid_argument("build_joint_histogram: need at least 2 bins");

  const auto [min_it, max_it] = std::minmax_element(w.begin(), w.end());
  const double lo = std::min(*min_it, 0.0);
  const double hi = std::max(*max_it, 0.0);

  JointHistogram h;
  std::size_t n_neg, n_pos;
  double width;
  if (hi - lo <= 0.0) {
    n_neg = n_pos = 1;
    width = 1.0;
  } else {
    const double frac = -lo / (hi - lo);
    n_neg = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n_bins)));
    n_neg = std::clamp<std::size_t>(n_neg, 1, n_bins - 1);
    n_pos = n_bins - n_neg;
    width = std::max(-lo / static_cast<double>(n_neg), hi / static_cast<double>(n_pos));
  }
  const std::size_t total_bins = n_neg + n_pos;
  h.edges.resize(total_bins + 1);
  for (std::size_t b = 0; b <= total_bins; ++b)
    h.edges[b] = (static_cast<double>(b) - static_cast<double>(n_neg)) * width;
  h.edges[n_neg] = 0.0;
  h.edges.front() = std::min(h.edges.front(), lo);
  h.edges.back() = std::max(h.edges.back(), hi);
  h.zero_edge = n_neg;
  h.counts_entangled.assign(total_bins, 0);
  h.counts_separable.assign(total_bins, 0);
  detail::accumulate(h, w, e, width, n_neg);
  return h;
}

/// Histogram on caller-supplied ascending edges, one of which must be 0 and
/// which must cover every w.
inline JointHistogram build_joint_histogram_on_edges(std::span<const double> w,
                                                     std::span<const std::uint8_t> e,
                                                     std::vector<double> edges) {
  detail::require_inputs(w, e);
  if (edges.size() < 3)
    throw std::invalid_argument("build_joint_histogram_on_edges: need at least 2 bins");
  if (!std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("build_joint_histogram_on_edges: edges must be strictly ascending");
  const auto zero = std::find(edges.begin(), edges.end(), 0.0);
  if (zero == edges.end())
    throw std::invalid_argument("build_joint_histogram_on_edges: no edge at 0");
  JointHistogram h;
  h.zero_edge = static_cast<std::size_t>(zero - edges.begin());
  h.edges = std::move(edges);
  h.counts_entangled.assign(h.edges.size() - 1, 0);
  h.counts_separable.assign(h.edges.size() - 1, 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < h.edges.front() || w[i] > h.edges.back())
      throw std::invalid_argument("build_joint_histogram_on_edges: w outside the edge range");
    const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), w[i]);
    std::size_t b = static_cast<std::size_t>(it - h.edges.begin());
    b = std::min(b == 0 ? 0 : b - 1, h.n_bins() - 1);
    if (e[i] == 0)
      ++h.counts_entangled[b];
    else
      ++h.counts_separable[b];
  }
  h.total = w.size();
  return h;
}

inline std::vector<std::uint8_t> label_codes(std::span<const EntanglementLabel> labels) {
  std::vector<std::uint8_t> codes(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    codes[i] = labels[i].code();
  return codes;
}

inline JointHistogram build_joint_histogram(std::span<const double> w,
                                            std::span<const EntanglementLabel> labels,
                                            std::size_t n_bins) {
  const auto codes = label_codes(labels);
  return build_joint_histogram(w, codes, n_bins);
}

/// p(w-bin, e): rows are bins, columns e = 0 (entangled), 1 (separable).
inline DiscreteJoint histogram_to_joint(const JointHistogram &h) {
  if (h.total == 0)
    throw std::invalid_argument("histogram_to_joint: empty histogram");
  const double n = static_cast<double>(h.total);
  std::vector<double> p(h.n_bins() * 2);
  for (std::size_t b = 0; b < h.n_bins(); ++b) {
    p[2 * b] = static_cast<double>(h.counts_entangled[b]) / n;
    p[2 * b + 1] = static_cast<double>(h.counts_separable[b]) / n;
  }
  return DiscreteJoint(h.n_bins(), 2, std::move(p));
}

/// p(s, e) with s = 1 for bins left of the zero edge and s = 0 otherwise.
inline DiscreteJoint coarse_grain_sign(const JointHistogram &h) {
  if (h.total == 0)
    throw std::invalid_argument("coarse_grain_sign: empty histogram");
  if (h.zero_edge >= h.edges.size() || h.edges[h.zero_edge] != 0.0)
    throw std::invalid_argument("coarse_grain_sign: histogram has no edge at 0");
  std::uint64_t c[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t b = 0; b < h.n_bins(); ++b) {
    const int s = b < h.zero_edge ? 1 : 0;
    c[s][0] += h.counts_entangled[b];
    c[s][1] += h.counts_separable[b];
  }
  const double n = static_cast<double>(h.total);
  return DiscreteJoint(2, 2,
                       {static_cast<double>(c[0][0]) / n, static_cast<double>(c[0][1]) / n,
                        static_cast<double>(c[1][0]) / n, static_cast<double>(c[1][1]) / n});
}

/// Leading-order upward bias of the plug-in MI estimator, in bits.
inline double plugin_mi_bias_bits(std::size_t n_x, std::size_t n_y, std::uint64_t n_samples) {
  return static_cast<double>((n_x - 1) * (n_y - 1)) /
         (2.0 * static_cast<double>(n_samples) * std::numbers::ln2);
}

} // namespace ewinfo
