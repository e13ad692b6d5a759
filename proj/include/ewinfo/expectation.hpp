#pragma once

// Batched Tr(W rho). Every Hermitian operator is expanded once in an
// orthonormal Hermitian basis (normalized identity + generalized Gell-Mann),
// where Tr(W rho) becomes a real dot product of d^2 coordinates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ewinfo/linalg.hpp"
#include "ewinfo/sampling.hpp"
#include "ewinfo/witnesses.hpp"

namespace ewinfo {

/// Basis ordering: [identity/sqrt(d), diagonal l = 1..d-1, then for each
/// j < k the symmetric and antisymmetric off-diagonal elements].
inline std::vector<HermitianOperator> gell_mann_basis(std::size_t d) {
  std::vector<HermitianOperator> basis;
  basis.reserve(d * d);
  {
    ComplexMatrix m = ComplexMatrix::identity(d);
    m *= 1.0 / std::sqrt(static_cast<double>(d));
    basis.emplace_back(std::move(m));
  }
  for (std::size_t l = 1; l < d; ++l) {
    ComplexMatrix m(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (std::size_t i = 0; i < l; ++i)
      m(i, i) = norm;
    m(l, l) = -static_cast<double>(l) * norm;
    basis.emplace_back(std::move(m));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      ComplexMatrix sym(d, d), anti(d, d);
      sym(j, k) = sym(k, j) = r;
      anti(j, k) = cplx(0.0, -r);
      anti(k, j) = cplx(0.0, r);
      basis.emplace_back(std::move(sym));
      basis.emplace_back(std::move(anti));
    }
  return basis;
}

/// Real coordinates c_a = Tr(M G_a), so that Tr(A B) = sum_a a_a b_a.
inline void hermitian_coordinates(const HermitianOperator &m, std::span<double> out) {
  const std::size_t d = m.dim();
  if (out.size() != d * d)
    throw std::invalid_argument("hermitian_coordinates: output size must be d^2");
  std::size_t a = 0;
  double running = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    running += m(i, i).real();
  out[a++] = running / std::sqrt(static_cast<double>(d));
  running = 0.0;
  for (std::size_t l = 1; l < d; ++l) {
    running += m(l - 1, l - 1).real();
    out[a++] = (running - static_cast<double>(l) * m(l, l).real()) /
               std::sqrt(static_cast<double>(l * (l + 1)));
  }
  const double s2 = std::sqrt(2.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      out[a++] = s2 * m(j, k).real();
      out[a++] = -s2 * m(j, k).imag();
    }
}

inline std::vector<double> hermitian_coordinates(const HermitianOperator &m) {
  std::vector<double> c(m.dim() * m.dim());
  hermitian_coordinates(m, c);
  return c;
}

/// Coordinates of a batch of operators stored coordinate-major:
/// value(a, i) = data[a * count + i].
class CoordinateBlock {
public:
  CoordinateBlock(std::size_t dim, std::size_t count)
      : dim_(dim), count_(count), data_(dim * dim * count) {}

  std::size_t dim() const { return dim_; }
  std::size_t n_coords() const { return dim_ * dim_; }
  std::size_t count() const { return count_; }

  void set(std::size_t i, const HermitianOperator &m) {
    if (m.dim() != dim_)
      throw std::invalid_argument("CoordinateBlock: operator dimension mismatch");
    const auto c = hermitian_coordinates(m);
    for (std::size_t a = 0; a < c.size(); ++a)
      data_[a * count_ + i] = c[a];
  }

  const double *row(std::size_t a) const { return data_.data() + a * count_; }

private:
  std::size_t dim_;
  std::size_t count_;
  std::vector<double> data_;
};

/// out[i] = sum_a coeffs[a] * block(a, i). The sum over a runs in a fixed
/// order for every i, so results do not depend on tiling or threading.
inline void expectation_column(const CoordinateBlock &states, std::span<const double> coeffs,
                               std::span<double> out) {
  const std::size_t n = states.count();
  const std::size_t k = states.n_coords();
  if (coeffs.size() != k || out.size() != n)
    throw std::invalid_argument("expectation_column: size mismatch");
  constexpr std::size_t kTile = 512;
  for (std::size_t i0 = 0; i0 < n; i0 += kTile) {
    const std::size_t len = std::min(kTile, n - i0);
    double *o = out.data() + i0;
    std::fill(o, o + len, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
      const double c = coeffs[a];
      const double *s = states.row(a) + i0;
      for (std::size_t i = 0; i < len; ++i)
        o[i] += c * s[i];
    }
  }
}

/// n_states x n_witnesses matrix, row-major: value(i, j) = Tr(W_j rho_i).
struct ExpectationMatrix {
  std::size_t n_states = 0;
  std::size_t n_witnesses = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * n_witnesses + j]; }
};

inline ExpectationMatrix compute_expectation_matrix(std::span<const HermitianOperator> states,
                                                    std::span<const HermitianOperator> witnesses) {
  if (states.empty() || witnesses.empty())
    return {states.size(), witnesses.size(), {}};
  const std::size_t d = states.front().dim();
  for (const auto &s : states)
    if (s.dim() != d)
      throw std::invalid_argument("compute_expectation_matrix: inconsistent state dimensions");
  for (const auto &w : witnesses)
    if (w.dim() != d)
      throw std::invalid_argument("compute_expectation_matrix: witness dimension mismatch");

  CoordinateBlock block(d, states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    block.set(i, states[i]);

  ExpectationMatrix r{states.size(), witnesses.size(),
                      std::vector<double>(states.size() * witnesses.size())};
  std::vector<double> column(states.size());
  for (std::size_t j = 0; j < witnesses.size(); ++j) {
    const auto coeffs = hermitian_coordinates(witnesses[j]);
    expectation_column(block, coeffs, column);
    for (std::size_t i = 0; i < states.size(); ++i)
      r.values[i * witnesses.size() + j] = column[i];
  }
  return r;
}

inline ExpectationMatrix compute_expectation_matrix(std::span<const DensityMatrix> states,
                                                    std::span<const Witness> witnesses) {
  std::vector<HermitianOperator> s, w;
  s.reserve(states.size());
  w.reserve(witnesses.size());
  for (const auto &x : states)
    s.push_back(x.op());
  for (const auto &x : witnesses)
    w.push_back(x.op);
  return compute_expectation_matrix(std::span<const HermitianOperator>(s),
                                    std::span<const HermitianOperator>(w));
}

} // namespace ewinfo
