#pragma once

// Independent reference computations used only by tests. None of these go
// through the library routine they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ewinfo/linalg.hpp"

namespace oracle {

using ewinfo::ComplexMatrix;
using ewinfo::cplx;

/// Partial trace by explicit index summation over the full 4-index tensor.
inline ComplexMatrix partial_trace_sum(const ComplexMatrix &m, std::size_t dA, std::size_t dB,
                                       bool keep_a) {
  const std::size_t d = keep_a ? dA : dB;
  ComplexMatrix r(d, d);
  for (std::size_t i = 0; i < dA; ++i)
    for (std::size_t k = 0; k < dB; ++k)
      for (std::size_t j = 0; j < dA; ++j)
        for (std::size_t l = 0; l < dB; ++l) {
          const cplx v = m(i * dB + k, j * dB + l);
          if (keep_a && k == l)
            r(i, j) += v;
          if (!keep_a && i == j)
            r(k, l) += v;
        }
  return r;
}

/// Determinant by LU with partial pivoting.
inline cplx determinant(ComplexMatrix a) {
  const std::size_t n = a.rows();
  cplx det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k)))
        piv = i;
    if (std::abs(a(piv, k)) == 0.0)
      return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j)
        a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

inline double char_poly(const ComplexMatrix &h, double lambda) {
  ComplexMatrix m = h;
  for (std::size_t i = 0; i < m.rows(); ++i)
    m(i, i) -= lambda;
  return determinant(std::move(m)).real();
}

/// Eigenvalues of a Hermitian matrix with simple spectrum: sign changes of
/// det(H - lambda I) on a fine grid, refined by bisection.
inline std::vector<double> eigenvalues_by_bisection(const ComplexMatrix &h, std::size_t grid = 200'000) {
  const double bound = ewinfo::frobenius_norm(h) + 1.0;
  std::vector<double> roots;
  double x0 = -bound, f0 = char_poly(h, x0);
  for (std::size_t g = 1; g <= grid; ++g) {
    const double x1 = -bound + 2.0 * bound * static_cast<double>(g) / static_cast<double>(grid);
    const double f1 = char_poly(h, x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = char_poly(h, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

/// Tr(A B) by full matrix multiplication.
inline double trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
  return (a * b).trace().real();
}

/// Counts per bin by scanning each bin's interval over all samples.
inline void brute_force_bin_counts(std::span<const double> w, std::span<const std::uint8_t> e,
                                   const std::vector<double> &edges, std::vector<std::uint64_t> &ent,
                                   std::vector<std::uint64_t> &sep) {
  const std::size_t nb = edges.size() - 1;
  ent.assign(nb, 0);
  sep.assign(nb, 0);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool inside = w[i] >= edges[b] && (w[i] < edges[b + 1] || (b == nb - 1 && w[i] <= edges[b + 1]));
      if (!inside)
        continue;
      (e[i] == 0 ? ent : sep)[b]++;
    }
}

inline double entropy_bits(const std::vector<double> &p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0)
      h -= x * std::log2(x);
  return h;
}

/// I(S:E) from raw (w, e) pairs with s = [w < 0].
inline double sign_mi_direct(std::span<const double> w, std::span<const std::uint8_t> e) {
  double c[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < w.size(); ++i)
    c[w[i] < 0.0 ? 1 : 0][e[i]] += 1.0;
  const double n = static_cast<double>(w.size());
  std::vector<double> joint, ps(2, 0.0), pe(2, 0.0);
  for (int s = 0; s < 2; ++s)
    for (int k = 0; k < 2; ++k) {
      joint.push_back(c[s][k] / n);
      ps[s] += c[s][k] / n;
      pe[k] += c[s][k] / n;
    }
  return entropy_bits(ps) + entropy_bits(pe) - entropy_bits(joint);
}

} // namespace oracle
