#pragma once

// Haar-random unitaries, Hilbert-Schmidt random mixed states (purification
// with an ancilla of equal dimension, then partial trace), and random pure
// product states.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ewinfo/linalg.hpp"
#include "ewinfo/rng.hpp"

namespace ewinfo {

inline constexpr double kStateTolerance = 1e-10;

/// Positive, unit-trace Hermitian operator on C^dA (x) C^dB.
class DensityMatrix {
public:
  DensityMatrix(BipartiteDims dims, HermitianOperator op) : dims_(dims), op_(std::move(op)) {
    if (op_.dim() != dims_.total())
      throw std::invalid_argument("DensityMatrix: operator dimension does not match dims");
    if (std::abs(op_.trace() - 1.0) > kStateTolerance)
      throw std::invalid_argument("DensityMatrix: trace is not 1");
    const double min_eig = hermitian_eigenvalues(op_).front();
    if (min_eig < -kStateTolerance)
      throw std::invalid_argument("DensityMatrix: operator is not positive semidefinite");
  }

  const BipartiteDims &dims() const { return dims_; }
  const HermitianOperator &op() const { return op_; }
  const ComplexMatrix &matrix() const { return op_.matrix(); }
  double purity() const { return hs_inner_product(op_, op_); }

private:
  BipartiteDims dims_;
  HermitianOperator op_;
};

/// n x n Ginibre matrix. Entries are drawn column by column, so the first n
/// draws of a stream are the first column.
inline ComplexMatrix standard_complex_gaussian(RngStream &stream, std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("standard_complex_gaussian: n must be positive");
  ComplexMatrix z(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      z(i, j) = stream.complex_normal();
  return z;
}

/// Haar (CUE) unitary from a gauge-fixed QR of a Ginibre draw. A singular draw
/// is resampled; `retries` (if given) receives the number of resamples.
inline ComplexMatrix sample_cue_unitary(RngStream &stream, std::size_t n, int *retries = nullptr) {
  constexpr int kMaxRetries = 64;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    try {
      ComplexMatrix q = qr_gauge_fixed(standard_complex_gaussian(stream, n)).q;
      if (retries)
        *retries = attempt;
      return q;
    } catch (const std::domain_error &) {
    }
  }
  throw std::runtime_error("sample_cue_unitary: too many singular Ginibre draws");
}

/// First column of a CUE unitary, i.e. U|e> for the fiducial |e> = (1,0,...,0).
/// Consumes exactly the draws of the Ginibre matrix's first column: after the
/// gauge fix, Q's first column is z / |z|.
inline std::vector<cplx> haar_vector(RngStream &stream, std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("haar_vector: n must be positive");
  std::vector<cplx> v(n);
  double norm2 = 0.0;
  for (auto &x : v) {
    x = stream.complex_normal();
    norm2 += std::norm(x);
  }
  if (norm2 < 1e-300)
    throw std::runtime_error("haar_vector: degenerate Gaussian draw");
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto &x : v)
    x *= inv;
  return v;
}

namespace detail {
// psi lives on system (x) ancilla, both of dimension d; Tr_ancilla |psi><psi|.
inline HermitianOperator reduce_purification(const std::vector<cplx> &psi, std::size_t d) {
  ComplexMatrix rho(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i; j < d; ++j) {
      cplx s = 0.0;
      for (std::size_t a = 0; a < d; ++a)
        s += psi[i * d + a] * std::conj(psi[j * d + a]);
      rho(i, j) = s;
      rho(j, i) = std::conj(s);
    }
  return HermitianOperator(std::move(rho));
}
} // namespace detail

/// rho = Tr_ancilla(U|e><e|U^dagger) computed the long way, from the full
/// purification projector. Reference route for sample_state.
inline DensityMatrix state_from_unitary(const ComplexMatrix &u, const BipartiteDims &dims) {
  const std::size_t d = dims.total();
  if (!u.square() || u.rows() != d * d)
    throw std::invalid_argument("state_from_unitary: unitary must act on the purification space");
  std::vector<cplx> e(d * d, cplx(0.0));
  e[0] = 1.0;
  const ComplexMatrix pure = ComplexMatrix::outer(u * e);
  ComplexMatrix reduced = partial_trace(pure, BipartiteDims{d, d}, Factor::A);
  return DensityMatrix(dims, HermitianOperator(std::move(reduced)));
}

inline DensityMatrix sample_state(RngStream &stream, const BipartiteDims &dims) {
  const std::size_t d = dims.total();
  const std::vector<cplx> psi = haar_vector(stream, d * d);
  return DensityMatrix(dims, detail::reduce_purification(psi, d));
}

/// |psi><psi| (x) |phi><phi| with both factors Haar-uniform.
inline DensityMatrix sample_product_state(RngStream &stream, const BipartiteDims &dims) {
  const std::vector<cplx> psi = haar_vector(stream, dims.dA);
  const std::vector<cplx> phi = haar_vector(stream, dims.dB);
  ComplexMatrix prod =
      tensor_product(ComplexMatrix::outer(psi), ComplexMatrix::outer(phi));
  return DensityMatrix(dims, HermitianOperator(std::move(prod)));
}

} // namespace ewinfo
