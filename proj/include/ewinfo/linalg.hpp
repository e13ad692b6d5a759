#pragma once

// Dense complex linear algebra for the small bipartite dimensions used by the
// experiment (operators up to 36 x 36). Everything is row-major and value
// semantic; all free functions are pure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ewinfo {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    if (data_.size() != rows * cols)
      throw std::invalid_argument("ComplexMatrix: entry count does not match shape");
    for (const auto &z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument("ComplexMatrix: non-finite entry");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(const std::vector<cplx> &d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
      m(i, i) = d[i];
    return m;
  }

  // |v><v|
  static ComplexMatrix outer(const std::vector<cplx> &v) {
    const std::size_t n = v.size();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) = v[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::vector<cplx> &data() { return data_; }
  const std::vector<cplx> &data() const { return data_; }

  std::vector<cplx> column(std::size_t j) const {
    std::vector<cplx> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      c[i] = (*this)(i, j);
    return c;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        r(j, i) = (*this)(i, j);
    return r;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
      t += (*this)(i, i);
    return t;
  }

  ComplexMatrix &operator+=(const ComplexMatrix &o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      data_[k] += o.data_[k];
    return *this;
  }
  ComplexMatrix &operator-=(const ComplexMatrix &o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      data_[k] -= o.data_[k];
    return *this;
  }
  ComplexMatrix &operator*=(cplx s) {
    for (auto &z : data_)
      z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("ComplexMatrix: product shape mismatch");
    ComplexMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j)
          r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend bool operator==(const ComplexMatrix &a, const ComplexMatrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  void require_same_shape(const ComplexMatrix &o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("ComplexMatrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline std::vector<cplx> operator*(const ComplexMatrix &m, const std::vector<cplx> &v) {
  if (m.cols() != v.size())
    throw std::invalid_argument("ComplexMatrix: matrix-vector shape mismatch");
  std::vector<cplx> r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r[i] += m(i, j) * v[j];
  return r;
}

inline double max_abs(const ComplexMatrix &m) {
  double r = 0.0;
  for (const auto &z : m.data())
    r = std::max(r, std::abs(z));
  return r;
}

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double r = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    r = std::max(r, std::abs(a.data()[k] - b.data()[k]));
  return r;
}

inline double frobenius_norm(const ComplexMatrix &m) {
  double s = 0.0;
  for (const auto &z : m.data())
    s += std::norm(z);
  return std::sqrt(s);
}

inline double hermiticity_defect(const ComplexMatrix &m) {
  if (!m.square())
    throw std::invalid_argument("hermiticity_defect: matrix is not square");
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

inline constexpr double kHermitianTolerance = 1e-12;

/// Square matrix equal to its conjugate transpose. Construction symmetrizes
/// the input to (M + M^dagger)/2, so diagonals are exactly real afterwards.
class HermitianOperator {
public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.square())
      throw std::invalid_argument("HermitianOperator: matrix is not square");
    const std::size_t n = m_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      m_(i, i) = cplx(m_(i, i).real(), 0.0);
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
        m_(i, j) = avg;
        m_(j, i) = std::conj(avg);
      }
    }
  }

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix &matrix() const { return m_; }
  const cplx &operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

private:
  ComplexMatrix m_;
};

struct BipartiteDims {
  std::size_t dA = 2;
  std::size_t dB = 2;

  std::size_t total() const { return dA * dB; }
  std::size_t purification_dim() const { return total() * total(); }
  // PPT is necessary and sufficient for separability only for 2x2 and 2x3.
  bool ppt_exact() const {
    return (dA == 2 && dB == 2) || (dA == 2 && dB == 3) || (dA == 3 && dB == 2);
  }
  std::string label() const { return std::to_string(dA) + "x" + std::to_string(dB); }

  friend bool operator==(const BipartiteDims &, const BipartiteDims &) = default;
};

enum class Factor { A, B };

inline ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

namespace detail {
inline void require_bipartite(const ComplexMatrix &m, const BipartiteDims &dims,
                              const char *what) {
  if (dims.dA == 0 || dims.dB == 0)
    throw std::invalid_argument(std::string(what) + ": factor dimensions must be positive");
  if (!m.square() || m.rows() != dims.total())
    throw std::invalid_argument(std::string(what) + ": matrix is " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                ", expected square of size " + std::to_string(dims.total()));
}
} // namespace detail

/// Traces out the factor not named by `keep`.
inline ComplexMatrix partial_trace(const ComplexMatrix &m, const BipartiteDims &dims,
                                   Factor keep) {
  detail::require_bipartite(m, dims, "partial_trace");
  const std::size_t dA = dims.dA, dB = dims.dB;
  if (keep == Factor::A) {
    ComplexMatrix r(dA, dA);
    for (std::size_t i = 0; i < dA; ++i)
      for (std::size_t j = 0; j < dA; ++j) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < dB; ++k)
          s += m(i * dB + k, j * dB + k);
        r(i, j) = s;
      }
    return r;
  }
  ComplexMatrix r(dB, dB);
  for (std::size_t k = 0; k < dB; ++k)
    for (std::size_t l = 0; l < dB; ++l) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < dA; ++i)
        s += m(i * dB + k, i * dB + l);
      r(k, l) = s;
    }
  return r;
}

/// Transposes the named tensor factor: (1 (x) T) for Factor::B.
inline ComplexMatrix partial_transpose(const ComplexMatrix &m, const BipartiteDims &dims,
                                       Factor which) {
  detail::require_bipartite(m, dims, "partial_transpose");
  const std::size_t dA = dims.dA, dB = dims.dB;
  ComplexMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < dA; ++i)
    for (std::size_t k = 0; k < dB; ++k)
      for (std::size_t j = 0; j < dA; ++j)
        for (std::size_t l = 0; l < dB; ++l) {
          const std::size_t row = i * dB + k, col = j * dB + l;
          if (which == Factor::B)
            r(row, col) = m(i * dB + l, j * dB + k);
          else
            r(row, col) = m(j * dB + k, i * dB + l);
        }
  return r;
}

inline HermitianOperator partial_transpose(const HermitianOperator &h, const BipartiteDims &dims,
                                           Factor which = Factor::B) {
  return HermitianOperator(partial_transpose(h.matrix(), dims, which));
}

struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

namespace detail {

// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq with a
// diagonal unitary, then applies the real symmetric Jacobi rotation.
inline EigenSystem jacobi_eigen(ComplexMatrix a, bool want_vectors) {
  const std::size_t n = a.rows();
  ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix();
  const double scale = std::max(1.0, frobenius_norm(a));
  constexpr double kOffTolerance = 1e-12;
  constexpr int kMaxSweeps = 100;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        s += 2.0 * std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > kOffTolerance * scale) {
    if (++sweep > kMaxSweeps)
      throw std::runtime_error("hermitian eigensolver: Jacobi sweeps did not converge");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0)
          continue;
        const cplx phase = std::conj(apq) / mag; // e^{i phi}, phi = -arg(a_pq)
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // A <- A V with V = [[c, s], [-s e^{i phi}, c e^{i phi}]] on (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * phase * akq;
          a(k, q) = s * akp + c * phase * akq;
        }
        // A <- V^dagger A
        const cplx cphase = std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * cphase * aqk;
          a(q, k) = s * apk + c * cphase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = app - t * mag;
        a(q, q) = aqq + t * mag;
        if (want_vectors)
          for (std::size_t k = 0; k < n; ++k) {
            const cplx vkp = v(k, p), vkq = v(k, q);
            v(k, p) = c * vkp - s * phase * vkq;
            v(k, q) = s * vkp + c * phase * vkq;
          }
      }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  EigenSystem es;
  es.values.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    es.values[k] = a(order[k], order[k]).real();
  if (want_vectors) {
    es.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        es.vectors(i, k) = v(i, order[k]);
  }
  return es;
}

} // namespace detail

inline std::vector<double> hermitian_eigenvalues(const HermitianOperator &h) {
  return detail::jacobi_eigen(h.matrix(), false).values;
}

/// Raw-matrix entry point: rejects input farther than 1e-12 from Hermitian.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m) {
  if (!m.square())
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not square");
  if (hermiticity_defect(m) > kHermitianTolerance)
    throw std::invalid_argument("hermitian_eigenvalues: matrix is not Hermitian");
  return hermitian_eigenvalues(HermitianOperator(m));
}

inline EigenSystem hermitian_eigensystem(const HermitianOperator &h) {
  return detail::jacobi_eigen(h.matrix(), true);
}

struct QRFactors {
  ComplexMatrix q;
  ComplexMatrix r;
};

/// Householder QR with the phase gauge fixed so that diag(R) is real and
/// strictly positive; this makes the factorization unique.
inline QRFactors qr_gauge_fixed(const ComplexMatrix &z) {
  if (!z.square())
    throw std::invalid_argument("qr_gauge_fixed: matrix is not square");
  const std::size_t n = z.rows();
  ComplexMatrix r = z;
  ComplexMatrix q = ComplexMatrix::identity(n);
  std::vector<cplx> v(n);

  for (std::size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k; i < n; ++i)
      norm2 += std::norm(r(i, k));
    const double norm = std::sqrt(norm2);
    if (norm < 1e-300)
      throw std::domain_error("qr_gauge_fixed: singular input");
    const cplx x0 = r(k, k);
    const double ax0 = std::abs(x0);
    const cplx unit = ax0 > 0.0 ? x0 / ax0 : cplx(1.0, 0.0);
    const cplx alpha = -unit * norm;

    std::fill(v.begin(), v.end(), cplx(0.0));
    v[k] = x0 - alpha;
    for (std::size_t i = k + 1; i < n; ++i)
      v[i] = r(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i)
      vnorm2 += std::norm(v[i]);

    if (vnorm2 > 0.0) {
      const double beta = 2.0 / vnorm2;
      // R <- H R on rows k..n-1
      for (std::size_t j = k; j < n; ++j) {
        cplx s = 0.0;
        for (std::size_t i = k; i < n; ++i)
          s += std::conj(v[i]) * r(i, j);
        s *= beta;
        for (std::size_t i = k; i < n; ++i)
          r(i, j) -= v[i] * s;
      }
      // Q <- Q H
      for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        for (std::size_t l = k; l < n; ++l)
          s += q(i, l) * v[l];
        s *= beta;
        for (std::size_t l = k; l < n; ++l)
          q(i, l) -= s * std::conj(v[l]);
      }
    }
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < n; ++i)
      r(i, k) = 0.0;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag < 1e-300)
      throw std::domain_error("qr_gauge_fixed: singular input");
    const cplx phase = r(i, i) / mag;
    // Q <- Q Lambda, R <- Lambda^{-1} R
    for (std::size_t k = 0; k < n; ++k)
      q(k, i) *= phase;
    const cplx inv = std::conj(phase);
    for (std::size_t j = i; j < n; ++j)
      r(i, j) *= inv;
    r(i, i) = cplx(mag, 0.0);
  }
  return {std::move(q), std::move(r)};
}

/// Tr(A B) for Hermitian A and B.
inline double hs_inner_product(const HermitianOperator &a, const HermitianOperator &b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("hs_inner_product: dimension mismatch");
  const std::size_t n = a.dim();
  double s = 0.0;
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij Re(A_ij conj(B_ij)) for Hermitian B.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx x = a(i, j), y = b(i, j);
      s += x.real() * y.real() + x.imag() * y.imag();
    }
  return s;
}

inline double hs_norm(const HermitianOperator &a) { return frobenius_norm(a.matrix()); }

/// Cosine of the Hilbert-Schmidt angle between two Hermitian operators.
inline double hs_angle(const HermitianOperator &w, const HermitianOperator &rho) {
  const double nw = hs_norm(w), nr = hs_norm(rho);
  if (nw <= 0.0 || nr <= 0.0)
    throw std::invalid_argument("hs_angle: zero-norm operator");
  return std::clamp(hs_inner_product(w, rho) / (nw * nr), -1.0, 1.0);
}

} // namespace ewinfo
