#pragma once

// The three observable families: two-qubit circulant witnesses, partial
// transposes of random pure states, and normalized random Hermitian matrices.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ewinfo/linalg.hpp"
#include "ewinfo/rng.hpp"
#include "ewinfo/sampling.hpp"

namespace ewinfo {

enum class WitnessFamily { Optimal, PartialTranspose, RandomObservable };

inline std::string_view family_name(WitnessFamily f) {
  switch (f) {
  case WitnessFamily::Optimal: return "optimal";
  case WitnessFamily::PartialTranspose: return "pt";
  case WitnessFamily::RandomObservable: return "random";
  }
  return "unknown";
}

inline WitnessFamily parse_family(std::string_view s) {
  if (s == "optimal") return WitnessFamily::Optimal;
  if (s == "pt") return WitnessFamily::PartialTranspose;
  if (s == "random") return WitnessFamily::RandomObservable;
  throw std::invalid_argument("unknown witness family '" + std::string(s) + "'");
}

inline StreamDomain family_domain(WitnessFamily f) {
  switch (f) {
  case WitnessFamily::Optimal: return StreamDomain::OptimalWitness;
  case WitnessFamily::PartialTranspose: return StreamDomain::PartialTransposeWitness;
  case WitnessFamily::RandomObservable: return StreamDomain::RandomObservable;
  }
  throw std::invalid_argument("family_domain: bad family");
}

/// How the bound on gamma is grouped: sqrt(alpha^2 + beta^2/2) as typeset
/// (Literal) or sqrt((alpha^2 + beta^2)/2) (Mean).
enum class GammaGrouping { Literal, Mean };

inline GammaGrouping parse_gamma_grouping(std::string_view s) {
  if (s == "literal") return GammaGrouping::Literal;
  if (s == "mean") return GammaGrouping::Mean;
  throw std::invalid_argument("unknown gamma grouping '" + std::string(s) + "'");
}

inline std::string_view gamma_grouping_name(GammaGrouping g) {
  return g == GammaGrouping::Literal ? "literal" : "mean";
}

inline double gamma_bound(double alpha, double beta, GammaGrouping grouping) {
  return grouping == GammaGrouping::Literal ? std::sqrt(alpha * alpha + beta * beta / 2.0)
                                            : std::sqrt((alpha * alpha + beta * beta) / 2.0);
}

struct OptimalParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double a = 0.25;
  std::uint64_t draws = 1; // parameter triples drawn to obtain this witness
};

struct Witness {
  WitnessFamily family;
  BipartiteDims dims;
  HermitianOperator op;
  std::optional<OptimalParams> params;
  double min_eigenvalue;
};

inline Witness make_witness(WitnessFamily family, BipartiteDims dims, HermitianOperator op,
                            std::optional<OptimalParams> params = std::nullopt) {
  const double min_eig = hermitian_eigenvalues(op).front();
  return Witness{family, dims, std::move(op), params, min_eig};
}

inline constexpr double kNegativityThreshold = 1e-12;

/// Circulant two-qubit witness with a = 1/4 (unit trace). Returns nullopt when
/// the operator has no negative eigenvalue and so cannot detect anything.
inline std::optional<Witness> build_optimal_witness(double alpha, double beta, double gamma,
                                                    GammaGrouping grouping = GammaGrouping::Literal) {
  if (!(std::abs(alpha) <= 1.0 && std::abs(beta) <= 1.0 && std::abs(gamma) <= 1.0))
    throw std::invalid_argument("build_optimal_witness: |alpha|, |beta|, |gamma| must be <= 1");
  if (!(gamma < gamma_bound(alpha, beta, grouping)))
    throw std::invalid_argument("build_optimal_witness: gamma violates the negativity condition");

  constexpr double a = 0.25;
  ComplexMatrix m(4, 4);
  m(0, 0) = m(3, 3) = a * (1.0 + gamma);
  m(1, 1) = m(2, 2) = a * (1.0 - gamma);
  m(0, 3) = m(3, 0) = a * (alpha + beta);
  m(1, 2) = m(2, 1) = a * (alpha - beta);

  Witness w = make_witness(WitnessFamily::Optimal, BipartiteDims{2, 2},
                           HermitianOperator(std::move(m)),
                           OptimalParams{alpha, beta, gamma, a, 1});
  if (w.min_eigenvalue >= -kNegativityThreshold)
    return std::nullopt;
  return w;
}

/// Closed-form spectrum of the circulant witness (unsorted).
inline std::vector<double> optimal_witness_spectrum(const OptimalParams &p) {
  return {p.a * ((1.0 + p.gamma) + (p.alpha + p.beta)), p.a * ((1.0 + p.gamma) - (p.alpha + p.beta)),
          p.a * ((1.0 - p.gamma) + (p.alpha - p.beta)), p.a * ((1.0 - p.gamma) - (p.alpha - p.beta))};
}

inline constexpr std::uint64_t kMaxOptimalRejections = 1'000'000;

/// (alpha, beta, gamma) uniform on [-1, 1]^3, rejected until the gamma
/// condition holds and the operator has a negative eigenvalue.
inline Witness sample_optimal_witness(RngStream &stream,
                                      GammaGrouping grouping = GammaGrouping::Literal) {
  for (std::uint64_t draws = 1; draws <= kMaxOptimalRejections; ++draws) {
    const double alpha = stream.uniform(-1.0, 1.0);
    const double beta = stream.uniform(-1.0, 1.0);
    const double gamma = stream.uniform(-1.0, 1.0);
    if (!(gamma < gamma_bound(alpha, beta, grouping)))
      continue;
    if (auto w = build_optimal_witness(alpha, beta, gamma, grouping)) {
      w->params->draws = draws;
      return std::move(*w);
    }
  }
  throw std::runtime_error("sample_optimal_witness: rejection limit reached");
}

/// (1 (x) T)(U|e><e|U^dagger) for a given unitary on C^dA (x) C^dB.
inline Witness pt_witness_from_unitary(const ComplexMatrix &u, const BipartiteDims &dims) {
  if (!u.square() || u.rows() != dims.total())
    throw std::invalid_argument("pt_witness_from_unitary: unitary dimension mismatch");
  const ComplexMatrix projector = ComplexMatrix::outer(u.column(0));
  return make_witness(WitnessFamily::PartialTranspose, dims,
                      HermitianOperator(partial_transpose(projector, dims, Factor::B)));
}

inline Witness sample_pt_witness(RngStream &stream, const BipartiteDims &dims) {
  const ComplexMatrix projector = ComplexMatrix::outer(haar_vector(stream, dims.total()));
  return make_witness(WitnessFamily::PartialTranspose, dims,
                      HermitianOperator(partial_transpose(projector, dims, Factor::B)));
}

/// (A + A^dagger) / ||A + A^dagger||_F with A Ginibre.
inline Witness sample_random_observable(RngStream &stream, const BipartiteDims &dims) {
  constexpr int kMaxRetries = 64;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    const ComplexMatrix a = standard_complex_gaussian(stream, dims.total());
    ComplexMatrix h = a + a.adjoint();
    const double norm = frobenius_norm(h);
    if (norm < 1e-12)
      continue;
    h *= 1.0 / norm;
    return make_witness(WitnessFamily::RandomObservable, dims, HermitianOperator(std::move(h)));
  }
  throw std::runtime_error("sample_random_observable: degenerate draws");
}

inline Witness sample_witness(WitnessFamily family, RngStream &stream, const BipartiteDims &dims,
                              GammaGrouping grouping = GammaGrouping::Literal) {
  switch (family) {
  case WitnessFamily::Optimal:
    if (!(dims == BipartiteDims{2, 2}))
      throw std::invalid_argument("optimal witnesses are defined only for 2x2");
    return sample_optimal_witness(stream, grouping);
  case WitnessFamily::PartialTranspose: return sample_pt_witness(stream, dims);
  case WitnessFamily::RandomObservable: return sample_random_observable(stream, dims);
  }
  throw std::invalid_argument("sample_witness: bad family");
}

/// Upper estimate of min over product states of <psi (x) phi| W |psi (x) phi>,
/// from n_samples Haar-random product vectors.
inline double estimate_block_positivity(const Witness &w, std::uint64_t n_samples,
                                        RngStream &stream) {
  if (n_samples == 0)
    throw std::invalid_argument("estimate_block_positivity: n_samples must be positive");
  const std::size_t dA = w.dims.dA, dB = w.dims.dB, d = dA * dB;
  const ComplexMatrix &m = w.op.matrix();
  std::vector<cplx> v(d), mv(d);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < n_samples; ++s) {
    const auto psi = haar_vector(stream, dA);
    const auto phi = haar_vector(stream, dB);
    for (std::size_t i = 0; i < dA; ++i)
      for (std::size_t k = 0; k < dB; ++k)
        v[i * dB + k] = psi[i] * phi[k];
    double value = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      cplx row = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        row += m(i, j) * v[j];
      value += (std::conj(v[i]) * row).real();
    }
    best = std::min(best, value);
  }
  return best;
}

} // namespace ewinfo
