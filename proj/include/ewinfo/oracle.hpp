#pragma once

// PPT labelling. For 2x2 and 2x3 a state is separable exactly when its partial
// transpose is positive semidefinite.

#include <cstdint>
#include <stdexcept>

#include "ewinfo/linalg.hpp"
#include "ewinfo/sampling.hpp"

namespace ewinfo {

inline constexpr double kDefaultPptTolerance = 1e-10;

struct EntanglementLabel {
  enum class Value : std::uint8_t { Entangled = 0, Separable = 1 };

  Value value;
  double min_pt_eigenvalue;

  bool entangled() const { return value == Value::Entangled; }
  // e = 0 for entangled, e = 1 for separable.
  std::uint8_t code() const { return static_cast<std::uint8_t>(value); }
};

inline EntanglementLabel ppt_label(const HermitianOperator &rho, const BipartiteDims &dims,
                                   double tol = kDefaultPptTolerance) {
  if (!dims.ppt_exact())
    throw std::invalid_argument("ppt_label: PPT decides separability only for 2x2 and 2x3, got " +
                                dims.label());
  if (rho.dim() != dims.total())
    throw std::invalid_argument("ppt_label: operator dimension does not match dims");
  if (std::abs(rho.trace() - 1.0) > kStateTolerance)
    throw std::invalid_argument("ppt_label: input is not a state (trace != 1)");
  const double min_eig = hermitian_eigenvalues(partial_transpose(rho, dims, Factor::B)).front();
  // ">= -tol => separable"
  return {min_eig < -tol ? EntanglementLabel::Value::Entangled : EntanglementLabel::Value::Separable,
          min_eig};
}

inline EntanglementLabel ppt_label(const DensityMatrix &rho, double tol = kDefaultPptTolerance) {
  return ppt_label(rho.op(), rho.dims(), tol);
}

} // namespace ewinfo
