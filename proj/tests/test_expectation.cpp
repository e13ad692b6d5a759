#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ewinfo/diagnostics.hpp"
#include "ewinfo/expectation.hpp"
#include "ewinfo/witnesses.hpp"
#include "support/oracles.hpp"

using namespace ewinfo;

TEST(GellMannBasis, Orthonormal) {
  for (std::size_t d : {2u, 3u, 4u, 6u}) {
    const auto basis = gell_mann_basis(d);
    ASSERT_EQ(basis.size(), d * d);
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const cplx ip = (basis[a].matrix().adjoint() * basis[b].matrix()).trace();
        ASSERT_NEAR(ip.real(), a == b ? 1.0 : 0.0, 1e-14);
        ASSERT_NEAR(ip.imag(), 0.0, 1e-14);
      }
  }
}

TEST(HermitianCoordinates, AreTracesAgainstBasis) {
  for (std::size_t d : {4u, 6u}) {
    const auto basis = gell_mann_basis(d);
    for (std::uint64_t i = 0; i < 10; ++i) {
      RngStream s(401, i);
      const ComplexMatrix g = standard_complex_gaussian(s, d);
      const HermitianOperator m((g + g.adjoint()) * cplx(0.5));
      const auto c = hermitian_coordinates(m);
      ComplexMatrix back(d, d);
      for (std::size_t a = 0; a < basis.size(); ++a) {
        ASSERT_NEAR(c[a], oracle::trace_product(m.matrix(), basis[a].matrix()), 1e-12);
        back = back + basis[a].matrix() * cplx(c[a]);
      }
      ASSERT_LE(max_abs_diff(back, m.matrix()), 1e-12);
    }
  }
}

TEST(Expectation, MaximallyMixedGivesTraceOverDimension) {
  for (BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}}) {
    const double d = static_cast<double>(dims.total());
    std::vector<HermitianOperator> states{HermitianOperator(ComplexMatrix::identity(dims.total()) * cplx(1.0 / d))};
    std::vector<HermitianOperator> ws;
    for (std::uint64_t j = 0; j < 20; ++j) {
      RngStream s(409, j);
      ws.push_back(sample_witness(j % 2 ? WitnessFamily::PartialTranspose : WitnessFamily::RandomObservable, s, dims).op);
    }
    const auto e = compute_expectation_matrix(std::span<const HermitianOperator>(states),
                                              std::span<const HermitianOperator>(ws));
    for (std::size_t j = 0; j < ws.size(); ++j)
      EXPECT_NEAR(e(0, j), ws[j].trace() / d, 1e-12);
  }
}

TEST(Expectation, BellWitnessOnBellState) {
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexMatrix u(4, 4, {r, r, 0, 0, 0, 0, r, r, 0, 0, r, -r, r, -r, 0, 0});
  const Witness w = pt_witness_from_unitary(u, {2, 2});
  const std::vector<HermitianOperator> states{bell_projector()}, ws{w.op};
  const auto e = compute_expectation_matrix(std::span<const HermitianOperator>(states),
                                            std::span<const HermitianOperator>(ws));
  EXPECT_NEAR(e(0, 0), oracle::trace_product(w.op.matrix(), bell_projector().matrix()), 1e-14);
  // the partial transpose of a Bell projector is half the swap, +1/2 on Phi+
  EXPECT_NEAR(e(0, 0), 0.5, 1e-14);

  const ComplexMatrix singlet_vec(4, 1, {0, r, -r, 0});
  const std::vector<HermitianOperator> singlet{HermitianOperator(singlet_vec * singlet_vec.adjoint())};
  const auto f = compute_expectation_matrix(std::span<const HermitianOperator>(singlet),
                                            std::span<const HermitianOperator>(ws));
  EXPECT_NEAR(f(0, 0), -0.5, 1e-14);
}

TEST(Expectation, FastPathMatchesDirectProduct) {
  for (BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}}) {
    std::vector<DensityMatrix> states;
    std::vector<Witness> ws;
    for (std::uint64_t i = 0; i < 64; ++i) {
      RngStream s(419, i);
      states.push_back(sample_state(s, dims));
      RngStream t(421, i);
      const auto fam = static_cast<WitnessFamily>(1 + i % 2);
      ws.push_back(sample_witness(fam, t, dims));
    }
    const auto e = compute_expectation_matrix(std::span<const DensityMatrix>(states), std::span<const Witness>(ws));
    ASSERT_EQ(e.n_states, 64u);
    ASSERT_EQ(e.n_witnesses, 64u);
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j)
        ASSERT_NEAR(e(i, j), oracle::trace_product(ws[j].op.matrix(), states[i].matrix()), 1e-12);
  }
}

TEST(Expectation, ColumnIsIndependentOfBatchSize) {
  const BipartiteDims dims{2, 2};
  std::vector<HermitianOperator> states;
  for (std::uint64_t i = 0; i < 1500; ++i) {
    RngStream s(431, i);
    states.push_back(sample_state(s, dims).op());
  }
  RngStream t(433, 0);
  const std::vector<HermitianOperator> ws{sample_pt_witness(t, dims).op};
  const auto full = compute_expectation_matrix(std::span<const HermitianOperator>(states),
                                               std::span<const HermitianOperator>(ws));
  const auto part = compute_expectation_matrix(std::span<const HermitianOperator>(states).subspan(700, 5),
                                               std::span<const HermitianOperator>(ws));
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_EQ(part(i, 0), full(700 + i, 0));
}

TEST(Expectation, Errors) {
  const std::vector<HermitianOperator> s4{HermitianOperator(ComplexMatrix::identity(4))};
  const std::vector<HermitianOperator> w6{HermitianOperator(ComplexMatrix::identity(6))};
  EXPECT_THROW(compute_expectation_matrix(std::span<const HermitianOperator>(s4), std::span<const HermitianOperator>(w6)),
               std::invalid_argument);
  CoordinateBlock block(4, 3);
  std::vector<double> coeffs(15), out(3);
  EXPECT_THROW(expectation_column(block, coeffs, out), std::invalid_argument);
  EXPECT_THROW(block.set(0, w6.front()), std::invalid_argument);
}
