#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cvqi/fock.hpp"

using namespace cvqi;

TEST(FockSpace, RejectsTinyDimension) {
  EXPECT_THROW(FockSpace(1), PreconditionError);
  EXPECT_NO_THROW(FockSpace(2));
}

TEST(Annihilation, MatrixElements) {
  ComplexMatrix a2 = annihilation(FockSpace(2));
  EXPECT_EQ(a2(0, 1), Complex(1.0));
  EXPECT_EQ(a2(0, 0), Complex(0.0));
  EXPECT_EQ(a2(1, 0), Complex(0.0));
  EXPECT_EQ(a2(1, 1), Complex(0.0));

  ComplexMatrix a = annihilation(FockSpace(5));
  ComplexVector ket3 = ComplexVector::Unit(5, 3);
  ComplexVector out = a * ket3;
  EXPECT_NEAR(out(2).real(), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(out.norm(), std::sqrt(3.0), 1e-15);

  EXPECT_LE(max_abs(a.adjoint() * a - number_operator(FockSpace(5))), 1e-14);
}

TEST(CoherentState, VacuumAndEnergy) {
  auto vac = coherent_state(FockSpace(20), 0.0);
  EXPECT_EQ(vac.coeffs[0], 1.0);
  for (std::size_t n = 1; n < vac.dim(); ++n) EXPECT_EQ(vac.coeffs[n], 0.0);

  const double alpha = std::sqrt(0.1);
  auto c = coherent_state(FockSpace(20), alpha);
  EXPECT_NEAR(c.n_pr, 0.1, 1e-10);
  EXPECT_NEAR(c.coeffs[1] / c.coeffs[0], alpha, 1e-15);
  EXPECT_NO_THROW(validate(c));
  EXPECT_LE(c.tail_mass, 1e-10);
}

TEST(CoherentState, TruncationErrorWhenTailTooLarge) {
  EXPECT_THROW(coherent_state(FockSpace(4), 2.0), TruncationError);
  EXPECT_THROW(coherent_state(FockSpace(4), -1.0), DomainError);
}

TEST(ThermalEnv, GeometricWeights) {
  auto vac = thermal_env(FockSpace(5), 0.0);
  EXPECT_EQ(vac.lambdas[0], 1.0);
  for (std::size_t m = 1; m < 5; ++m) EXPECT_EQ(vac.lambdas[m], 0.0);

  auto env = thermal_env(FockSpace(40), 0.5);
  EXPECT_NEAR(env.lambdas[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(env.lambdas[1], 2.0 / 9.0, 1e-15);
  double mean = 0.0, total = 0.0;
  for (std::size_t m = 0; m < env.dim(); ++m) {
    mean += static_cast<double>(m) * env.lambdas[m];
    total += env.lambdas[m];
  }
  // Finite geometric sums: sum_{m<d} lambda_m = 1 - g^d and
  // sum_{m<d} m lambda_m = n (1 - g^d) - d g^d.
  const double g = 1.0 / 3.0, gd = std::pow(g, 40);
  EXPECT_NEAR(total, 1.0 - gd, 1e-15);
  EXPECT_NEAR(mean, 0.5 * (1 - gd) - 40 * gd, 1e-15);
  EXPECT_NEAR(mean, 0.5, 1e-10);
  EXPECT_NEAR(env.tail_mass, gd, 1e-30);
}

TEST(ThermalEnv, TailChecks) {
  EXPECT_THROW(thermal_env(FockSpace(10), 0.5), TruncationError);
  EXPECT_EQ(thermal_dim_for_tail(0.5, 1e-10), 21u);
  EXPECT_NO_THROW(thermal_env(FockSpace(thermal_dim_for_tail(0.5, 1e-10)), 0.5));
  EXPECT_THROW(thermal_env(FockSpace(thermal_dim_for_tail(0.5, 1e-10) - 1), 0.5),
               TruncationError);
}

TEST(TmsvProbe, Coefficients) {
  auto vac = tmsv_probe(FockSpace(20), 0.0);
  EXPECT_EQ(vac.coeffs[0], 1.0);
  EXPECT_EQ(vac.kind, ProbeKind::TwoModeSchmidt);

  auto t = tmsv_probe(FockSpace(20), 0.1);
  EXPECT_NEAR(t.coeffs[0] * t.coeffs[0], 1.0 / 1.1, 1e-15);
  EXPECT_NEAR(t.coeffs[1] * t.coeffs[1], 0.1 / 1.21, 1e-15);
  // Geometric series: sum_{n<d} n g^n (1-g) / (1 - g^d).
  const double g = 0.1 / 1.1;
  double num = 0, den = 0;
  for (int n = 0; n < 20; ++n) {
    num += n * std::pow(g, n);
    den += std::pow(g, n);
  }
  EXPECT_NEAR(t.n_pr, num / den, 1e-15);
  EXPECT_NEAR(t.n_pr, 0.1, 1e-10);
}

TEST(ProbeSpec, PositiveAndLogConcave) {
  for (double alpha : {0.1, 0.5, 1.0, 2.0}) {
    auto c = coherent_state(FockSpace(40), alpha);
    for (std::size_t n = 0; n + 2 < c.dim(); ++n) {
      ASSERT_GT(c.coeffs[n], 0.0);
      EXPECT_GE(c.coeffs[n + 1] / c.coeffs[n], c.coeffs[n + 2] / c.coeffs[n + 1] - 1e-12);
    }
  }
  for (double np : {0.02, 0.1, 0.5}) {
    auto t = tmsv_probe(FockSpace(30), np);
    for (std::size_t n = 0; n + 2 < t.dim(); ++n) {
      ASSERT_GT(t.coeffs[n], 0.0);
      EXPECT_NEAR(t.coeffs[n + 1] / t.coeffs[n], t.coeffs[n + 2] / t.coeffs[n + 1], 1e-12);
    }
  }
}

TEST(ProbeSpec, ValidationAndKinds) {
  EXPECT_THROW(make_probe(ProbeKind::SingleMode, {1.0, -0.1}), PreconditionError);
  EXPECT_THROW(make_probe(ProbeKind::SingleMode, {0.0, 0.0}), PreconditionError);
  auto p = make_probe(ProbeKind::SingleMode, {3.0, 4.0});
  EXPECT_NEAR(p.coeffs[0], 0.6, 1e-15);
  EXPECT_NEAR(p.n_pr, 0.64, 1e-15);
  p.n_pr = 0.5;
  EXPECT_THROW(validate(p), PreconditionError);
  EXPECT_EQ(probe_kind_from_string("two_mode_schmidt"), ProbeKind::TwoModeSchmidt);
  EXPECT_EQ(to_string(ProbeKind::SingleMode), "single_mode");
  EXPECT_THROW(probe_kind_from_string("gaussian"), PreconditionError);
}

TEST(ProbeToDensity, VacuumProjector) {
  auto rho = probe_to_density(coherent_state(FockSpace(6), 0.0));
  ComplexMatrix expect = ComplexMatrix::Zero(6, 6);
  expect(0, 0) = 1.0;
  EXPECT_EQ(max_abs(rho.matrix - expect), 0.0);
}

TEST(ProbeToDensity, TmsvIsPureWithDiagonalMarginal) {
  auto t = tmsv_probe(FockSpace(20), 0.1);
  auto rho = probe_to_density(t);
  EXPECT_EQ(rho.mode_dims, (std::vector<std::size_t>{20, 20}));
  EXPECT_NEAR((rho.matrix * rho.matrix).trace().real(), 1.0, 1e-10);
  ComplexMatrix idler = partial_trace(rho.matrix, 20, 20, Keep::Second);
  for (int n = 0; n < 20; ++n) EXPECT_NEAR(idler(n, n).real(), t.coeffs[n] * t.coeffs[n], 1e-15);
  EXPECT_LE(max_abs(idler - ComplexMatrix(idler.diagonal().asDiagonal())), 1e-15);
}

TEST(DensityInvariants, ValidStatesAndEnergyTwoWays) {
  auto c = coherent_state(FockSpace(20), std::sqrt(0.3));
  for (const auto& rho : {probe_to_density(c), probe_to_density(tmsv_probe(FockSpace(16), 0.2))}) {
    auto chk = check_density(rho);
    EXPECT_LE(chk.trace_error, 1e-10);
    EXPECT_GE(chk.min_eigenvalue, -1e-10);
    EXPECT_LE(chk.hermiticity, 1e-15);
  }
  const double via_operator =
      (probe_to_density(c).matrix * number_operator(FockSpace(20))).trace().real();
  EXPECT_NEAR(via_operator, mean_photon_number(c.coeffs), 1e-9);
}
