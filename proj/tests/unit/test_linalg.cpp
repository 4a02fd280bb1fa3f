#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "cvqi/fock.hpp"
#include "cvqi/linalg.hpp"
#include "test_support.hpp"

using namespace cvqi;
using cvqi::testing::random_antihermitian;
using cvqi::testing::random_density;
using cvqi::testing::random_hermitian;
using cvqi::testing::random_matrix;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

double reconstruction_error(const ComplexMatrix& a, const HermitianEigen& e) {
  ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  return max_abs(a - back);
}

// Real roots of the characteristic polynomial of a Hermitian matrix, n <= 3.
std::vector<double> charpoly_eigenvalues(const ComplexMatrix& a) {
  if (a.rows() == 2) {
    const double p = a(0, 0).real(), q = a(1, 1).real();
    const double off = std::norm(a(0, 1));
    const double m = (p + q) / 2, d = std::sqrt((p - q) * (p - q) / 4 + off);
    return {m + d, m - d};
  }
  // Trigonometric solution of the depressed cubic.
  const double tr = a.trace().real();
  const double q = tr / 3;
  ComplexMatrix b = a - Complex(q) * ComplexMatrix::Identity(3, 3);
  const double p2 = (b * b).trace().real() / 6;
  const double p = std::sqrt(p2);
  const double r = std::clamp((b / p).determinant().real() / 2, -1.0, 1.0);
  const double phi = std::acos(r) / 3;
  const double e1 = q + 2 * p * std::cos(phi);
  const double e3 = q + 2 * p * std::cos(phi + 2 * std::numbers::pi / 3);
  return {e1, tr - e1 - e3, e3};
}

}  // namespace

TEST(HermitianEig, IdentityHasUnitSpectrum) {
  auto e = hermitian_eig(ComplexMatrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(e.values(i), 1.0);
  EXPECT_LE(max_abs(e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(3, 3)), 1e-14);
}

TEST(HermitianEig, DiagonalIsSortedDescending) {
  auto e = hermitian_eig(diag({-1.0, 2.0}));
  EXPECT_DOUBLE_EQ(e.values(0), 2.0);
  EXPECT_DOUBLE_EQ(e.values(1), -1.0);
  EXPECT_NEAR(std::abs(e.vectors(1, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors(0, 1)), 1.0, 1e-15);
}

TEST(HermitianEig, RandomReconstruction) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 5u, 8u, 31u}) {
    ComplexMatrix a = random_hermitian(n, rng);
    auto e = hermitian_eig(a);
    EXPECT_LE(reconstruction_error(a, e), 1e-10 * std::max(1.0, max_abs(a))) << n;
    EXPECT_LE(max_abs(e.vectors.adjoint() * e.vectors - ComplexMatrix::Identity(n, n)), 1e-10);
    for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  }
}

TEST(HermitianEig, RealSymmetricPathWithNegativeEntries) {
  std::mt19937_64 rng(11);
  ComplexMatrix a = random_hermitian(12, rng).real().cast<Complex>();
  auto e = hermitian_eig(a);
  EXPECT_LE(reconstruction_error(a, e), 1e-12 * max_abs(a));
}

TEST(HermitianEig, MatchesIndependentSolver) {
  std::mt19937_64 rng(3);
  ComplexMatrix a = random_hermitian(20, rng);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> oracle(a);
  RealVector w = oracle.eigenvalues().reverse();
  EXPECT_LE((hermitian_eig(a).values - w).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(HermitianEig, GradedSpectrumKeepsRelativeAccuracy) {
  // Geometric spectrum rotated into a random basis.
  std::mt19937_64 rng(5);
  const int n = 25;
  RealVector w(n);
  for (int i = 0; i < n; ++i) w(i) = std::pow(0.25, i);
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, rng));
  ComplexMatrix q = qr.householderQ();
  // Grade the rotation so that small eigenvalues stay well determined.
  ComplexMatrix a = w.cwiseSqrt().cast<Complex>().asDiagonal() *
                    (ComplexMatrix::Identity(n, n) + 1e-3 * q) *
                    w.cwiseSqrt().cast<Complex>().asDiagonal();
  a = (a * a.adjoint()).eval();
  a = (a + a.adjoint()) / 2.0;
  auto e = hermitian_eig(a);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> oracle(a);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(e.values(i), oracle.eigenvalues()(n - 1 - i), 1e-14);
  for (int i = 0; i < n; ++i) EXPECT_GT(e.values(i), 0.0);
}

TEST(HermitianEig, NonHermitianNamesEntryPair) {
  ComplexMatrix a = ComplexMatrix::Zero(3, 3);
  a(0, 2) = 1.0;
  try {
    hermitian_eig(a);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("(0,2)"), std::string::npos) << e.what();
  }
}

TEST(MatrixPower, IdentityAndSupportConvention) {
  EXPECT_LE(max_abs(matrix_power(ComplexMatrix::Identity(4, 4), 0.5).value -
                    ComplexMatrix::Identity(4, 4)),
            1e-15);
  auto p = matrix_power(diag({4.0, 0.0}), 0.5);
  EXPECT_NEAR(p.value(0, 0).real(), 2.0, 1e-15);
  EXPECT_EQ(p.value(1, 1), Complex(0.0));
  auto z = matrix_power(diag({4.0, 0.0}), 0.0);
  EXPECT_NEAR(z.value(0, 0).real(), 1.0, 1e-15);
  EXPECT_EQ(z.value(1, 1), Complex(0.0));
  EXPECT_EQ(z.clipped_count, 1u);
}

TEST(MatrixPower, ThermalSpectrum) {
  auto env = thermal_env(FockSpace(10), 0.5, 1e-1);
  ComplexMatrix rho = RealVector::Map(env.lambdas.data(), 10).cast<Complex>().asDiagonal();
  auto p = matrix_power(rho, 0.3);
  for (int m = 0; m < 10; ++m)
    EXPECT_NEAR(p.value(m, m).real(), std::pow(env.lambdas[m], 0.3), 1e-14);
}

TEST(MatrixPower, RejectsBadExponentAndNegativeSpectrum) {
  EXPECT_THROW(matrix_power(ComplexMatrix::Identity(2, 2), 1.5), DomainError);
  EXPECT_THROW(matrix_power(ComplexMatrix::Identity(2, 2), -0.1), DomainError);
  EXPECT_THROW(matrix_power(diag({1.0, -1e-6}), 0.5), NumericalError);
  EXPECT_NO_THROW(matrix_power(diag({1.0, -1e-12}), 0.5));
}

TEST(MatrixPower, SquareRootRoundTrip) {
  std::mt19937_64 rng(13);
  for (std::size_t rank : {0u, 3u}) {
    ComplexMatrix a = random_density(6, rng, rank);
    ComplexMatrix h = matrix_power(a, 0.5).value;
    EXPECT_LE(max_abs(h * h - a), 1e-8);
  }
}

TEST(MatrixPower, TraceIsFiniteAndNonnegative) {
  std::mt19937_64 rng(17);
  ComplexMatrix a = random_density(7, rng, 4);
  for (double s : {0.0, 0.1, 0.5, 0.9, 1.0}) {
    const double t = matrix_power(a, s).value.trace().real();
    EXPECT_TRUE(std::isfinite(t));
    EXPECT_GE(t, 0.0);
  }
}

TEST(MatrixExpSkew, ZeroGivesIdentity) {
  EXPECT_LE(max_abs(matrix_exp_skew(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)),
            1e-15);
}

TEST(MatrixExpSkew, PlanarRotation) {
  const double t = std::numbers::pi / 2;
  ComplexMatrix k(2, 2);
  k << 0.0, t, -t, 0.0;
  ComplexMatrix expect(2, 2);
  expect << 0.0, 1.0, -1.0, 0.0;
  EXPECT_LE(max_abs(matrix_exp_skew(k) - expect), 1e-14);
}

TEST(MatrixExpSkew, UnitaryAndMatchesTaylorOracle) {
  std::mt19937_64 rng(19);
  ComplexMatrix k = random_antihermitian(9, rng) * 0.3;
  ComplexMatrix u = matrix_exp_skew(k);
  EXPECT_LE(max_abs(u.adjoint() * u - ComplexMatrix::Identity(9, 9)), 1e-10);
  ComplexMatrix term = ComplexMatrix::Identity(9, 9), sum = term;
  for (int n = 1; n < 40; ++n) {
    term = (term * k / static_cast<double>(n)).eval();
    sum += term;
  }
  EXPECT_LE(max_abs(u - sum), 1e-12);
}

TEST(MatrixExpSkew, RejectsHermitianInput) {
  EXPECT_THROW(matrix_exp_skew(ComplexMatrix::Identity(2, 2)), PreconditionError);
}

TEST(TraceNorm, SimpleCases) {
  EXPECT_EQ(trace_norm(ComplexMatrix::Zero(3, 3)), 0.0);
  EXPECT_NEAR(trace_norm(diag({0.5, -0.5})), 1.0, 1e-15);
}

TEST(TraceNorm, MatchesCharacteristicPolynomialRoots) {
  std::mt19937_64 rng(23);
  for (std::size_t n : {2u, 3u}) {
    for (int trial = 0; trial < 10; ++trial) {
      ComplexMatrix d = random_density(n, rng) - random_density(n, rng);
      double expect = 0;
      for (double w : charpoly_eigenvalues(d)) expect += std::abs(w);
      EXPECT_NEAR(trace_norm(d), expect, 1e-12);
    }
  }
}

TEST(TensorProduct, Conventions) {
  std::mt19937_64 rng(29);
  ComplexMatrix a = random_matrix(3, rng);
  EXPECT_EQ(max_abs(tensor_product(a, ComplexMatrix::Identity(1, 1)) - a), 0.0);
  ComplexMatrix p0 = diag({1.0, 0.0}), p1 = diag({0.0, 1.0});
  ComplexMatrix t = tensor_product(p0, p1);
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(1, 1) = 1.0;
  EXPECT_EQ(max_abs(t - expect), 0.0);
  ComplexMatrix b = random_matrix(3, rng);
  EXPECT_LE(std::abs(tensor_product(a, b).trace() - a.trace() * b.trace()), 1e-12);
}

TEST(PartialTrace, ProductStates) {
  std::mt19937_64 rng(31);
  ComplexMatrix a = random_matrix(4, rng), b = random_matrix(4, rng);
  ComplexMatrix ab = tensor_product(a, b);
  EXPECT_LE(max_abs(partial_trace(ab, 4, 4, Keep::First) - b.trace() * a), 1e-12);
  EXPECT_LE(max_abs(partial_trace(ab, 4, 4, Keep::Second) - a.trace() * b), 1e-12);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  ComplexMatrix rho = psi * psi.adjoint();
  EXPECT_LE(max_abs(partial_trace(rho, 2, 2, Keep::First) - 0.5 * ComplexMatrix::Identity(2, 2)),
            1e-15);
}

TEST(PartialTrace, PreservesTraceAndChecksDims) {
  std::mt19937_64 rng(37);
  ComplexMatrix x = random_matrix(6, rng);
  EXPECT_LE(std::abs(partial_trace(x, 2, 3, Keep::First).trace() - x.trace()), 1e-12);
  EXPECT_LE(std::abs(partial_trace(x, 2, 3, Keep::Second).trace() - x.trace()), 1e-12);
  EXPECT_THROW(partial_trace(x, 2, 2, Keep::First), PreconditionError);
}

TEST(SparsityBlocks, UnionOfPatterns) {
  ComplexMatrix a = ComplexMatrix::Zero(5, 5), b = ComplexMatrix::Zero(5, 5);
  a(0, 3) = a(3, 0) = 1.0;
  b(3, 4) = b(4, 3) = 1.0;
  auto blocks = sparsity_blocks({&a, &b});
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[0], (std::vector<Eigen::Index>{0, 3, 4}));
  EXPECT_EQ(blocks[1], (std::vector<Eigen::Index>{1}));
  EXPECT_EQ(blocks[2], (std::vector<Eigen::Index>{2}));
}
