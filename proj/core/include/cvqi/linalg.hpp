#pragma once

// Dense complex linear algebra kernel.
//
// Index convention for composite systems is fixed here and used everywhere:
// a basis state |i_A, i_B> of A (x) B sits at flat index i_A * dim_B + i_B.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvqi/errors.hpp"

namespace cvqi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace tol {
/// Relative Hermiticity tolerance: max|A - A^dagger| <= kHermitian * max|A|.
inline constexpr double kHermitian = 1e-12;
/// Eigenvalues below this are clipped to zero when a PSD operator is powered.
inline constexpr double kEigenFloor = 1e-14;
/// Eigenvalues below minus this are a PSD violation.
inline constexpr double kNegativeEigen = 1e-10;
}  // namespace tol

/// Largest |A(i,j) - conj(A(j,i))| together with the offending pair.
struct HermiticityDefect {
  double value = 0.0;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
};

HermiticityDefect hermiticity_defect(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double rel_tol = tol::kHermitian);

/// Throws PreconditionError naming the worst entry pair if `a` is not Hermitian.
void require_hermitian(const ComplexMatrix& a, const std::string& what);

struct HermitianEigen {
  RealVector values;     // descending
  ComplexMatrix vectors; // columns, orthonormal
  int sweeps = 0;
};

/// Eigendecomposition A = V diag(w) V^dagger by cyclic Jacobi.
///
/// Rotations are skipped only when |a_pq| <= eps * sqrt(|a_pp a_qq|), which
/// gives small eigenvalues of graded positive definite matrices to high
/// relative accuracy (density matrices with geometric spectra are the main
/// client). Real input (zero imaginary parts) runs a real-arithmetic sweep.
HermitianEigen hermitian_eig(const ComplexMatrix& a);

/// Spectrum of a PSD operator with the eigenvalue floor applied.
struct PsdSpectrum {
  RealVector values;  // clipped, descending, >= 0
  ComplexMatrix vectors;
  std::size_t clipped_count = 0;
  double clipped_mass = 0.0;  // sum of |w| over clipped eigenvalues
};

PsdSpectrum psd_spectrum(const ComplexMatrix& a);

/// x^s with the support convention 0^s = 0 for every s in [0,1].
double support_power(double x, double s);

struct MatrixPower {
  ComplexMatrix value;
  std::size_t clipped_count = 0;
  double clipped_mass = 0.0;
};

/// A^s for PSD A and s in [0,1] via the eigendecomposition.
MatrixPower matrix_power(const ComplexMatrix& a, double s);

/// exp(K) for anti-Hermitian K, built from the spectrum of the Hermitian iK.
ComplexMatrix matrix_exp_skew(const ComplexMatrix& k);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& a);

/// Kronecker product; (i_A, i_B) -> i_A * dim_B + i_B.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Keep { First, Second };

/// Partial trace of an operator on C^d1 (x) C^d2, keeping one factor.
ComplexMatrix partial_trace(const ComplexMatrix& a, std::size_t d1, std::size_t d2,
                            Keep keep);

/// max_ij |A(i,j)|
double max_abs(const ComplexMatrix& a);

/// Connected components of the union of the exact sparsity patterns of the
/// given square matrices. Each component is a sorted list of indices;
/// components are ordered by their smallest index.
std::vector<std::vector<Eigen::Index>> sparsity_blocks(
    const std::vector<const ComplexMatrix*>& matrices);

/// Principal submatrix on an index set.
ComplexMatrix principal_submatrix(const ComplexMatrix& a,
                                  const std::vector<Eigen::Index>& idx);

}  // namespace cvqi
