#pragma once

// Discrimination bounds: Helstrom, exact quantum Chernoff, and the
// low-reflectivity Chernoff expansion.

#include <cstddef>
#include <functional>
#include <vector>

#include "cvqi/fock.hpp"
#include "cvqi/illumination.hpp"
#include "cvqi/linalg.hpp"

namespace cvqi {

struct BoundDiagnostics {
  double clipped_eigenmass = 0.0;
  std::size_t clipped_count = 0;
  double truncation_tail = 0.0;
  std::size_t iterations = 0;
  std::size_t blocks = 0;
};

struct BoundResult {
  double value = 0.0;
  double s_opt = 0.0;
  BoundDiagnostics diagnostics;
};

/// Hermitian operator stored as dense diagonal blocks over disjoint index sets.
struct BlockOperator {
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<ComplexMatrix> values;
  std::vector<std::size_t> block_of;  // per index
  std::vector<Eigen::Index> position; // within its block

  Complex at(Eigen::Index i, Eigen::Index j) const;
  ComplexMatrix dense() const;
};

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  std::size_t iterations = 0;
};

/// Golden-section search on [lo, hi] down to an interval of width `tol`.
/// The endpoints are evaluated too and win if lower.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol);

/// (a^p - b^p) / (a - b) with the support convention 0^p = 0; equal
/// arguments give the derivative p a^{p-1}.
double power_divided_difference(double a, double b, double p);

/// Spectral data of a state pair for repeated evaluation of
/// s -> tr(rho1^s rho0^{1-s}). The pair is split into the connected
/// components of its joint sparsity pattern and each block is diagonalized
/// once.
class ChernoffSpectrum {
 public:
  ChernoffSpectrum(const ComplexMatrix& rho0, const ComplexMatrix& rho1);

  double objective(double s) const;

  /// Gradients of the objective at fixed s with respect to rho0 and rho1:
  /// d objective = Re tr(d_rho0 . drho0) + Re tr(d_rho1 . drho1).
  struct Sensitivity {
    BlockOperator d_rho0;
    BlockOperator d_rho1;
  };
  Sensitivity sensitivity(double s) const;

  std::size_t block_count() const { return blocks_.size(); }
  std::size_t clipped_count() const { return clipped_count_; }
  double clipped_mass() const { return clipped_mass_; }

 private:
  struct Block {
    std::vector<Eigen::Index> index;
    PsdSpectrum rho0;
    PsdSpectrum rho1;
    RealMatrix overlap;  // |<v1_j | v0_k>|^2
  };
  std::vector<Block> blocks_;
  std::vector<std::size_t> block_of_;
  std::vector<Eigen::Index> position_;
  std::size_t clipped_count_ = 0;
  double clipped_mass_ = 0.0;
};

inline constexpr double kChernoffSTolerance = 1e-6;

/// p_err = (1 - ||rho0 - rho1||_1 / 2) / 2 at uniform prior.
BoundResult helstrom(const ComplexMatrix& rho0, const ComplexMatrix& rho1);
BoundResult helstrom(const StatePair& pair);

/// Helstrom error together with d p_err / d rho0 and d p_err / d rho1.
struct HelstromSensitivity {
  double p_err = 0.0;
  BlockOperator d_rho0;
  BlockOperator d_rho1;
};
HelstromSensitivity helstrom_sensitivity(const ComplexMatrix& rho0, const ComplexMatrix& rho1);

/// kappa = min_{s in [0,1]} tr(rho1^s rho0^{1-s}).
BoundResult chernoff_exact(const ComplexMatrix& rho0, const ComplexMatrix& rho1,
                           double s_tol = kChernoffSTolerance);
BoundResult chernoff_exact(const StatePair& pair, double s_tol = kChernoffSTolerance);

/// Eigenvalues and eigenvectors of rho0. An empty `vectors` matrix means the
/// standard basis.
struct Rho0Eigensystem {
  RealVector values;
  ComplexMatrix vectors;
};

Rho0Eigensystem diagonal_eigensystem(const RealVector& diagonal);
Rho0Eigensystem eigensystem_of(const ComplexMatrix& rho0);

/// Environment eigensystem (single mode) on the environment space.
Rho0Eigensystem environment_eigensystem(const EnvironmentSpec& env);

/// Product eigensystem lambda_m c_n^2 on environment (x) idler.
Rho0Eigensystem product_eigensystem(const EnvironmentSpec& env, const ProbeSpec& probe);

/// (1 - kappa) / r^2 of the low-reflectivity expansion.
double low_r_coefficient(const ComplexMatrix& delta, const Rho0Eigensystem& rho0);

/// kappa = 1 - (r^2/2) sum_jk |<phi_j|delta|phi_k>|^2 / (sqrt(l_j) + sqrt(l_k))^2.
BoundResult chernoff_low_r(const ComplexMatrix& delta, const Rho0Eigensystem& rho0, double r);

}  // namespace cvqi
