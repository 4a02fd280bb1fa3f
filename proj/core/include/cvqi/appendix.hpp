#pragma once

// Schmidt-form reduction for two-mode probes: photon-difference measurement on
// the detected (x) idler space, conditional isometries onto general idler
// states, and a trial-based verification harness.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cvqi/fock.hpp"
#include "cvqi/linalg.hpp"

namespace cvqi {

/// Pi_k = sum_n |n+k, n><n+k, n| on A (x) B (index a * dim_b + b).
struct PovmElement {
  int k = 0;
  std::vector<Eigen::Index> indices;  // basis states with a - b = k, ascending
  std::size_t rank() const { return indices.size(); }
  ComplexMatrix projector(std::size_t dim) const;
};

struct PhotonDifferencePovm {
  std::size_t dim_a = 0;
  std::size_t dim_b = 0;
  std::vector<PovmElement> elements;  // k ascending from -(dim_b-1) to dim_a-1

  std::size_t dim() const { return dim_a * dim_b; }
  const PovmElement& element(int k) const;
  /// max |sum_k Pi_k - I|
  double completeness_residual() const;
};

PhotonDifferencePovm build_povm(std::size_t dim_a, std::size_t dim_b);

/// sum_n c_n |n>_signal |phi_n>_idler with c_n >= 0 and unit (not necessarily
/// orthogonal) phi_n.
struct GeneralProbe {
  std::vector<double> coeffs;
  std::vector<ComplexVector> idler_states;

  std::size_t dim() const { return coeffs.size(); }
  std::size_t dim_idler() const;
  double mean_photon_number() const;
  /// psi(n, i) = c_n phi_n(i)
  ComplexMatrix amplitudes() const;
  /// Smallest eigenvalue of the Gram matrix <phi_m|phi_n>.
  double gram_min_eigenvalue() const;
};

void validate(const GeneralProbe& probe, double tol = 1e-10);

/// phi_n = |n>
GeneralProbe schmidt_as_general(const ProbeSpec& probe);

/// Random feasible c at energy n_pr and Haar-random idler states.
GeneralProbe random_general_probe(std::size_t dim, std::size_t dim_idler, double n_pr,
                                  std::mt19937_64& rng);

struct KrausBranch {
  std::string label;
  ComplexMatrix op;                      // out_dim x in_dim
  std::optional<ComplexMatrix> unitary;  // completed unitary when in_dim == out_dim
};

class QuantumOperation {
 public:
  QuantumOperation(std::size_t in_dim, std::size_t out_dim, std::vector<KrausBranch> branches);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  const std::vector<KrausBranch>& branches() const { return branches_; }

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// max |sum_j K_j^dagger K_j - I|
  double trace_preservation_residual() const;

 private:
  std::size_t in_dim_;
  std::size_t out_dim_;
  std::vector<KrausBranch> branches_;
};

/// Fill the columns of `partial` not flagged in `defined` by Gram-Schmidt over
/// the standard basis in index order. The defined columns must be orthonormal.
ComplexMatrix complete_to_unitary(const ComplexMatrix& partial, const std::vector<bool>& defined,
                                  double tol = 1e-10);

enum class TransformScheme {
  PhotonDifference,  // Pi_k then U_k |n+k, n> = |n+k, phi_n>, any r
  MeasurePrepare,    // r = 1: {Pi_match, I - Pi_match}, then U or prepare phi_n
};

std::string to_string(TransformScheme scheme);

/// Channel from detected (x) Schmidt-idler (dim_a x general.dim()) to
/// detected (x) general idler (dim_a x general.dim_idler()).
QuantumOperation build_transformation(const GeneralProbe& general, std::size_t dim_a,
                                      TransformScheme scheme = TransformScheme::PhotonDifference);

/// 1/2 ||a - b||_1
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

struct ReductionConfig {
  std::size_t dim_sig = 4;
  std::size_t dim_idler = 4;
  std::size_t dim_env = 0;  // 0: smallest dimension with thermal tail <= 1e-10
  double n_env = 0.5;
  double r = 1.0;
  double n_pr = 0.5;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;         // channel-image distances
  double dpi_tolerance = 1e-9;     // kappa(after) >= kappa(before) - tol
  double direct_tolerance = 1e-6;  // min Schmidt kappa <= min general kappa + tol
  bool direct_check = true;
};

struct TrialReport {
  std::uint64_t seed = 0;
  double distance_rho0 = 0.0;
  double distance_rho1 = 0.0;
  std::optional<double> measure_prepare_rho0;  // r = 1 only
  std::optional<double> measure_prepare_rho1;
  double trace_residual = 0.0;
  double kappa_schmidt = 1.0;  // before the channel
  double kappa_after = 1.0;    // on the channel images
  double kappa_general = 1.0;  // on the general-probe states
  double gram_min_eigenvalue = 0.0;
  bool pass = false;
  GeneralProbe probe;
};

struct ReductionReport {
  ReductionConfig config;
  std::size_t dim_env = 0;
  std::vector<TrialReport> trials;
  double max_distance = 0.0;
  double max_trace_residual = 0.0;
  double min_dpi_margin = 0.0;  // min over trials of kappa_after - kappa_schmidt
  std::optional<double> schmidt_min_kappa;
  std::optional<double> general_min_kappa;
  bool direct_pass = true;
  bool pass = false;
};

/// Trial t uses seed config.seed + t.
TrialReport run_reduction_trial(const ReductionConfig& config, std::uint64_t seed);
ReductionReport verify_schmidt_reduction(const ReductionConfig& config);

}  // namespace cvqi
