#pragma once

// Received states of the illumination channel.
//
// The object is a beam splitter U = exp(theta (a^dag b - a b^dag)) with
// r = sin(theta), a the signal mode and b the environment mode. The detected
// mode is the environment-port output b: at r = 0 it carries the environment
// unchanged, at r = 1 it carries the probe. The signal-port output is traced
// out.
//
// The channel is built block by block in total photon number N = n_a + n_b.
// Each block is a complete invariant subspace, so the unitary on it is exact;
// with a signal truncated at d_s and an environment at d_e the detected mode
// needs d_s + d_e - 1 levels and nothing is lost at the edge.

#include <cstddef>
#include <string>
#include <vector>

#include "cvqi/fock.hpp"
#include "cvqi/linalg.hpp"

namespace cvqi {

struct ScenarioParams {
  double r = 0.0;
  double n_pr = 0.0;
  double n_env = 0.0;
  std::size_t dim_sig = 20;
  std::size_t dim_idler = 0;  // 0 for single-mode probes
  std::size_t dim_env = 60;

  double theta() const;
  void validate() const;
};

struct ModeLayout {
  std::vector<std::string> modes;  // tensor-product order
  std::vector<std::size_t> dims;
};

struct ChannelDiagnostics {
  double input_tail = 0.0;      // probe + environment truncation tails
  double trace_defect = 0.0;    // |tr rho1 - tr rho0|
  double spill_mass = 0.0;      // weight of rho1 on detected levels >= dim_env
  bool tail_warning = false;    // input_tail above the soft tolerance
};

struct StatePair {
  DensityOperator rho0;
  DensityOperator rho1;
  ModeLayout layout;
  ChannelDiagnostics diagnostics;
};

inline constexpr double kTailWarning = 1e-10;
inline constexpr double kTailHardLimit = 1e-6;

struct BeamSplitter {
  ComplexMatrix unitary;                  // on signal (x) environment
  std::vector<std::size_t> edge_blocks;   // total photon numbers cut by the truncation
};

/// exp(theta (a^dag b - a b^dag)) on the joint truncated space via
/// matrix_exp_skew. Blocks with N >= min(d_s, d_e) are truncated and listed
/// in edge_blocks.
BeamSplitter beam_splitter_unitary(const FockSpace& sig, const FockSpace& env, double r);

/// Exact real orthogonal block of the beam splitter at total photon number
/// `total`, in the basis |j, total - j>, j = 0..total.
RealMatrix beam_splitter_block(std::size_t total, double theta);

/// Action of the reflection channel on signal operators.
///
/// element(n, n2, b) is <b| Phi(|n><n2|) |b - n + n2> for the detected mode;
/// all other matrix elements of Phi(|n><n2|) vanish.
class ReflectionChannel {
 public:
  ReflectionChannel(std::size_t dim_sig, const EnvironmentSpec& env, double r);

  std::size_t dim_sig() const { return dim_sig_; }
  std::size_t dim_env() const { return dim_env_; }
  std::size_t output_dim() const { return dim_out_; }
  double r() const { return r_; }

  double element(std::size_t n, std::size_t n2, std::size_t b) const {
    return table_[(n * dim_sig_ + n2) * dim_out_ + b];
  }

  /// Phi(|n><n2|) as a dense matrix on the detected mode.
  ComplexMatrix apply_basis(std::size_t n, std::size_t n2) const;

  /// Phi(x) for a signal operator x.
  ComplexMatrix apply(const ComplexMatrix& x) const;

 private:
  std::size_t dim_sig_;
  std::size_t dim_env_;
  std::size_t dim_out_;
  double r_;
  std::vector<double> table_;
};

/// Environment operator embedded in the detected-mode space (zero padded).
ComplexMatrix environment_state(const EnvironmentSpec& env, std::size_t out_dim);

StatePair received_states_single(const ProbeSpec& probe, const EnvironmentSpec& env,
                                 const ScenarioParams& params);

/// Layout: detected mode (x) idler, index b * d_idler + i.
StatePair received_states_two(const ProbeSpec& probe, const EnvironmentSpec& env,
                              const ScenarioParams& params);

/// Same as above but reusing a precomputed channel (repeated evaluation at
/// fixed r, as in probe optimization).
StatePair received_states_single(const ProbeSpec& probe, const EnvironmentSpec& env,
                                 const ReflectionChannel& channel);
StatePair received_states_two(const ProbeSpec& probe, const EnvironmentSpec& env,
                              const ReflectionChannel& channel);

/// General bipartite pure probe sum_{n,i} psi(n, i) |n>_signal |i>_idler.
StatePair received_states_bipartite(const ComplexMatrix& psi, const EnvironmentSpec& env,
                                    double r);

/// Same as above but reusing a precomputed channel.
StatePair received_states_bipartite(const ComplexMatrix& psi, const EnvironmentSpec& env,
                                    const ReflectionChannel& channel);

/// sum_n c_{n+1} c_n sqrt(n+1)
double gamma(const ProbeSpec& probe);

/// Derivative of rho1 at r = 0 for a single-mode probe, on the environment space.
ComplexMatrix delta_rho_single(const ProbeSpec& probe, const EnvironmentSpec& env);

/// Derivative of rho1 at r = 0 for a Schmidt probe, on environment (x) idler.
ComplexMatrix delta_rho_two(const ProbeSpec& probe, const EnvironmentSpec& env);

/// Embed an operator on (environment [x] idler) into the detected space of a
/// StatePair, i.e. pad the environment factor from dim_env to out_dim levels.
ComplexMatrix embed_environment_operator(const ComplexMatrix& op, std::size_t dim_env,
                                         std::size_t out_dim, std::size_t dim_idler);

}  // namespace cvqi
