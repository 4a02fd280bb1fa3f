#pragma once

// Probe optimization over nonnegative coefficient vectors with fixed norm and
// energy, Lagrange-condition residuals, and Gaussian non-optimality.
//
// Feasible set: c >= 0, sum c_n^2 = 1, sum n c_n^2 = n_pr. Iterates move along
// the projected gradient and are pulled back onto the set by c -> |c|
// followed by an exponential tilt p_n ~ c_n^2 exp(t n) that restores the
// energy exactly. Taking |c| rather than clipping keeps coefficients off
// exact zeros, where every objective here has a spurious flat direction.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cvqi/bounds.hpp"
#include "cvqi/fock.hpp"
#include "cvqi/illumination.hpp"
#include "cvqi/linalg.hpp"

namespace cvqi {

struct ConstraintSet {
  double norm_target = 1.0;
  double energy_target = 0.0;
  double tolerance = 1e-9;
};

/// max(|sum c^2 - 1|, |sum n c^2 - n_pr|, max(-c_n, 0))
double constraint_violation(const RealVector& c, const ConstraintSet& constraints);

/// Feasible point from v: |v|, normalized and tilted to the target energy.
/// Throws PreconditionError when the support of v cannot carry the energy
/// (e.g. all weight on |0> with n_pr > 0).
RealVector retract_to_constraints(const RealVector& v, double energy);

/// Component of g orthogonal to c and N c.
RealVector tangent_projection(const RealVector& c, const RealVector& g);

/// First-order optimality measure for minimization: tangent gradient on the
/// support, and the ascent part on coordinates pinned at zero.
double kkt_residual(const RealVector& c, const RealVector& g);

/// Random feasible coefficient vector of length dim, deterministic in rng.
RealVector random_feasible(std::size_t dim, double energy, std::mt19937_64& rng);

enum class ProbeMode { Single, Two };
enum class ObjectiveKind { Exact, LowR, Helstrom };

std::string to_string(ProbeMode mode);
std::string to_string(ObjectiveKind kind);
ProbeMode probe_mode_from_string(const std::string& s);
ObjectiveKind objective_kind_from_string(const std::string& s);

struct Evaluation {
  double value = 0.0;     // objective (minimized)
  RealVector gradient;    // d value / d c
  double bound = 0.0;     // kappa (Exact, LowR) or p_err (Helstrom)
  double s_opt = 0.5;
};

/// Scalar objective on coefficient vectors.
class ProbeObjective {
 public:
  virtual ~ProbeObjective() = default;
  virtual Evaluation evaluate(const RealVector& c) const = 0;
  virtual std::size_t dim() const = 0;
};

/// -gamma(c)
std::unique_ptr<ProbeObjective> gamma_objective(std::size_t dim);

/// -G(c) at g = n_env / (1 + n_env)
std::unique_ptr<ProbeObjective> g_objective(std::size_t dim, double n_env);

/// Bound objective on the received-state pipeline of the given mode.
///
/// LowR:     -(1 - kappa_low_r) / r^2 (independent of r; bound uses params.r)
/// Exact:    log(kappa_exact) / r^2
/// Helstrom: (p_err - 1/2) / r
/// At r = 0 the Exact and Helstrom objectives are identically zero.
std::unique_ptr<ProbeObjective> bound_objective(ProbeMode mode, ObjectiveKind kind,
                                                const ScenarioParams& params);

struct OptimizerOptions {
  std::size_t max_iterations = 5000;
  std::size_t stall_window = 10;
  double stall_tolerance = 1e-12;    // relative objective change over the window
  double gradient_tolerance = 1e-11; // kkt residual
  std::size_t restarts = 5;          // perturbed restarts when r >= restart_min_r
  double restart_min_r = 0.2;
  double restart_scale = 0.3;        // relative log-normal perturbation of the start
  std::uint64_t seed = 0;
};

struct OptResult {
  ProbeSpec probe;
  double objective = 0.0;
  double kappa = 1.0;  // bound value at the optimum (p_err for Helstrom)
  double s_opt = 0.5;
  bool converged = false;
  std::size_t iterations = 0;
  double kkt_residual = 0.0;
  std::uint64_t seed = 0;
  std::string message;
};

/// Local minimization from a feasible start.
OptResult minimize_objective(const ProbeObjective& objective, ProbeKind kind,
                             const RealVector& start, double energy,
                             const OptimizerOptions& options = {});

/// Probe maximizing gamma; default start is the geometric (thermal-like)
/// feasible vector.
OptResult maximize_gamma(double n_pr, std::size_t dim, const OptimizerOptions& options = {});

/// Schmidt vector maximizing G.
OptResult maximize_g(double n_pr, double n_env, std::size_t dim,
                     const std::optional<RealVector>& start = std::nullopt,
                     const OptimizerOptions& options = {});

/// Minimize the bound of `kind` over probes of the given mode, starting from
/// `start` (dimension params.dim_sig). With r >= options.restart_min_r the
/// best of the start and `restarts` perturbed copies is returned.
OptResult minimize_kappa(ProbeMode mode, const ScenarioParams& params, const ProbeSpec& start,
                         ObjectiveKind kind, const OptimizerOptions& options = {});

struct Multipliers {
  double mu1 = 0.0;
  double mu2 = 0.0;
};

/// max_n |c_{n+1} sqrt(n+1) + c_{n-1} sqrt(n) + 2 c_n (mu1 + n mu2)|
double lagrange_residual_theorem1(const ProbeSpec& probe, double mu1, double mu2);

/// Least-squares multipliers for the gamma stationarity equations.
Multipliers fit_multipliers_theorem1(const ProbeSpec& probe);
double lagrange_residual_theorem1(const ProbeSpec& probe);

/// dG/dc at g = n_env / (1 + n_env).
RealVector g_gradient(const std::vector<double>& c, double n_env);

/// Stationarity residual of G with least-squares multipliers:
/// max_k |dG/dc_k + 2 c_k (mu1 + k mu2)|. A single-point support gives 0.
double lagrange_residual_lemma1(const ProbeSpec& probe, double n_env);

struct NonOptimality {
  double kappa_gaussian = 1.0;
  double kappa_opt = 1.0;
  double value = 0.0;  // 1 - log kappa_gaussian / log kappa_opt
  bool converged = true;
  OptResult optimum;
};

/// Gaussian probe (coherent or TMSV at params.n_pr) against the exact-objective
/// optimum started from it. kappa_opt is capped at kappa_gaussian.
NonOptimality gaussian_non_optimality(ProbeMode mode, const ScenarioParams& params,
                                      const OptimizerOptions& options = {});

/// Gaussian probe for the mode at the scenario's energy and signal dimension.
ProbeSpec gaussian_probe(ProbeMode mode, const ScenarioParams& params);

/// Thermal environment for the scenario.
EnvironmentSpec scenario_environment(const ScenarioParams& params);

}  // namespace cvqi
