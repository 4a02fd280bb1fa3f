#pragma once

// Named numeric checks shared by `cvqi verify` and the acceptance runner.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cvqi/fock.hpp"
#include "cvqi_cli/commands.hpp"

namespace cvqi::cli {

struct CheckGroup {
  std::string name;
  std::vector<Check> checks;
  nlohmann::json details = nlohmann::json::object();

  void add(std::string check_name, double value, const std::string& relation, double threshold);
  bool pass() const;
};

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Low-r and exact kappa against the closed form at (n_pr, n_env, r) = (0.1, 0.5, 0.01).
CheckGroup pipeline_checks(ProbeKind kind, std::size_t dim_sig, std::size_t dim_env);

/// Slope of |kappa_exact - kappa_low_r| over r in {3e-2, 1e-2, 3e-3}, target 3 +- 0.2.
CheckGroup scaling_checks(ProbeKind kind, std::size_t dim_sig, std::size_t dim_env);

/// Advantage-ratio limits and monotonicity on a 60 x 60 grid.
CheckGroup advantage_checks();

CheckGroup coherent_optimum_checks(std::size_t dim, std::uint64_t seed);

/// Two-mode low-r minimization recovers the TMSV.
CheckGroup tmsv_optimum_checks(std::size_t dim_sig, std::size_t dim_env);

CheckGroup g_functional_checks(std::size_t dim, std::uint64_t seed);

/// Properties of a non-optimality sweep: sign, zero at r = 0, dominance, convergence.
CheckGroup nonoptimality_checks(const std::vector<NonOptimalityRow>& rows);

/// verify_schmidt_reduction at dims (4, 4) and reflectivity r.
CheckGroup appendix_checks(double r, double tolerance, std::size_t trials, std::uint64_t seed);

/// Eigensolver residuals, beam-splitter unitarity and number conservation,
/// trace preservation, and the slope-2 linearization error.
CheckGroup kernel_checks(std::uint64_t seed);

}  // namespace cvqi::cli
