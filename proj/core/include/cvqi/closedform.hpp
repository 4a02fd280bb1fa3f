#pragma once

// Closed-form low-reflectivity Chernoff exponents for coherent and TMSV
// probes in a thermal environment, and the two-mode advantage ratio.

#include <vector>

#include "cvqi/fock.hpp"

namespace cvqi {

/// Coherent probe: 1 - r^2 n_pr (1+n_env) / [1 + n_env + sqrt(n_env (1+n_env))]^2
double kappa_c(double r, double n_pr, double n_env);

/// TMSV probe:
/// 1 - r^2 n_pr (1+n_env) / [1 + n_env + sqrt(n_env n_pr (1+n_env) / (1+n_pr))]^2
double kappa_q(double r, double n_pr, double n_env);

/// (1 - kappa_c) / r^2, independent of r.
double kappa_c_coefficient(double n_pr, double n_env);
/// (1 - kappa_q) / r^2, independent of r.
double kappa_q_coefficient(double n_pr, double n_env);

/// M(x, y) = 4xy / (sqrt(x) + sqrt(y))^2, with M(x, 0) = M(0, y) = 0.
double mean_function(double x, double y);

/// G = sum_n (n+1) M(c_n^2, g c_{n+1}^2), g = n_env / (1 + n_env).
double g_functional(const ProbeSpec& probe, double n_env);

/// log kappa_q / log kappa_c in the small-r limit.
double advantage_ratio(double n_pr, double n_env);

struct AdvantagePoint {
  double n_pr = 0.0;
  double n_env = 0.0;
  double ratio = 1.0;
  double kappa_c_coeff = 0.0;
  double kappa_q_coeff = 0.0;
};

AdvantagePoint advantage_point(double n_pr, double n_env);

/// Row-major grid: n_pr outer, n_env inner.
std::vector<AdvantagePoint> advantage_grid(const std::vector<double>& n_pr_values,
                                           const std::vector<double>& n_env_values);

/// count points from lo to hi, equally spaced in log10.
std::vector<double> log_space(double lo, double hi, std::size_t count);

}  // namespace cvqi
