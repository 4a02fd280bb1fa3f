#pragma once

// Truncated Fock spaces, probe and environment states.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cvqi/linalg.hpp"

namespace cvqi {

/// Photon numbers 0..dim-1.
class FockSpace {
 public:
  explicit FockSpace(std::size_t dim);
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
};

/// Density matrix plus the dimensions of the modes it lives on, in
/// tensor-product order.
struct DensityOperator {
  ComplexMatrix matrix;
  std::vector<std::size_t> mode_dims;
};

struct DensityCheck {
  double trace_error = 0.0;     // |tr rho - 1|
  double min_eigenvalue = 0.0;
  double hermiticity = 0.0;     // max |rho - rho^dagger|
};

DensityCheck check_density(const DensityOperator& rho);

enum class ProbeKind { SingleMode, TwoModeSchmidt };

std::string to_string(ProbeKind kind);
ProbeKind probe_kind_from_string(const std::string& s);

/// Pure probe with real nonnegative Fock (or Schmidt) coefficients.
///
/// Single mode: sum_n c_n |n>. Two-mode Schmidt form: sum_n c_n |n, n> with
/// the signal mode first.
struct ProbeSpec {
  ProbeKind kind = ProbeKind::SingleMode;
  std::vector<double> coeffs;
  double n_pr = 0.0;       // mean photon number of the (renormalized) coefficients
  double tail_mass = 0.0;  // probability outside the truncation, before renormalization

  std::size_t dim() const { return coeffs.size(); }
};

/// Checks sum c^2 = 1 (1e-10), sum n c^2 = n_pr (1e-8), c_n >= 0.
void validate(const ProbeSpec& probe);

double norm_squared(const std::vector<double>& c);
double mean_photon_number(const std::vector<double>& c);

/// Build a probe from raw coefficients: normalizes and records the realized
/// energy. Negative entries are rejected.
ProbeSpec make_probe(ProbeKind kind, std::vector<double> coeffs);

/// Fock-diagonal environment, sum_m lambda_m |m><m|. Not renormalized.
struct EnvironmentSpec {
  std::vector<double> lambdas;
  std::optional<double> n_env;  // set for thermal states
  double tail_mass = 0.0;

  std::size_t dim() const { return lambdas.size(); }
};

inline constexpr double kProbeTailTolerance = 1e-10;
inline constexpr double kEnvTailTolerance = 1e-10;

ComplexMatrix annihilation(const FockSpace& space);
ComplexMatrix number_operator(const FockSpace& space);

/// c_n = exp(-alpha^2/2) alpha^n / sqrt(n!), renormalized on the truncation.
ProbeSpec coherent_state(const FockSpace& space, double alpha,
                         double tail_tol = kProbeTailTolerance);

/// lambda_m = n^m / (1+n)^{m+1}; tail must not exceed tail_tol.
EnvironmentSpec thermal_env(const FockSpace& space, double n_env,
                            double tail_tol = kEnvTailTolerance);

/// Two-mode squeezed vacuum, c_n = sqrt(n^n / (n+1)^{n+1}).
ProbeSpec tmsv_probe(const FockSpace& space, double n_pr,
                     double tail_tol = kProbeTailTolerance);

/// |psi><psi| on the signal (single mode) or signal (x) idler (Schmidt form).
DensityOperator probe_to_density(const ProbeSpec& probe);

/// Smallest dimension whose geometric tail (n/(1+n))^dim is below tol.
std::size_t thermal_dim_for_tail(double n_mean, double tol);

/// Smallest dimension whose coherent (Poisson) tail is below tol.
std::size_t coherent_dim_for_tail(double n_mean, double tol);

}  // namespace cvqi
