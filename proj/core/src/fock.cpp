#include "cvqi/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvqi {

namespace {

void require_tail(double tail, double tol, const char* what, std::size_t dim) {
  if (tail > tol) {
    std::ostringstream os;
    os << what << ": truncation tail " << tail << " exceeds " << tol << " at dim " << dim
       << "; increase the dimension";
    throw TruncationError(os.str());
  }
}

// Poisson tail P(N >= dim) for mean mu, summed term by term.
double poisson_tail(double mu, std::size_t dim) {
  double p = std::exp(-mu);
  for (std::size_t n = 1; n <= dim; ++n) p *= mu / static_cast<double>(n);
  // p is now P(N = dim)
  double tail = 0.0;
  for (std::size_t n = dim; n < dim + 100000; ++n) {
    tail += p;
    p *= mu / static_cast<double>(n + 1);
    if (static_cast<double>(n) > mu && p < 1e-40 * std::max(tail, 1e-300)) break;
    if (p == 0.0) break;
  }
  return tail;
}

}  // namespace

FockSpace::FockSpace(std::size_t dim) : dim_(dim) {
  if (dim < 2) throw PreconditionError("FockSpace: dimension must be at least 2");
}

DensityCheck check_density(const DensityOperator& rho) {
  DensityCheck out;
  out.trace_error = std::abs(rho.matrix.trace() - Complex(1.0));
  out.hermiticity = max_abs(rho.matrix - rho.matrix.adjoint());
  const auto eig = hermitian_eig(0.5 * (rho.matrix + rho.matrix.adjoint()));
  out.min_eigenvalue = eig.values.size() ? eig.values(eig.values.size() - 1) : 0.0;
  return out;
}

std::string to_string(ProbeKind kind) {
  return kind == ProbeKind::SingleMode ? "single_mode" : "two_mode_schmidt";
}

ProbeKind probe_kind_from_string(const std::string& s) {
  if (s == "single_mode") return ProbeKind::SingleMode;
  if (s == "two_mode_schmidt") return ProbeKind::TwoModeSchmidt;
  throw PreconditionError("unknown probe kind '" + s + "'");
}

double norm_squared(const std::vector<double>& c) {
  double s = 0.0;
  for (double x : c) s += x * x;
  return s;
}

double mean_photon_number(const std::vector<double>& c) {
  double s = 0.0;
  for (std::size_t n = 0; n < c.size(); ++n) s += static_cast<double>(n) * c[n] * c[n];
  return s;
}

void validate(const ProbeSpec& probe) {
  if (probe.coeffs.size() < 2) throw PreconditionError("probe: need at least 2 coefficients");
  for (std::size_t n = 0; n < probe.coeffs.size(); ++n) {
    if (!(probe.coeffs[n] >= 0.0)) {
      std::ostringstream os;
      os << "probe: coefficient c_" << n << " = " << probe.coeffs[n] << " is negative";
      throw PreconditionError(os.str());
    }
  }
  const double norm = norm_squared(probe.coeffs);
  if (std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "probe: sum c_n^2 = " << norm << " differs from 1";
    throw PreconditionError(os.str());
  }
  const double mean = mean_photon_number(probe.coeffs);
  if (std::abs(mean - probe.n_pr) > 1e-8) {
    std::ostringstream os;
    os << "probe: mean photon number " << mean << " differs from n_pr = " << probe.n_pr;
    throw PreconditionError(os.str());
  }
}

ProbeSpec make_probe(ProbeKind kind, std::vector<double> coeffs) {
  for (double x : coeffs)
    if (!(x >= 0.0)) throw PreconditionError("make_probe: coefficients must be nonnegative");
  const double norm = std::sqrt(norm_squared(coeffs));
  if (norm == 0.0) throw PreconditionError("make_probe: zero coefficient vector");
  for (double& x : coeffs) x /= norm;
  ProbeSpec p;
  p.kind = kind;
  p.n_pr = mean_photon_number(coeffs);
  p.coeffs = std::move(coeffs);
  return p;
}

ComplexMatrix annihilation(const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix number_operator(const FockSpace& space) {
  const auto d = static_cast<Eigen::Index>(space.dim());
  ComplexMatrix n = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

ProbeSpec coherent_state(const FockSpace& space, double alpha, double tail_tol) {
  if (!(alpha >= 0.0)) throw DomainError("coherent_state: alpha must be >= 0");
  const std::size_t d = space.dim();
  std::vector<double> c(d);
  c[0] = std::exp(-0.5 * alpha * alpha);
  for (std::size_t n = 1; n < d; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  const double tail = alpha == 0.0 ? 0.0 : poisson_tail(alpha * alpha, d);
  require_tail(tail, tail_tol, "coherent_state", d);
  auto p = make_probe(ProbeKind::SingleMode, std::move(c));
  p.tail_mass = tail;
  return p;
}

EnvironmentSpec thermal_env(const FockSpace& space, double n_env, double tail_tol) {
  if (!(n_env >= 0.0)) throw DomainError("thermal_env: n_env must be >= 0");
  const std::size_t d = space.dim();
  EnvironmentSpec env;
  env.n_env = n_env;
  env.lambdas.resize(d);
  const double g = n_env / (1.0 + n_env);
  double lam = 1.0 / (1.0 + n_env);
  for (std::size_t m = 0; m < d; ++m) {
    env.lambdas[m] = lam;
    lam *= g;
  }
  env.tail_mass = std::pow(g, static_cast<double>(d));
  require_tail(env.tail_mass, tail_tol, "thermal_env", d);
  return env;
}

ProbeSpec tmsv_probe(const FockSpace& space, double n_pr, double tail_tol) {
  if (!(n_pr >= 0.0)) throw DomainError("tmsv_probe: n_pr must be >= 0");
  const std::size_t d = space.dim();
  const double g = n_pr / (1.0 + n_pr);
  std::vector<double> c(d);
  double p = 1.0 / (1.0 + n_pr);
  for (std::size_t n = 0; n < d; ++n) {
    c[n] = std::sqrt(p);
    p *= g;
  }
  const double tail = std::pow(g, static_cast<double>(d));
  require_tail(tail, tail_tol, "tmsv_probe", d);
  auto probe = make_probe(ProbeKind::TwoModeSchmidt, std::move(c));
  probe.tail_mass = tail;
  return probe;
}

DensityOperator probe_to_density(const ProbeSpec& probe) {
  const auto d = static_cast<Eigen::Index>(probe.dim());
  if (probe.kind == ProbeKind::SingleMode) {
    RealVector psi = Eigen::Map<const RealVector>(probe.coeffs.data(), d);
    return {(psi * psi.transpose()).cast<Complex>(), {probe.dim()}};
  }
  ComplexMatrix rho = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index n = 0; n < d; ++n)
    for (Eigen::Index m = 0; m < d; ++m)
      rho(n * d + n, m * d + m) = probe.coeffs[static_cast<std::size_t>(n)] *
                                  probe.coeffs[static_cast<std::size_t>(m)];
  return {rho, {probe.dim(), probe.dim()}};
}

std::size_t thermal_dim_for_tail(double n_mean, double tol) {
  if (n_mean <= 0.0) return 2;
  const double g = n_mean / (1.0 + n_mean);
  const double dim = std::ceil(std::log(tol) / std::log(g));
  return std::max<std::size_t>(2, static_cast<std::size_t>(dim));
}

std::size_t coherent_dim_for_tail(double n_mean, double tol) {
  if (n_mean <= 0.0) return 2;
  std::size_t d = 2;
  while (poisson_tail(n_mean, d) > tol) ++d;
  return d;
}

}  // namespace cvqi
