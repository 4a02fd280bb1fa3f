#include "cvqi/closedform.hpp"

#include <cmath>

#include "cvqi/errors.hpp"

namespace cvqi {

namespace {

void require_nonneg(double x, const char* what) {
  if (!(x >= 0.0)) throw DomainError(std::string(what) + " must be >= 0");
}

}  // namespace

double kappa_c_coefficient(double n_pr, double n_env) {
  require_nonneg(n_pr, "kappa_c: n_pr");
  require_nonneg(n_env, "kappa_c: n_env");
  const double den = 1.0 + n_env + std::sqrt(n_env * (1.0 + n_env));
  return n_pr * (1.0 + n_env) / (den * den);
}

double kappa_q_coefficient(double n_pr, double n_env) {
  require_nonneg(n_pr, "kappa_q: n_pr");
  require_nonneg(n_env, "kappa_q: n_env");
  const double den = 1.0 + n_env + std::sqrt(n_env * n_pr * (1.0 + n_env) / (1.0 + n_pr));
  return n_pr * (1.0 + n_env) / (den * den);
}

double kappa_c(double r, double n_pr, double n_env) {
  return 1.0 - r * r * kappa_c_coefficient(n_pr, n_env);
}

double kappa_q(double r, double n_pr, double n_env) {
  return 1.0 - r * r * kappa_q_coefficient(n_pr, n_env);
}

double mean_function(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("mean_function: arguments must be >= 0");
  if (x == 0.0 || y == 0.0) return 0.0;
  const double s = std::sqrt(x) + std::sqrt(y);
  return 4.0 * x * y / (s * s);
}

double g_functional(const ProbeSpec& probe, double n_env) {
  if (!(n_env > 0.0)) throw DomainError("g_functional: n_env must be > 0");
  const double g = n_env / (1.0 + n_env);
  const auto& c = probe.coeffs;
  double total = 0.0;
  for (std::size_t n = 0; n + 1 < c.size(); ++n)
    total += static_cast<double>(n + 1) * mean_function(c[n] * c[n], g * c[n + 1] * c[n + 1]);
  return total;
}

double advantage_ratio(double n_pr, double n_env) {
  if (!(n_pr > 0.0)) throw DomainError("advantage_ratio: n_pr must be > 0");
  require_nonneg(n_env, "advantage_ratio: n_env");
  const double base = 1.0 + n_env;
  const double num = base + std::sqrt(n_env * base);
  const double den = base + std::sqrt(n_pr * n_env * base / (1.0 + n_pr));
  const double q = num / den;
  return q * q;
}

AdvantagePoint advantage_point(double n_pr, double n_env) {
  return {n_pr, n_env, advantage_ratio(n_pr, n_env), kappa_c_coefficient(n_pr, n_env),
          kappa_q_coefficient(n_pr, n_env)};
}

std::vector<AdvantagePoint> advantage_grid(const std::vector<double>& n_pr_values,
                                           const std::vector<double>& n_env_values) {
  std::vector<AdvantagePoint> out;
  out.reserve(n_pr_values.size() * n_env_values.size());
  for (double np : n_pr_values)
    for (double ne : n_env_values) out.push_back(advantage_point(np, ne));
  return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("log_space: bounds must be > 0");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace cvqi
