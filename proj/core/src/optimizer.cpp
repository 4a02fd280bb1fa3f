#include "cvqi/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "cvqi/closedform.hpp"

namespace cvqi {

namespace {

constexpr double kGoldenTolerance = 1e-10;

RealVector as_vector(const std::vector<double>& c) {
  return Eigen::Map<const RealVector>(c.data(), static_cast<Eigen::Index>(c.size()));
}

std::vector<double> as_std(const RealVector& c) { return {c.data(), c.data() + c.size()}; }

ProbeSpec raw_probe(ProbeKind kind, const RealVector& c) {
  ProbeSpec p;
  p.kind = kind;
  p.coeffs = as_std(c);
  p.n_pr = mean_photon_number(p.coeffs);
  return p;
}

RealVector number_weighted(const RealVector& c) {
  RealVector out(c.size());
  for (Eigen::Index n = 0; n < c.size(); ++n) out(n) = static_cast<double>(n) * c(n);
  return out;
}

// Tilt parameter t with sum n w_n exp(t n) / sum w_n exp(t n) = energy.
double solve_tilt(const RealVector& log_w, const std::vector<Eigen::Index>& support,
                  double energy) {
  auto moments = [&](double t) {
    double mx = -std::numeric_limits<double>::infinity();
    for (auto n : support) mx = std::max(mx, log_w(n) + t * static_cast<double>(n));
    double z = 0, m1 = 0, m2 = 0;
    for (auto n : support) {
      const double w = std::exp(log_w(n) + t * static_cast<double>(n) - mx);
      const double dn = static_cast<double>(n);
      z += w;
      m1 += w * dn;
      m2 += w * dn * dn;
    }
    const double mean = m1 / z;
    return std::pair{mean, std::max(m2 / z - mean * mean, 0.0)};
  };
  double lo = -1.0, hi = 1.0;
  while (moments(lo).first > energy && lo > -1e6) lo *= 2;
  while (moments(hi).first < energy && hi < 1e6) hi *= 2;
  double t = 0.0;
  for (int it = 0; it < 200; ++it) {
    const auto [mean, var] = moments(t);
    const double f = mean - energy;
    if (std::abs(f) <= 1e-15 * std::max(1.0, energy)) break;
    if (f > 0) hi = t; else lo = t;
    double next = var > 0 ? t - f / var : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  return t;
}

class GammaObjective final : public ProbeObjective {
 public:
  explicit GammaObjective(std::size_t dim) : dim_(dim) {}
  std::size_t dim() const override { return dim_; }
  Evaluation evaluate(const RealVector& c) const override {
    const auto n = c.size();
    Evaluation e;
    e.gradient = RealVector::Zero(n);
    double g = 0.0;
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      const double s = std::sqrt(static_cast<double>(k + 1));
      g += c(k + 1) * c(k) * s;
      e.gradient(k) -= c(k + 1) * s;
      e.gradient(k + 1) -= c(k) * s;
    }
    e.value = -g;
    e.bound = g;
    return e;
  }

 private:
  std::size_t dim_;
};

class GObjective final : public ProbeObjective {
 public:
  GObjective(std::size_t dim, double n_env) : dim_(dim), n_env_(n_env) {}
  std::size_t dim() const override { return dim_; }
  Evaluation evaluate(const RealVector& c) const override {
    const auto cs = as_std(c);
    Evaluation e;
    ProbeSpec p;
    p.kind = ProbeKind::TwoModeSchmidt;
    p.coeffs = cs;
    e.bound = g_functional(p, n_env_);
    e.value = -e.bound;
    e.gradient = -g_gradient(cs, n_env_);
    return e;
  }

 private:
  std::size_t dim_;
  double n_env_;
};

// Low-r coefficient (1 - kappa) / r^2 in closed per-term form.
class LowRObjective final : public ProbeObjective {
 public:
  LowRObjective(ProbeMode mode, const ScenarioParams& params)
      : mode_(mode), r_(params.r), dim_(params.dim_sig), env_(scenario_environment(params)) {
    const auto& l = env_.lambdas;
    for (std::size_t m = 0; m + 1 < l.size(); ++m) {
      const double den = std::sqrt(l[m + 1]) + std::sqrt(l[m]);
      const double d = l[m + 1] - l[m];
      if (den > 0) k_single_ += static_cast<double>(m + 1) * d * d / (den * den);
    }
  }
  std::size_t dim() const override { return dim_; }

  Evaluation evaluate(const RealVector& c) const override {
    Evaluation e;
    e.gradient = RealVector::Zero(c.size());
    double coef = 0.0;
    if (mode_ == ProbeMode::Single) {
      double g = 0.0;
      RealVector dg = RealVector::Zero(c.size());
      for (Eigen::Index k = 0; k + 1 < c.size(); ++k) {
        const double s = std::sqrt(static_cast<double>(k + 1));
        g += c(k + 1) * c(k) * s;
        dg(k) += c(k + 1) * s;
        dg(k + 1) += c(k) * s;
      }
      coef = g * g * k_single_;
      e.gradient = -2.0 * g * k_single_ * dg;
    } else {
      const auto& l = env_.lambdas;
      for (std::size_t m = 0; m + 1 < l.size(); ++m) {
        const double p = std::sqrt(l[m]);
        const double q = std::sqrt(l[m + 1]);
        const double d = l[m + 1] - l[m];
        if (d == 0.0) continue;
        for (Eigen::Index n = 0; n + 1 < c.size(); ++n) {
          const double x = c(n), y = c(n + 1);
          const double den = q * y + p * x;
          if (den == 0.0) continue;
          const double a2 = static_cast<double>(m + 1) * static_cast<double>(n + 1) * d * d;
          const double den3 = den * den * den;
          coef += a2 * x * x * y * y / (den * den);
          e.gradient(n) -= a2 * 2.0 * x * y * y * y * q / den3;
          e.gradient(n + 1) -= a2 * 2.0 * x * x * x * y * p / den3;
        }
      }
    }
    e.value = -coef;
    e.bound = 1.0 - r_ * r_ * coef;
    return e;
  }

 private:
  ProbeMode mode_;
  double r_;
  std::size_t dim_;
  EnvironmentSpec env_;
  double k_single_ = 0.0;
};

// Exact Chernoff or Helstrom on the full channel.
class ChannelObjective final : public ProbeObjective {
 public:
  ChannelObjective(ProbeMode mode, ObjectiveKind kind, const ScenarioParams& params)
      : mode_(mode),
        kind_(kind),
        r_(params.r),
        dim_(params.dim_sig),
        env_(scenario_environment(params)) {
    if (r_ > 0.0) channel_.emplace(params.dim_sig, env_, r_);
  }
  std::size_t dim() const override { return dim_; }

  Evaluation evaluate(const RealVector& c) const override {
    Evaluation e;
    e.gradient = RealVector::Zero(c.size());
    if (!channel_) {
      e.bound = kind_ == ObjectiveKind::Exact ? 1.0 : 0.5;
      return e;
    }
    const bool single = mode_ == ProbeMode::Single;
    const auto probe =
        raw_probe(single ? ProbeKind::SingleMode : ProbeKind::TwoModeSchmidt, c);
    const StatePair pair = single ? received_states_single(probe, env_, *channel_)
                                  : received_states_two(probe, env_, *channel_);
    if (kind_ == ObjectiveKind::Exact) {
      const ChernoffSpectrum spectrum(pair.rho0.matrix, pair.rho1.matrix);
      const auto min = golden_section_minimize(
          [&](double s) { return spectrum.objective(s); }, 0.0, 1.0, kGoldenTolerance);
      if (!(min.value > 0.0))
        throw NumericalError("exact objective: kappa is not positive");
      const auto sens = spectrum.sensitivity(min.x);
      const double scale = 1.0 / (min.value * r_ * r_);
      e.gradient = scale * chain(c, sens.d_rho0, sens.d_rho1);
      e.value = std::log(min.value) / (r_ * r_);
      e.bound = min.value;
      e.s_opt = min.x;
    } else {
      const auto hs = helstrom_sensitivity(pair.rho0.matrix, pair.rho1.matrix);
      e.gradient = chain(c, hs.d_rho0, hs.d_rho1) / r_;
      e.value = (hs.p_err - 0.5) / r_;
      e.bound = std::clamp(hs.p_err, 0.0, 0.5);
    }
    return e;
  }

 private:
  // d value / d c from d value / d rho0 and d value / d rho1.
  RealVector chain(const RealVector& c, const BlockOperator& w0, const BlockOperator& w1) const {
    const auto& ch = *channel_;
    const std::size_t ds = ch.dim_sig();
    const std::size_t dout = ch.output_dim();
    const bool single = mode_ == ProbeMode::Single;
    const std::size_t di = single ? 1 : ds;
    RealVector g = RealVector::Zero(c.size());
    for (std::size_t n = 0; n < ds; ++n) {
      double acc = 0.0;
      for (std::size_t n2 = 0; n2 < ds; ++n2) {
        const double cn2 = c(static_cast<Eigen::Index>(n2));
        if (cn2 == 0.0) continue;
        double inner = 0.0;
        for (std::size_t b = 0; b < dout; ++b) {
          const auto b2 = static_cast<std::ptrdiff_t>(b + n2) - static_cast<std::ptrdiff_t>(n);
          if (b2 < 0 || b2 >= static_cast<std::ptrdiff_t>(dout)) continue;
          const double v = ch.element(n, n2, b);
          if (v == 0.0) continue;
          const auto i = static_cast<Eigen::Index>(b * di + (single ? 0 : n));
          const auto j = static_cast<Eigen::Index>(static_cast<std::size_t>(b2) * di +
                                                   (single ? 0 : n2));
          inner += v * w1.at(j, i).real();
        }
        acc += cn2 * inner;
      }
      g(static_cast<Eigen::Index>(n)) = 2.0 * acc;
    }
    if (!single) {
      for (std::size_t n = 0; n < ds; ++n) {
        double acc = 0.0;
        for (std::size_t m = 0; m < env_.dim(); ++m) {
          const auto i = static_cast<Eigen::Index>(m * di + n);
          acc += env_.lambdas[m] * w0.at(i, i).real();
        }
        g(static_cast<Eigen::Index>(n)) += 2.0 * c(static_cast<Eigen::Index>(n)) * acc;
      }
    }
    return g;
  }

  ProbeMode mode_;
  ObjectiveKind kind_;
  double r_;
  std::size_t dim_;
  EnvironmentSpec env_;
  std::optional<ReflectionChannel> channel_;
};

std::string describe_violation(const RealVector& c, double energy) {
  std::ostringstream os;
  os << "start violates constraints: |sum c^2 - 1| = " << std::abs(c.squaredNorm() - 1.0)
     << ", energy " << c.dot(number_weighted(c)) << " vs " << energy;
  return os.str();
}

}  // namespace

double constraint_violation(const RealVector& c, const ConstraintSet& constraints) {
  double v = std::abs(c.squaredNorm() - constraints.norm_target);
  v = std::max(v, std::abs(c.dot(number_weighted(c)) - constraints.energy_target));
  if (c.size() > 0) v = std::max(v, std::max(-c.minCoeff(), 0.0));
  return v;
}

RealVector retract_to_constraints(const RealVector& v, double energy) {
  if (!(energy >= 0.0)) throw PreconditionError("retract: energy must be >= 0");
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> support;
  RealVector log_w = RealVector::Constant(n, -std::numeric_limits<double>::infinity());
  for (Eigen::Index k = 0; k < n; ++k)
    if (v(k) != 0.0) {
      support.push_back(k);
      log_w(k) = 2.0 * std::log(std::abs(v(k)));
    }
  if (support.empty()) throw PreconditionError("retract: no positive coefficients");
  const auto lo = static_cast<double>(support.front());
  const auto hi = static_cast<double>(support.back());
  RealVector out = RealVector::Zero(n);
  if (energy == lo || energy == hi) {
    out(static_cast<Eigen::Index>(energy)) = 1.0;
    return out;
  }
  if (energy < lo || energy > hi) {
    std::ostringstream os;
    os << "retract: support [" << lo << ", " << hi << "] cannot carry energy " << energy;
    throw PreconditionError(os.str());
  }
  const double t = solve_tilt(log_w, support, energy);
  double mx = -std::numeric_limits<double>::infinity();
  for (auto k : support) mx = std::max(mx, log_w(k) + t * static_cast<double>(k));
  double z = 0.0;
  for (auto k : support) {
    out(k) = std::exp(log_w(k) + t * static_cast<double>(k) - mx);
    z += out(k);
  }
  for (auto k : support) out(k) = std::sqrt(out(k) / z);
  return out;
}

RealVector tangent_projection(const RealVector& c, const RealVector& g) {
  Eigen::MatrixXd a(c.size(), 2);
  a.col(0) = c;
  a.col(1) = number_weighted(c);
  const Eigen::Vector2d mu = a.completeOrthogonalDecomposition().solve(g);
  return g - a * mu;
}

double kkt_residual(const RealVector& c, const RealVector& g) {
  const RealVector pg = tangent_projection(c, g);
  double res = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k)
    res = std::max(res, c(k) > 0.0 ? std::abs(pg(k)) : std::max(-pg(k), 0.0));
  return res;
}

RealVector random_feasible(std::size_t dim, double energy, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = u(rng) + 1e-3;
  return retract_to_constraints(v, energy);
}

std::string to_string(ProbeMode mode) { return mode == ProbeMode::Single ? "single" : "two"; }

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::Exact: return "exact";
    case ObjectiveKind::LowR: return "low-r";
    case ObjectiveKind::Helstrom: return "helstrom";
  }
  return "?";
}

ProbeMode probe_mode_from_string(const std::string& s) {
  if (s == "single") return ProbeMode::Single;
  if (s == "two") return ProbeMode::Two;
  throw PreconditionError("unknown probe mode '" + s + "' (expected single or two)");
}

ObjectiveKind objective_kind_from_string(const std::string& s) {
  if (s == "exact") return ObjectiveKind::Exact;
  if (s == "low-r" || s == "low_r") return ObjectiveKind::LowR;
  if (s == "helstrom") return ObjectiveKind::Helstrom;
  throw PreconditionError("unknown objective '" + s + "' (expected exact, low-r or helstrom)");
}

std::unique_ptr<ProbeObjective> gamma_objective(std::size_t dim) {
  return std::make_unique<GammaObjective>(dim);
}

std::unique_ptr<ProbeObjective> g_objective(std::size_t dim, double n_env) {
  if (!(n_env > 0.0)) throw DomainError("g_objective: n_env must be > 0");
  return std::make_unique<GObjective>(dim, n_env);
}

std::unique_ptr<ProbeObjective> bound_objective(ProbeMode mode, ObjectiveKind kind,
                                                const ScenarioParams& params) {
  params.validate();
  if (kind == ObjectiveKind::LowR) return std::make_unique<LowRObjective>(mode, params);
  return std::make_unique<ChannelObjective>(mode, kind, params);
}

OptResult minimize_objective(const ProbeObjective& objective, ProbeKind kind,
                             const RealVector& start, double energy,
                             const OptimizerOptions& options) {
  if (static_cast<std::size_t>(start.size()) != objective.dim())
    throw PreconditionError("optimizer: start has wrong dimension");
  RealVector c = retract_to_constraints(start, energy);
  if (constraint_violation(start, {1.0, energy, 1e-6}) > 1e-6)
    throw PreconditionError(describe_violation(start, energy));

  Evaluation cur = objective.evaluate(c);
  RealVector pg = tangent_projection(c, cur.gradient);
  double kkt = kkt_residual(c, cur.gradient);
  std::deque<double> history{cur.value};

  OptResult out;
  out.seed = options.seed;
  RealVector prev_c, prev_pg;
  double step = 0.0;
  std::size_t it = 0;
  std::string reason = "iteration cap";
  bool converged = false;

  for (; it < options.max_iterations; ++it) {
    if (kkt <= options.gradient_tolerance) {
      reason = "gradient";
      converged = true;
      break;
    }
    // Descent direction: tangent gradient, with pinned coordinates left alone
    // unless the gradient pushes them into the interior.
    RealVector dir = pg;
    for (Eigen::Index k = 0; k < c.size(); ++k)
      if (c(k) == 0.0 && dir(k) > 0.0) dir(k) = 0.0;
    const double dir_inf = dir.cwiseAbs().maxCoeff();
    if (dir_inf == 0.0) {
      reason = "gradient";
      converged = true;
      break;
    }
    if (prev_c.size() > 0) {
      const RealVector s = c - prev_c;
      const RealVector y = pg - prev_pg;
      const double sy = s.dot(y);
      step = sy > 0.0 ? s.squaredNorm() / sy : 2.0 * step;
    } else {
      step = 0.1 / dir_inf;
    }
    step = std::clamp(step, 1e-14 / dir_inf, 0.5 / dir_inf);

    bool accepted = false;
    RealVector trial;
    Evaluation next;
    for (int ls = 0; ls < 60; ++ls) {
      RealVector v = (c - step * dir).cwiseAbs();
      try {
        trial = retract_to_constraints(v, energy);
      } catch (const PreconditionError&) {
        step *= 0.5;
        continue;
      }
      next = objective.evaluate(trial);
      const double decrease = cur.gradient.dot(trial - c);
      if (next.value <= cur.value + 1e-4 * std::min(decrease, 0.0) && next.value <= cur.value) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      reason = "line search";
      converged = kkt <= 1e-6;
      break;
    }
    prev_c = c;
    prev_pg = pg;
    c = trial;
    cur = next;
    pg = tangent_projection(c, cur.gradient);
    kkt = kkt_residual(c, cur.gradient);
    history.push_back(cur.value);
    if (history.size() > options.stall_window + 1) history.pop_front();
    if (history.size() == options.stall_window + 1) {
      const double change = std::abs(history.front() - history.back());
      if (change <= options.stall_tolerance * std::abs(cur.value)) {
        ++it;
        reason = "stall";
        converged = true;
        break;
      }
    }
  }

  out.probe = raw_probe(kind, c);
  out.objective = cur.value;
  out.kappa = cur.bound;
  out.s_opt = cur.s_opt;
  out.converged = converged;
  out.iterations = it;
  out.kkt_residual = kkt;
  out.message = reason;
  return out;
}

OptResult maximize_gamma(double n_pr, std::size_t dim, const OptimizerOptions& options) {
  if (!(n_pr >= 0.0)) throw DomainError("maximize_gamma: n_pr must be >= 0");
  if (dim < 2) throw PreconditionError("maximize_gamma: dim must be >= 2");
  const auto obj = gamma_objective(dim);
  if (n_pr == 0.0) {
    OptResult out;
    out.probe = make_probe(ProbeKind::SingleMode, as_std(RealVector::Unit(dim, 0)));
    out.converged = true;
    out.seed = options.seed;
    out.message = "vacuum";
    return out;
  }
  return minimize_objective(*obj, ProbeKind::SingleMode,
                            retract_to_constraints(RealVector::Ones(dim), n_pr), n_pr, options);
}

OptResult maximize_g(double n_pr, double n_env, std::size_t dim,
                     const std::optional<RealVector>& start, const OptimizerOptions& options) {
  const auto obj = g_objective(dim, n_env);
  RealVector c0;
  if (start) {
    c0 = *start;
  } else {
    c0 = as_vector(coherent_state(FockSpace(dim), std::sqrt(n_pr), 1.0).coeffs);
    c0 = retract_to_constraints(c0, n_pr);
  }
  return minimize_objective(*obj, ProbeKind::TwoModeSchmidt, c0, n_pr, options);
}

OptResult minimize_kappa(ProbeMode mode, const ScenarioParams& params, const ProbeSpec& start,
                         ObjectiveKind kind, const OptimizerOptions& options) {
  params.validate();
  if (start.dim() != params.dim_sig)
    throw PreconditionError("minimize_kappa: start dimension differs from dim_sig");
  const auto expected = mode == ProbeMode::Single ? ProbeKind::SingleMode : ProbeKind::TwoModeSchmidt;
  if (start.kind != expected) throw PreconditionError("minimize_kappa: start kind does not match mode");
  const auto obj = bound_objective(mode, kind, params);
  const RealVector c0 = as_vector(start.coeffs);

  OptResult best = minimize_objective(*obj, start.kind, c0, params.n_pr, options);
  if (params.r >= options.restart_min_r && options.restarts > 0) {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> noise(0.0, options.restart_scale);
    const RealVector base = retract_to_constraints(c0, params.n_pr);
    for (std::size_t k = 0; k < options.restarts; ++k) {
      RealVector v = base;
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= std::exp(noise(rng));
      const OptResult res =
          minimize_objective(*obj, start.kind, retract_to_constraints(v, params.n_pr),
                             params.n_pr, options);
      if (res.objective < best.objective) {
        const bool conv = best.converged && res.converged;
        best = res;
        best.converged = conv || res.converged;
      }
    }
  }
  best.seed = options.seed;
  return best;
}

double lagrange_residual_theorem1(const ProbeSpec& probe, double mu1, double mu2) {
  const auto& c = probe.coeffs;
  const std::size_t d = c.size();
  double res = 0.0;
  for (std::size_t n = 0; n < d; ++n) {
    const double up = n + 1 < d ? c[n + 1] * std::sqrt(static_cast<double>(n + 1)) : 0.0;
    const double down = n > 0 ? c[n - 1] * std::sqrt(static_cast<double>(n)) : 0.0;
    res = std::max(res, std::abs(up + down + 2.0 * c[n] * (mu1 + static_cast<double>(n) * mu2)));
  }
  return res;
}

Multipliers fit_multipliers_theorem1(const ProbeSpec& probe) {
  const auto& c = probe.coeffs;
  const auto d = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd a(d, 2);
  RealVector b(d);
  for (Eigen::Index n = 0; n < d; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const double up = n + 1 < d ? c[un + 1] * std::sqrt(static_cast<double>(n + 1)) : 0.0;
    const double down = n > 0 ? c[un - 1] * std::sqrt(static_cast<double>(n)) : 0.0;
    a(n, 0) = 2.0 * c[un];
    a(n, 1) = 2.0 * static_cast<double>(n) * c[un];
    b(n) = -(up + down);
  }
  const Eigen::Vector2d mu = a.completeOrthogonalDecomposition().solve(b);
  return {mu(0), mu(1)};
}

double lagrange_residual_theorem1(const ProbeSpec& probe) {
  const auto mu = fit_multipliers_theorem1(probe);
  return lagrange_residual_theorem1(probe, mu.mu1, mu.mu2);
}

RealVector g_gradient(const std::vector<double>& c, double n_env) {
  if (!(n_env > 0.0)) throw DomainError("g_gradient: n_env must be > 0");
  const double g = n_env / (1.0 + n_env);
  // dM/dx = 4 y^{3/2} / (sqrt x + sqrt y)^3, symmetric for dM/dy.
  auto dmx = [](double x, double y) {
    const double s = std::sqrt(x) + std::sqrt(y);
    return s == 0.0 ? 0.0 : 4.0 * y * std::sqrt(y) / (s * s * s);
  };
  const std::size_t d = c.size();
  RealVector out = RealVector::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t k = 0; k < d; ++k) {
    double v = 0.0;
    const double x = c[k] * c[k];
    if (k + 1 < d) v += static_cast<double>(k + 1) * dmx(x, g * c[k + 1] * c[k + 1]);
    if (k > 0) v += static_cast<double>(k) * g * dmx(g * x, c[k - 1] * c[k - 1]);
    out(static_cast<Eigen::Index>(k)) = 2.0 * c[k] * v;
  }
  return out;
}

double lagrange_residual_lemma1(const ProbeSpec& probe, double n_env) {
  const auto& c = probe.coeffs;
  std::size_t support = 0;
  for (double x : c) support += x > 0.0 ? 1 : 0;
  if (support <= 1) return 0.0;
  const RealVector grad = g_gradient(c, n_env);
  const auto d = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd a(d, 2);
  for (Eigen::Index k = 0; k < d; ++k) {
    a(k, 0) = 2.0 * c[static_cast<std::size_t>(k)];
    a(k, 1) = 2.0 * static_cast<double>(k) * c[static_cast<std::size_t>(k)];
  }
  const Eigen::Vector2d mu = a.completeOrthogonalDecomposition().solve(-grad);
  return (grad + a * mu).cwiseAbs().maxCoeff();
}

EnvironmentSpec scenario_environment(const ScenarioParams& params) {
  return thermal_env(FockSpace(params.dim_env), params.n_env);
}

ProbeSpec gaussian_probe(ProbeMode mode, const ScenarioParams& params) {
  const FockSpace space(params.dim_sig);
  return mode == ProbeMode::Single ? coherent_state(space, std::sqrt(params.n_pr))
                                   : tmsv_probe(space, params.n_pr);
}

NonOptimality gaussian_non_optimality(ProbeMode mode, const ScenarioParams& params,
                                      const OptimizerOptions& options) {
  params.validate();
  NonOptimality out;
  const ProbeSpec gauss = gaussian_probe(mode, params);
  const auto obj = bound_objective(mode, ObjectiveKind::Exact, params);
  out.kappa_gaussian =
      obj->evaluate(retract_to_constraints(as_vector(gauss.coeffs), params.n_pr)).bound;
  out.optimum = minimize_kappa(mode, params, gauss, ObjectiveKind::Exact, options);
  out.converged = out.optimum.converged;
  out.kappa_opt = std::min(out.optimum.kappa, out.kappa_gaussian);
  const double log_opt = std::log(out.kappa_opt);
  out.value = log_opt == 0.0 ? 0.0 : 1.0 - std::log(out.kappa_gaussian) / log_opt;
  return out;
}

}  // namespace cvqi
