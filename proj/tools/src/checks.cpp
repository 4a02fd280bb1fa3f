#include "cvqi_cli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "cvqi/appendix.hpp"
#include "cvqi/bounds.hpp"
#include "cvqi/closedform.hpp"
#include "cvqi/illumination.hpp"
#include "cvqi/optimizer.hpp"
#include "cvqi/serialize.hpp"

namespace cvqi::cli {

using nlohmann::json;

void CheckGroup::add(std::string check_name, double value, const std::string& relation,
                     double threshold) {
  bool ok = false;
  if (relation == "<=") ok = value <= threshold;
  else if (relation == ">=") ok = value >= threshold;
  else if (relation == "==") ok = value == threshold;
  checks.push_back({name + "." + check_name, value, threshold, relation, ok});
}

bool CheckGroup::pass() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

namespace {

constexpr double kNpr = 0.1;
constexpr double kNenv = 0.5;

ScenarioParams scenario(double r, double n_pr, double n_env, std::size_t ds, std::size_t de,
                        std::size_t di = 0) {
  ScenarioParams p;
  p.r = r;
  p.n_pr = n_pr;
  p.n_env = n_env;
  p.dim_sig = ds;
  p.dim_env = de;
  p.dim_idler = di;
  p.validate();
  return p;
}

RealVector vec(const std::vector<double>& c) {
  return Eigen::Map<const RealVector>(c.data(), static_cast<Eigen::Index>(c.size()));
}

std::vector<double> std_vec(const RealVector& c) { return {c.data(), c.data() + c.size()}; }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    d = std::max(d, std::abs(x - y));
  }
  return d;
}

ProbeSpec perturbed(const ProbeSpec& p, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  RealVector v = vec(p.coeffs);
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) *= 1.0 + n(rng);
  return make_probe(p.kind, std_vec(retract_to_constraints(v, p.n_pr)));
}

struct PipelineKappas {
  double low_r = 1.0;
  double exact = 1.0;
  double closed = 1.0;
  BoundResult exact_result;
  ChannelDiagnostics channel;
};

PipelineKappas pipeline_kappas(ProbeKind kind, double r, std::size_t ds, std::size_t de) {
  const bool two = kind == ProbeKind::TwoModeSchmidt;
  const FockSpace space(ds);
  const ProbeSpec probe = two ? tmsv_probe(space, kNpr) : coherent_state(space, std::sqrt(kNpr));
  const EnvironmentSpec env = thermal_env(FockSpace(de), kNenv);
  const ScenarioParams p = scenario(r, kNpr, kNenv, ds, de, two ? ds : 0);
  PipelineKappas k;
  if (two) {
    k.low_r = chernoff_low_r(delta_rho_two(probe, env), product_eigensystem(env, probe), r).value;
    const StatePair pair = received_states_two(probe, env, p);
    k.exact_result = chernoff_exact(pair);
    k.channel = pair.diagnostics;
    k.closed = kappa_q(r, kNpr, kNenv);
  } else {
    k.low_r = chernoff_low_r(delta_rho_single(probe, env), environment_eigensystem(env), r).value;
    const StatePair pair = received_states_single(probe, env, p);
    k.exact_result = chernoff_exact(pair);
    k.channel = pair.diagnostics;
    k.closed = kappa_c(r, kNpr, kNenv);
  }
  k.exact = k.exact_result.value;
  return k;
}

ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix x(n, n);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = Complex(g(rng), g(rng));
  return 0.5 * (x + x.adjoint());
}

}  // namespace

CheckGroup pipeline_checks(ProbeKind kind, std::size_t dim_sig, std::size_t dim_env) {
  const bool two = kind == ProbeKind::TwoModeSchmidt;
  CheckGroup g;
  g.name = two ? "pipeline_tmsv" : "pipeline_coherent";
  const double r = 0.01;
  const PipelineKappas k = pipeline_kappas(kind, r, dim_sig, dim_env);
  g.add("low_r_abs_error", std::abs(k.low_r - k.closed), "<=", two ? 1e-9 : 1e-10);
  g.add("exact_abs_error", std::abs(k.exact - k.closed), "<=", 5e-6);
  g.details = {{"n_pr", kNpr},
               {"n_env", kNenv},
               {"r", r},
               {"dim_sig", dim_sig},
               {"dim_env", dim_env},
               {"kappa_closed_form", k.closed},
               {"kappa_low_r", k.low_r},
               {"kappa_exact", k.exact},
               {"s_opt", k.exact_result.s_opt},
               {"bound", k.exact_result.diagnostics},
               {"channel", k.channel}};
  return g;
}

CheckGroup scaling_checks(ProbeKind kind, std::size_t dim_sig, std::size_t dim_env) {
  const bool two = kind == ProbeKind::TwoModeSchmidt;
  CheckGroup g;
  g.name = two ? "scaling_tmsv" : "scaling_coherent";
  const std::vector<double> rs{3e-2, 1e-2, 3e-3};
  std::vector<double> err;
  for (double r : rs) {
    const PipelineKappas k = pipeline_kappas(kind, r, dim_sig, dim_env);
    err.push_back(std::abs(k.exact - k.low_r));
  }
  const double slope = loglog_slope(rs, err);
  g.add("slope_minus_3", std::abs(slope - 3.0), "<=", 0.2);
  g.details = {{"r", rs}, {"abs_exact_minus_low_r", err}, {"slope", slope}};
  return g;
}

CheckGroup advantage_checks() {
  CheckGroup g;
  g.name = "advantage";
  g.add("ratio_extreme", advantage_ratio(1e-6, 1e6), ">=", 3.99);
  double zero_env = 0.0;
  for (double np : log_space(1e-3, 10.0, 60))
    zero_env = std::max(zero_env, std::abs(advantage_ratio(np, 0.0) - 1.0));
  g.add("ratio_at_zero_env_minus_1", zero_env, "==", 0.0);

  const auto nps = log_space(1e-3, 10.0, 60);
  const auto nes = log_space(1e-3, 100.0, 60);
  const auto grid = advantage_grid(nps, nes);
  double range = 0, in_n_pr = 0, in_n_env = 0, dominance = 0;
  for (std::size_t i = 0; i < nps.size(); ++i)
    for (std::size_t j = 0; j < nes.size(); ++j) {
      const auto& p = grid[i * nes.size() + j];
      if (!(p.ratio >= 1.0 && p.ratio <= 4.0)) ++range;
      if (p.kappa_q_coeff < p.kappa_c_coeff - 1e-15) ++dominance;
      if (i > 0 && p.ratio > grid[(i - 1) * nes.size() + j].ratio) ++in_n_pr;
      if (j > 0 && p.ratio < grid[i * nes.size() + j - 1].ratio) ++in_n_env;
    }
  g.add("ratio_out_of_range", range, "==", 0.0);
  g.add("coefficient_dominance_violations", dominance, "==", 0.0);
  g.add("n_pr_monotonicity_violations", in_n_pr, "==", 0.0);
  g.add("n_env_monotonicity_violations", in_n_env, "==", 0.0);
  g.details = {{"grid", {nps.size(), nes.size()}}, {"ratio_extreme", advantage_ratio(1e-6, 1e6)}};
  return g;
}

CheckGroup coherent_optimum_checks(std::size_t dim, std::uint64_t seed) {
  CheckGroup g;
  g.name = "coherent_optimum";
  const double alpha = std::sqrt(kNpr);
  const ProbeSpec coh = coherent_state(FockSpace(dim), alpha);
  OptimizerOptions opts;
  opts.seed = seed;
  const OptResult res = maximize_gamma(kNpr, dim, opts);
  g.add("converged", res.converged ? 1.0 : 0.0, "==", 1.0);
  g.add("coefficients_vs_coherent", max_abs_diff(res.probe.coeffs, coh.coeffs), "<=", 1e-6);
  g.add("lagrange_residual", lagrange_residual_theorem1(coh, -alpha / 2.0, -1.0 / (2.0 * alpha)),
        "<=", 1e-10);
  const double best = gamma(coh);
  std::mt19937_64 rng(seed);
  double excess = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const ProbeSpec p = make_probe(ProbeKind::SingleMode, std_vec(random_feasible(dim, kNpr, rng)));
    excess = std::max(excess, gamma(p) - best);
  }
  g.add("random_excess_over_coherent", excess, "<=", 1e-9);
  g.details = {{"optimum", res}, {"gamma_coherent", best}};
  return g;
}

CheckGroup tmsv_optimum_checks(std::size_t dim_sig, std::size_t dim_env) {
  CheckGroup g;
  g.name = "tmsv_optimum";
  const double r = 0.01;
  const ScenarioParams p = scenario(r, kNpr, kNenv, dim_sig, dim_env);
  const auto start = coherent_state(FockSpace(dim_sig), std::sqrt(kNpr));
  const OptResult res = minimize_kappa(ProbeMode::Two, p,
                                       make_probe(ProbeKind::TwoModeSchmidt, start.coeffs),
                                       ObjectiveKind::LowR);
  const ProbeSpec tm = tmsv_probe(FockSpace(dim_sig), kNpr);
  g.add("converged", res.converged ? 1.0 : 0.0, "==", 1.0);
  g.add("coefficients_vs_tmsv", max_abs_diff(res.probe.coeffs, tm.coeffs), "<=", 1e-5);
  g.add("kappa_vs_closed_form", std::abs(res.kappa - kappa_q(r, kNpr, kNenv)), "<=", 1e-9);
  g.details = {{"optimum", res}};
  return g;
}

CheckGroup g_functional_checks(std::size_t dim, std::uint64_t seed) {
  CheckGroup g;
  g.name = "g_functional";
  const ProbeSpec tm = tmsv_probe(FockSpace(dim), kNpr);
  g.add("tmsv_residual", lagrange_residual_lemma1(tm, kNenv), "<=", 1e-8);
  g.add("perturbed_residual", lagrange_residual_lemma1(perturbed(tm, 0.2, seed + 1), kNenv), ">=",
        1e-4);
  const double best = g_functional(tm, kNenv);
  std::mt19937_64 rng(seed);
  double excess = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const ProbeSpec p =
        make_probe(ProbeKind::TwoModeSchmidt, std_vec(random_feasible(dim, kNpr, rng)));
    excess = std::max(excess, g_functional(p, kNenv) - best);
  }
  g.add("random_excess_over_tmsv", excess, "<=", 1e-9);
  OptimizerOptions opts;
  opts.seed = seed;
  const OptResult res = maximize_g(kNpr, kNenv, dim, std::nullopt, opts);
  g.add("maximize_g_vs_tmsv", max_abs_diff(res.probe.coeffs, tm.coeffs), "<=", 1e-5);
  g.details = {{"g_tmsv", best}, {"optimum", res}};
  return g;
}

CheckGroup nonoptimality_checks(const std::vector<NonOptimalityRow>& rows) {
  CheckGroup g;
  g.name = "nonoptimality";
  double min_value = std::numeric_limits<double>::infinity();
  double at_zero = 0.0, dominance = -std::numeric_limits<double>::infinity();
  double unconverged = 0;
  json table = json::array();
  for (const auto& r : rows) {
    min_value = std::min(min_value, r.non_optimality);
    if (r.r == 0.0) at_zero = std::max(at_zero, std::abs(r.non_optimality));
    dominance = std::max(dominance, r.kappa_opt - r.kappa_gaussian);
    if (!r.converged) ++unconverged;
    table.push_back({{"mode", r.mode},
                     {"n_pr", r.n_pr},
                     {"r", r.r},
                     {"kappa_gaussian", r.kappa_gaussian},
                     {"kappa_opt", r.kappa_opt},
                     {"non_optimality", r.non_optimality},
                     {"converged", r.converged}});
  }
  g.add("min_non_optimality", min_value, ">=", -1e-9);
  g.add("abs_at_zero_r", at_zero, "<=", 1e-6);
  g.add("kappa_opt_minus_gaussian", dominance, "<=", 0.0);
  g.add("unconverged", unconverged, "==", 0.0);
  g.details = {{"rows", table}};
  return g;
}

CheckGroup appendix_checks(double r, double tolerance, std::size_t trials, std::uint64_t seed) {
  CheckGroup g;
  char name[32];
  std::snprintf(name, sizeof(name), "appendix_r%g", r);
  g.name = name;
  ReductionConfig cfg;
  cfg.r = r;
  cfg.tolerance = tolerance;
  cfg.trials = trials;
  cfg.seed = seed;
  const ReductionReport rep = verify_schmidt_reduction(cfg);
  double failed = 0;
  json failing = json::array();
  for (const auto& t : rep.trials)
    if (!t.pass) {
      ++failed;
      failing.push_back(t);
    }
  g.add("max_trace_distance", rep.max_distance, "<=", tolerance);
  g.add("max_trace_preservation_residual", rep.max_trace_residual, "<=", 1e-10);
  g.add("min_dpi_margin", rep.min_dpi_margin, ">=", -cfg.dpi_tolerance);
  if (rep.schmidt_min_kappa && rep.general_min_kappa)
    g.add("schmidt_min_minus_general_min", *rep.schmidt_min_kappa - *rep.general_min_kappa, "<=",
          cfg.direct_tolerance);
  g.add("failed_trials", failed, "==", 0.0);
  json details = rep;
  details.erase("trials");
  details["failing_trials"] = failing;
  g.details = details;
  return g;
}

CheckGroup kernel_checks(std::uint64_t seed) {
  CheckGroup g;
  g.name = "kernel";
  std::mt19937_64 rng(seed);

  double recon = 0.0, ortho = 0.0;
  for (std::size_t n : {2u, 7u, 19u, 40u}) {
    const ComplexMatrix a = random_hermitian(n, rng);
    const HermitianEigen e = hermitian_eig(a);
    const ComplexMatrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
    recon = std::max(recon, max_abs(back - a) / std::max(1.0, max_abs(a)));
    ortho = std::max(ortho, max_abs(e.vectors.adjoint() * e.vectors -
                                    ComplexMatrix::Identity(e.vectors.cols(), e.vectors.cols())));
  }
  g.add("eig_reconstruction", recon, "<=", 1e-10);
  g.add("eig_orthonormality", ortho, "<=", 1e-10);

  double unit = 0.0, comm = 0.0;
  const std::size_t ds = 6, de = 8;
  const ComplexMatrix total =
      tensor_product(number_operator(FockSpace(ds)), ComplexMatrix::Identity(de, de)) +
      tensor_product(ComplexMatrix::Identity(ds, ds), number_operator(FockSpace(de)));
  for (double r : {0.01, 0.3, 0.9}) {
    const BeamSplitter bs = beam_splitter_unitary(FockSpace(ds), FockSpace(de), r);
    const auto n = static_cast<Eigen::Index>(ds * de);
    unit = std::max(unit, max_abs(bs.unitary.adjoint() * bs.unitary - ComplexMatrix::Identity(n, n)));
    comm = std::max(comm, max_abs(total * bs.unitary - bs.unitary * total));
  }
  g.add("beam_splitter_unitarity", unit, "<=", 1e-10);
  g.add("photon_number_commutator", comm, "<=", 1e-10);

  double trace = 0.0, density = 0.0;
  const EnvironmentSpec env = thermal_env(FockSpace(30), kNenv);
  for (double r : {0.0, 0.01, 0.3, 1.0}) {
    const ReflectionChannel ch(10, env, r);
    for (std::size_t n = 0; n < 10; ++n)
      trace = std::max(trace, std::abs(ch.apply_basis(n, n).trace() - Complex(1.0)));
    const auto coh = coherent_state(FockSpace(20), std::sqrt(kNpr));
    const auto tm = tmsv_probe(FockSpace(20), kNpr);
    for (const StatePair& pair : {received_states_single(coh, env, scenario(r, kNpr, kNenv, 20, 30)),
                                  received_states_two(tm, env, scenario(r, kNpr, kNenv, 20, 30, 20))})
      for (const DensityOperator* rho : {&pair.rho0, &pair.rho1}) {
        const DensityCheck c = check_density(*rho);
        trace = std::max(trace, c.trace_error);
        density = std::max({density, c.hermiticity, -c.min_eigenvalue});
      }
  }
  g.add("trace_preservation", trace, "<=", 1e-12);
  g.add("density_defect", density, "<=", 1e-12);

  const auto coh = coherent_state(FockSpace(20), std::sqrt(kNpr));
  const auto tm = tmsv_probe(FockSpace(12), kNpr);
  const ComplexMatrix d1 = delta_rho_single(coh, env);
  const ComplexMatrix d2 = delta_rho_two(tm, env);
  std::vector<double> rs{1e-2, 1e-3, 1e-4}, e1, e2;
  for (double r : rs) {
    const StatePair p1 = received_states_single(coh, env, scenario(r, kNpr, kNenv, 20, 30));
    const ComplexMatrix lin1 = embed_environment_operator(d1, 30, p1.rho1.matrix.rows(), 1);
    e1.push_back(trace_norm(p1.rho1.matrix - p1.rho0.matrix - r * lin1));
    const StatePair p2 = received_states_two(tm, env, scenario(r, kNpr, kNenv, 12, 30, 12));
    const std::size_t out = static_cast<std::size_t>(p2.rho1.matrix.rows()) / 12;
    const ComplexMatrix lin2 = embed_environment_operator(d2, 30, out, 12);
    e2.push_back(trace_norm(p2.rho1.matrix - p2.rho0.matrix - r * lin2));
  }
  const double s1 = loglog_slope(rs, e1), s2 = loglog_slope(rs, e2);
  g.add("linearization_slope_single_minus_2", std::abs(s1 - 2.0), "<=", 0.1);
  g.add("linearization_slope_two_minus_2", std::abs(s2 - 2.0), "<=", 0.1);
  g.details = {{"linearization_slopes", {s1, s2}}};
  return g;
}

}  // namespace cvqi::cli
