#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cvqi/bounds.hpp"
#include "cvqi/closedform.hpp"
#include "cvqi/errors.hpp"
#include "cvqi/fock.hpp"
#include "cvqi/illumination.hpp"
#include "cvqi/optimizer.hpp"

using namespace cvqi;

namespace {

ScenarioParams scenario(double r, double n_pr, double n_env, std::size_t ds, std::size_t de) {
  ScenarioParams p;
  p.r = r;
  p.n_pr = n_pr;
  p.n_env = n_env;
  p.dim_sig = ds;
  p.dim_env = de;
  return p;
}

RealVector vec(const std::vector<double>& c) {
  return Eigen::Map<const RealVector>(c.data(), static_cast<Eigen::Index>(c.size()));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

RealVector central_difference(const ProbeObjective& obj, const RealVector& c, double h) {
  RealVector g(c.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    RealVector up = c, dn = c;
    up(k) += h;
    dn(k) -= h;
    g(k) = (obj.evaluate(up).value - obj.evaluate(dn).value) / (2.0 * h);
  }
  return g;
}

ProbeSpec perturbed(const ProbeSpec& p, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  RealVector v = vec(p.coeffs);
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) *= 1.0 + n(rng);
  const RealVector c = retract_to_constraints(v, p.n_pr);
  return make_probe(p.kind, {c.data(), c.data() + c.size()});
}

}  // namespace

TEST(Constraints, RetractionLandsOnTheFeasibleSet) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    RealVector v(15);
    for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = u(rng);
    const RealVector c = retract_to_constraints(v, 0.7);
    EXPECT_LE(constraint_violation(c, {1.0, 0.7, 1e-9}), 1e-12);
    EXPECT_GE(c.minCoeff(), 0.0);
  }
}

TEST(Constraints, RetractionEdgeCases) {
  const RealVector vac = retract_to_constraints(RealVector::Ones(5), 0.0);
  EXPECT_DOUBLE_EQ(vac(0), 1.0);
  EXPECT_DOUBLE_EQ(vac.tail(4).norm(), 0.0);
  EXPECT_THROW(retract_to_constraints(RealVector::Unit(5, 0), 0.1), PreconditionError);
  EXPECT_THROW(retract_to_constraints(RealVector::Ones(3), 2.5), PreconditionError);
  EXPECT_THROW(retract_to_constraints(RealVector::Zero(3), 0.5), PreconditionError);
  EXPECT_THROW(retract_to_constraints(RealVector::Ones(3), -1.0), PreconditionError);
}

TEST(Constraints, TangentProjectionIsOrthogonal) {
  std::mt19937_64 rng(5);
  const RealVector c = random_feasible(10, 0.4, rng);
  RealVector g = RealVector::LinSpaced(10, -1.0, 2.0);
  const RealVector pg = tangent_projection(c, g);
  RealVector nc(10);
  for (Eigen::Index k = 0; k < 10; ++k) nc(k) = static_cast<double>(k) * c(k);
  EXPECT_NEAR(pg.dot(c), 0.0, 1e-13);
  EXPECT_NEAR(pg.dot(nc), 0.0, 1e-13);
  EXPECT_LE((tangent_projection(c, pg) - pg).norm(), 1e-13);
}

TEST(Constraints, RandomFeasibleIsDeterministic) {
  std::mt19937_64 a(11), b(11);
  EXPECT_EQ(random_feasible(8, 0.3, a), random_feasible(8, 0.3, b));
}

TEST(Strings, RoundTrip) {
  for (auto m : {ProbeMode::Single, ProbeMode::Two})
    EXPECT_EQ(probe_mode_from_string(to_string(m)), m);
  for (auto k : {ObjectiveKind::Exact, ObjectiveKind::LowR, ObjectiveKind::Helstrom})
    EXPECT_EQ(objective_kind_from_string(to_string(k)), k);
  EXPECT_THROW(probe_mode_from_string("three"), PreconditionError);
  EXPECT_THROW(objective_kind_from_string("fidelity"), PreconditionError);
}

TEST(MaximizeGamma, RecoversCoherentState) {
  const auto res = maximize_gamma(0.1, 20);
  ASSERT_TRUE(res.converged) << res.message;
  const auto coh = coherent_state(FockSpace(20), std::sqrt(0.1));
  EXPECT_LE(max_abs_diff(res.probe.coeffs, coh.coeffs), 1e-6);
  EXPECT_NEAR(gamma(res.probe), std::sqrt(0.1), 1e-10);
  EXPECT_LE(constraint_violation(vec(res.probe.coeffs), {1.0, 0.1, 1e-9}), 1e-9);
}

TEST(MaximizeGamma, VacuumAtZeroEnergy) {
  const auto res = maximize_gamma(0.0, 10);
  EXPECT_TRUE(res.converged);
  EXPECT_DOUBLE_EQ(res.probe.coeffs[0], 1.0);
  EXPECT_DOUBLE_EQ(gamma(res.probe), 0.0);
}

TEST(CoherentOptimum, CoherentStateIsStationary) {
  const double a = std::sqrt(0.1);
  const auto coh = coherent_state(FockSpace(20), a);
  EXPECT_LE(lagrange_residual_theorem1(coh, -a / 2.0, -1.0 / (2.0 * a)), 1e-10);
  const auto mu = fit_multipliers_theorem1(coh);
  EXPECT_NEAR(mu.mu1, -a / 2.0, 1e-9);
  EXPECT_NEAR(mu.mu2, -1.0 / (2.0 * a), 1e-9);
}

TEST(CoherentOptimum, NonStationaryProbesHaveLargeResidual) {
  const auto coh = coherent_state(FockSpace(20), std::sqrt(0.1));
  EXPECT_GT(lagrange_residual_theorem1(perturbed(coh, 0.2, 1)), 1e-3);
  const auto fock1 = make_probe(ProbeKind::SingleMode, {0.0, 1.0, 0.0, 0.0});
  EXPECT_GT(lagrange_residual_theorem1(fock1), 0.5);
}

TEST(CoherentOptimum, RandomProbesNeverBeatCoherent) {
  const double best = gamma(coherent_state(FockSpace(20), std::sqrt(0.1)));
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const RealVector c = random_feasible(20, 0.1, rng);
    EXPECT_LE(gamma(make_probe(ProbeKind::SingleMode, {c.data(), c.data() + c.size()})),
              best + 1e-9);
  }
}

TEST(GFunctional, TmsvIsStationary) {
  const auto tm = tmsv_probe(FockSpace(20), 0.1);
  EXPECT_LE(lagrange_residual_lemma1(tm, 0.5), 1e-8);
  EXPECT_GT(lagrange_residual_lemma1(perturbed(tm, 0.2, 2), 0.5), 1e-4);
  EXPECT_DOUBLE_EQ(lagrange_residual_lemma1(tmsv_probe(FockSpace(5), 0.0), 0.5), 0.0);
}

TEST(GFunctional, GradientMatchesFiniteDifference) {
  std::mt19937_64 rng(8);
  const RealVector c = random_feasible(8, 0.3, rng);
  const auto obj = g_objective(8, 0.5);
  const RealVector fd = central_difference(*obj, c, 1e-6);
  EXPECT_LE((obj->evaluate(c).gradient - fd).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(GFunctional, RandomSchmidtVectorsNeverBeatTmsv) {
  const double best = g_functional(tmsv_probe(FockSpace(20), 0.1), 0.5);
  std::mt19937_64 rng(77);
  for (int t = 0; t < 100; ++t) {
    const RealVector c = random_feasible(20, 0.1, rng);
    EXPECT_LE(g_functional(make_probe(ProbeKind::TwoModeSchmidt, {c.data(), c.data() + c.size()}), 0.5),
              best + 1e-9);
  }
}

TEST(GFunctional, MaximizeGRecoversTmsv) {
  const auto res = maximize_g(0.1, 0.5, 20);
  ASSERT_TRUE(res.converged) << res.message;
  EXPECT_LE(max_abs_diff(res.probe.coeffs, tmsv_probe(FockSpace(20), 0.1).coeffs), 1e-5);
}

TEST(LowR, ObjectiveMatchesPipeline) {
  const auto p = scenario(0.05, 0.3, 0.5, 8, 40);
  std::mt19937_64 rng(4);
  const RealVector c = random_feasible(8, 0.3, rng);
  const std::vector<double> cs(c.data(), c.data() + c.size());
  const auto env = scenario_environment(p);

  const auto single = make_probe(ProbeKind::SingleMode, cs);
  const double k1 = chernoff_low_r(delta_rho_single(single, env), environment_eigensystem(env), p.r).value;
  EXPECT_NEAR(bound_objective(ProbeMode::Single, ObjectiveKind::LowR, p)->evaluate(c).bound, k1, 1e-13);

  const auto two = make_probe(ProbeKind::TwoModeSchmidt, cs);
  const double k2 = chernoff_low_r(delta_rho_two(two, env), product_eigensystem(env, two), p.r).value;
  EXPECT_NEAR(bound_objective(ProbeMode::Two, ObjectiveKind::LowR, p)->evaluate(c).bound, k2, 1e-13);
}

TEST(LowR, GradientsMatchFiniteDifference) {
  const auto p = scenario(0.1, 0.3, 0.5, 8, 30);
  std::mt19937_64 rng(6);
  const RealVector c = random_feasible(8, 0.3, rng);
  for (auto mode : {ProbeMode::Single, ProbeMode::Two}) {
    const auto obj = bound_objective(mode, ObjectiveKind::LowR, p);
    const RealVector fd = central_difference(*obj, c, 1e-6);
    EXPECT_LE((obj->evaluate(c).gradient - fd).cwiseAbs().maxCoeff(), 1e-8) << to_string(mode);
  }
}

TEST(LowR, SingleModeOptimumIsCoherent) {
  const auto p = scenario(0.01, 0.1, 0.5, 20, 60);
  const auto coh = coherent_state(FockSpace(20), std::sqrt(0.1));
  const auto res = minimize_kappa(ProbeMode::Single, p, coh, ObjectiveKind::LowR);
  ASSERT_TRUE(res.converged) << res.message;
  const double start = bound_objective(ProbeMode::Single, ObjectiveKind::LowR, p)->evaluate(vec(coh.coeffs)).value;
  EXPECT_LE(res.objective, start);
  EXPECT_LE(start - res.objective, 1e-8);
  EXPECT_NEAR(res.kappa, kappa_c(0.01, 0.1, 0.5), 1e-12);
}

TEST(LowR, TwoModeOptimumIsTmsv) {
  const auto p = scenario(0.01, 0.1, 0.5, 20, 60);
  const auto start = coherent_state(FockSpace(20), std::sqrt(0.1));
  const auto res = minimize_kappa(ProbeMode::Two, p, make_probe(ProbeKind::TwoModeSchmidt, start.coeffs),
                                  ObjectiveKind::LowR);
  ASSERT_TRUE(res.converged) << res.message;
  EXPECT_LE(max_abs_diff(res.probe.coeffs, tmsv_probe(FockSpace(20), 0.1).coeffs), 1e-5);
  EXPECT_NEAR(res.kappa, kappa_q(0.01, 0.1, 0.5), 1e-12);
  EXPECT_LE(constraint_violation(vec(res.probe.coeffs), {1.0, 0.1, 1e-9}), 1e-9);
}

TEST(Channel, ExactGradientMatchesFiniteDifference) {
  const auto p = scenario(0.3, 0.4, 0.5, 5, 22);
  std::mt19937_64 rng(9);
  const RealVector c = random_feasible(5, 0.4, rng);
  for (auto mode : {ProbeMode::Single, ProbeMode::Two}) {
    const auto obj = bound_objective(mode, ObjectiveKind::Exact, p);
    const RealVector g = obj->evaluate(c).gradient;
    const RealVector fd = central_difference(*obj, c, 1e-6);
    EXPECT_LE((g - fd).cwiseAbs().maxCoeff(), 1e-4 * g.cwiseAbs().maxCoeff()) << to_string(mode);
  }
}

TEST(Channel, HelstromGradientMatchesFiniteDifference) {
  const auto p = scenario(0.3, 0.4, 0.5, 5, 22);
  std::mt19937_64 rng(10);
  const RealVector c = random_feasible(5, 0.4, rng);
  for (auto mode : {ProbeMode::Single, ProbeMode::Two}) {
    const auto obj = bound_objective(mode, ObjectiveKind::Helstrom, p);
    const RealVector g = obj->evaluate(c).gradient;
    const RealVector fd = central_difference(*obj, c, 1e-6);
    EXPECT_LE((g - fd).cwiseAbs().maxCoeff(), 1e-4 * g.cwiseAbs().maxCoeff()) << to_string(mode);
  }
}

TEST(Channel, ZeroReflectivityIsFlat) {
  const auto p = scenario(0.0, 0.1, 0.5, 6, 22);
  const auto e = bound_objective(ProbeMode::Single, ObjectiveKind::Exact, p)
                     ->evaluate(retract_to_constraints(RealVector::Ones(6), 0.1));
  EXPECT_DOUBLE_EQ(e.value, 0.0);
  EXPECT_DOUBLE_EQ(e.bound, 1.0);
}

TEST(MinimizeKappa, ReportedOptimumIsStationary) {
  const auto p = scenario(0.3, 0.1, 0.5, 8, 30);
  const auto start = gaussian_probe(ProbeMode::Single, p);
  OptimizerOptions opts;
  opts.restarts = 0;
  const auto res = minimize_kappa(ProbeMode::Single, p, start, ObjectiveKind::Exact, opts);
  ASSERT_TRUE(res.converged) << res.message;
  const auto obj = bound_objective(ProbeMode::Single, ObjectiveKind::Exact, p);
  const RealVector c = vec(res.probe.coeffs);
  const RealVector fd = tangent_projection(c, central_difference(*obj, c, 1e-6));
  EXPECT_LE(fd.cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LE(constraint_violation(c, {1.0, 0.1, 1e-9}), 1e-9);
  EXPECT_LE(res.kappa, obj->evaluate(vec(start.coeffs)).bound + 1e-12);
}

TEST(MinimizeKappa, TwoModeDominatesTmsv) {
  const auto p = scenario(0.4, 0.06, 0.5, 9, 24);
  const auto tm = gaussian_probe(ProbeMode::Two, p);
  const auto res = minimize_kappa(ProbeMode::Two, p, tm, ObjectiveKind::Exact);
  ASSERT_TRUE(res.converged) << res.message;
  const double k_tmsv = bound_objective(ProbeMode::Two, ObjectiveKind::Exact, p)->evaluate(vec(tm.coeffs)).bound;
  EXPECT_LE(res.kappa, k_tmsv + 1e-12);
  EXPECT_GE(res.kappa, 0.0);
  EXPECT_LE(res.kappa, 1.0);
}

TEST(MinimizeKappa, HelstromNeverWorseThanStart) {
  const auto p = scenario(0.3, 0.1, 0.5, 10, 24);
  const auto tm = gaussian_probe(ProbeMode::Two, p);
  OptimizerOptions opts;
  opts.restarts = 0;
  const auto res = minimize_kappa(ProbeMode::Two, p, tm, ObjectiveKind::Helstrom, opts);
  const double start = bound_objective(ProbeMode::Two, ObjectiveKind::Helstrom, p)->evaluate(vec(tm.coeffs)).bound;
  EXPECT_LE(res.kappa, start + 1e-12);
}

TEST(MinimizeKappa, DeterministicForFixedSeed) {
  const auto p = scenario(0.3, 0.1, 0.5, 10, 24);
  OptimizerOptions opts;
  opts.restarts = 2;
  opts.seed = 42;
  const auto start = gaussian_probe(ProbeMode::Single, p);
  const auto a = minimize_kappa(ProbeMode::Single, p, start, ObjectiveKind::Exact, opts);
  const auto b = minimize_kappa(ProbeMode::Single, p, start, ObjectiveKind::Exact, opts);
  EXPECT_EQ(a.probe.coeffs, b.probe.coeffs);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.seed, 42u);
}

TEST(MinimizeKappa, RejectsBadStarts) {
  const auto p = scenario(0.3, 0.1, 0.5, 10, 24);
  const auto wrong_dim = coherent_state(FockSpace(11), std::sqrt(0.1));
  EXPECT_THROW(minimize_kappa(ProbeMode::Single, p, wrong_dim, ObjectiveKind::Exact), PreconditionError);
  const auto wrong_kind = tmsv_probe(FockSpace(10), 0.1);
  EXPECT_THROW(minimize_kappa(ProbeMode::Single, p, wrong_kind, ObjectiveKind::Exact), PreconditionError);
  const auto wrong_energy = coherent_state(FockSpace(10), std::sqrt(0.5), 1e-6);
  EXPECT_THROW(minimize_kappa(ProbeMode::Single, p, wrong_energy, ObjectiveKind::Exact), PreconditionError);
}

TEST(NonOptimality, ZeroAtZeroReflectivity) {
  for (auto mode : {ProbeMode::Single, ProbeMode::Two}) {
    const auto no = gaussian_non_optimality(mode, scenario(0.0, 0.1, 0.5, 10, 24));
    EXPECT_TRUE(no.converged);
    EXPECT_NEAR(no.value, 0.0, 1e-6);
  }
}

TEST(NonOptimality, SmallAndNonNegative) {
  const auto no = gaussian_non_optimality(ProbeMode::Single, scenario(0.3, 0.1, 0.5, 8, 30));
  EXPECT_TRUE(no.converged);
  EXPECT_GE(no.value, -1e-9);
  EXPECT_LT(no.value, 1e-2);
  EXPECT_LE(no.kappa_opt, no.kappa_gaussian);
}

// Vacuum environment: the minimum over s sits at s = 1, so kappa = sum p_n (1 - r^2)^n.
// Convexity in n puts the optimum on {|0>, |1>}, strictly below the coherent value.
TEST(NonOptimality, VacuumEnvironmentOptimumIsFockMixture) {
  const double r = 0.1, n = 0.1;
  const auto no = gaussian_non_optimality(ProbeMode::Single, scenario(r, n, 0.0, 12, 4));
  EXPECT_TRUE(no.converged);
  EXPECT_NEAR(no.kappa_gaussian, std::exp(-n * r * r), 1e-12);
  EXPECT_NEAR(no.kappa_opt, 1.0 - n * r * r, 1e-10);
  EXPECT_NEAR(no.value, 1.0 - (-n * r * r) / std::log(1.0 - n * r * r), 1e-7);
}
