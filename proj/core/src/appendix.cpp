#include "cvqi/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cvqi/bounds.hpp"
#include "cvqi/errors.hpp"
#include "cvqi/illumination.hpp"
#include "cvqi/optimizer.hpp"

namespace cvqi {

namespace {

constexpr double kChernoffTolerance = 1e-10;
constexpr double kTracePreservation = 1e-10;

ComplexMatrix sandwich_sum(const std::vector<KrausBranch>& branches, const ComplexMatrix& rho,
                           std::size_t out_dim) {
  const auto d = static_cast<Eigen::Index>(out_dim);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& b : branches) out.noalias() += b.op * rho * b.op.adjoint();
  return 0.5 * (out + out.adjoint());
}

// Columns |a, phi_{a-k}> for the basis states of Pi_k, placed at their input
// indices; other columns zero.
ComplexMatrix conditional_isometry(const PovmElement& e, const GeneralProbe& g, std::size_t dim_a) {
  const std::size_t ds = g.dim();
  const std::size_t di = g.dim_idler();
  ComplexMatrix v = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim_a * di),
                                        static_cast<Eigen::Index>(dim_a * ds));
  for (auto idx : e.indices) {
    const auto a = static_cast<std::size_t>(idx) / ds;
    const auto n = static_cast<std::size_t>(idx) % ds;
    const auto& phi = g.idler_states[n];
    for (std::size_t i = 0; i < di; ++i)
      v(static_cast<Eigen::Index>(a * di + i), idx) = phi(static_cast<Eigen::Index>(i));
  }
  return v;
}

KrausBranch make_branch(std::string label, const ComplexMatrix& isometry,
                        const std::vector<Eigen::Index>& range) {
  KrausBranch b;
  b.label = std::move(label);
  const auto cols = isometry.cols();
  ComplexMatrix proj_cols = ComplexMatrix::Zero(isometry.rows(), cols);
  for (auto idx : range) proj_cols.col(idx) = isometry.col(idx);
  if (isometry.rows() == cols) {
    std::vector<bool> defined(static_cast<std::size_t>(cols), false);
    for (auto idx : range) defined[static_cast<std::size_t>(idx)] = true;
    b.unitary = complete_to_unitary(proj_cols, defined);
    ComplexMatrix op = ComplexMatrix::Zero(cols, cols);
    for (auto idx : range) op.col(idx) = b.unitary->col(idx);
    b.op = std::move(op);
  } else {
    b.op = std::move(proj_cols);
  }
  return b;
}

}  // namespace

ComplexMatrix PovmElement::projector(std::size_t dim) const {
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (auto i : indices) p(i, i) = 1.0;
  return p;
}

const PovmElement& PhotonDifferencePovm::element(int k) const {
  for (const auto& e : elements)
    if (e.k == k) return e;
  throw PreconditionError("povm: no element for offset " + std::to_string(k));
}

double PhotonDifferencePovm::completeness_residual() const {
  const auto d = static_cast<Eigen::Index>(dim());
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& e : elements) sum += e.projector(dim());
  return max_abs(sum - ComplexMatrix::Identity(d, d));
}

PhotonDifferencePovm build_povm(std::size_t dim_a, std::size_t dim_b) {
  if (dim_a < 2 || dim_b < 2) throw PreconditionError("build_povm: dimensions must be >= 2");
  PhotonDifferencePovm povm;
  povm.dim_a = dim_a;
  povm.dim_b = dim_b;
  const int lo = -static_cast<int>(dim_b - 1);
  const int hi = static_cast<int>(dim_a - 1);
  for (int k = lo; k <= hi; ++k) {
    PovmElement e;
    e.k = k;
    for (std::size_t a = 0; a < dim_a; ++a) {
      const long b = static_cast<long>(a) - k;
      if (b >= 0 && b < static_cast<long>(dim_b))
        e.indices.push_back(static_cast<Eigen::Index>(a * dim_b + static_cast<std::size_t>(b)));
    }
    povm.elements.push_back(std::move(e));
  }
  return povm;
}

std::size_t GeneralProbe::dim_idler() const {
  return idler_states.empty() ? 0 : static_cast<std::size_t>(idler_states.front().size());
}

double GeneralProbe::mean_photon_number() const { return cvqi::mean_photon_number(coeffs); }

ComplexMatrix GeneralProbe::amplitudes() const {
  ComplexMatrix psi(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim_idler()));
  for (std::size_t n = 0; n < dim(); ++n)
    psi.row(static_cast<Eigen::Index>(n)) = coeffs[n] * idler_states[n].transpose();
  return psi;
}

double GeneralProbe::gram_min_eigenvalue() const {
  const auto d = static_cast<Eigen::Index>(dim());
  ComplexMatrix gram(d, d);
  for (Eigen::Index m = 0; m < d; ++m)
    for (Eigen::Index n = 0; n < d; ++n)
      gram(m, n) = idler_states[static_cast<std::size_t>(m)].dot(idler_states[static_cast<std::size_t>(n)]);
  const ComplexMatrix herm = 0.5 * (gram + gram.adjoint());
  return hermitian_eig(herm).values.minCoeff();
}

void validate(const GeneralProbe& probe, double tol) {
  if (probe.coeffs.empty()) throw PreconditionError("general probe: empty");
  if (probe.idler_states.size() != probe.coeffs.size())
    throw PreconditionError("general probe: one idler state per coefficient required");
  for (double c : probe.coeffs)
    if (!(c >= 0.0)) throw PreconditionError("general probe: coefficients must be nonnegative");
  if (std::abs(norm_squared(probe.coeffs) - 1.0) > tol)
    throw PreconditionError("general probe: sum c_n^2 != 1");
  const auto di = probe.idler_states.front().size();
  for (std::size_t n = 0; n < probe.idler_states.size(); ++n) {
    const auto& phi = probe.idler_states[n];
    if (phi.size() != di) throw PreconditionError("general probe: idler states differ in dimension");
    if (std::abs(phi.norm() - 1.0) > tol) {
      std::ostringstream os;
      os << "general probe: |phi_" << n << "| = " << phi.norm() << " is not 1";
      throw PreconditionError(os.str());
    }
  }
}

GeneralProbe schmidt_as_general(const ProbeSpec& probe) {
  GeneralProbe g;
  g.coeffs = probe.coeffs;
  const auto d = static_cast<Eigen::Index>(probe.dim());
  for (Eigen::Index n = 0; n < d; ++n) g.idler_states.push_back(ComplexVector::Unit(d, n));
  return g;
}

GeneralProbe random_general_probe(std::size_t dim, std::size_t dim_idler, double n_pr,
                                  std::mt19937_64& rng) {
  if (dim < 2 || dim_idler < 1) throw PreconditionError("random_general_probe: bad dimensions");
  GeneralProbe g;
  const RealVector c = random_feasible(dim, n_pr, rng);
  g.coeffs.assign(c.data(), c.data() + c.size());
  std::normal_distribution<double> z(0.0, 1.0);
  for (std::size_t n = 0; n < dim; ++n) {
    ComplexVector phi(static_cast<Eigen::Index>(dim_idler));
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi(i) = Complex(z(rng), z(rng));
    g.idler_states.push_back(phi / phi.norm());
  }
  return g;
}

QuantumOperation::QuantumOperation(std::size_t in_dim, std::size_t out_dim,
                                   std::vector<KrausBranch> branches)
    : in_dim_(in_dim), out_dim_(out_dim), branches_(std::move(branches)) {
  for (const auto& b : branches_)
    if (static_cast<std::size_t>(b.op.rows()) != out_dim_ ||
        static_cast<std::size_t>(b.op.cols()) != in_dim_)
      throw PreconditionError("quantum operation: branch '" + b.label + "' has wrong shape");
}

ComplexMatrix QuantumOperation::apply(const ComplexMatrix& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != in_dim_ || rho.rows() != rho.cols())
    throw PreconditionError("quantum operation: input has wrong dimension");
  return sandwich_sum(branches_, rho, out_dim_);
}

double QuantumOperation::trace_preservation_residual() const {
  const auto d = static_cast<Eigen::Index>(in_dim_);
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& b : branches_) sum.noalias() += b.op.adjoint() * b.op;
  return max_abs(sum - ComplexMatrix::Identity(d, d));
}

ComplexMatrix complete_to_unitary(const ComplexMatrix& partial, const std::vector<bool>& defined,
                                  double tol) {
  const auto d = partial.rows();
  if (partial.cols() != d || defined.size() != static_cast<std::size_t>(d))
    throw PreconditionError("complete_to_unitary: expected a square matrix and one flag per column");
  std::vector<Eigen::Index> basis;
  for (Eigen::Index j = 0; j < d; ++j)
    if (defined[static_cast<std::size_t>(j)]) basis.push_back(j);
  for (std::size_t p = 0; p < basis.size(); ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      const Complex ip = partial.col(basis[q]).dot(partial.col(basis[p]));
      const double expect = p == q ? 1.0 : 0.0;
      if (std::abs(ip - expect) > tol) {
        std::ostringstream os;
        os << "complete_to_unitary: defined columns are not orthonormal (overlap "
           << std::abs(ip - expect) << ")";
        throw NumericalError(os.str());
      }
    }
  ComplexMatrix u = partial;
  Eigen::Index next = 0;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (defined[static_cast<std::size_t>(j)]) continue;
    for (;; ++next) {
      if (next >= d) throw NumericalError("complete_to_unitary: ran out of basis vectors");
      ComplexVector v = ComplexVector::Unit(d, next);
      for (int pass = 0; pass < 2; ++pass)
        for (auto b : basis) v -= u.col(b) * u.col(b).dot(v);
      const double nv = v.norm();
      if (nv > 0.5) {
        u.col(j) = v / nv;
        basis.push_back(j);
        ++next;
        break;
      }
    }
  }
  return u;
}

std::string to_string(TransformScheme scheme) {
  return scheme == TransformScheme::PhotonDifference ? "photon-difference" : "measure-prepare";
}

QuantumOperation build_transformation(const GeneralProbe& general, std::size_t dim_a,
                                      TransformScheme scheme) {
  validate(general);
  const std::size_t ds = general.dim();
  const std::size_t di = general.dim_idler();
  const std::size_t in_dim = dim_a * ds;
  const std::size_t out_dim = dim_a * di;
  const PhotonDifferencePovm povm = build_povm(dim_a, ds);
  std::vector<KrausBranch> branches;

  if (scheme == TransformScheme::PhotonDifference) {
    for (const auto& e : povm.elements)
      branches.push_back(make_branch("k=" + std::to_string(e.k),
                                     conditional_isometry(e, general, dim_a), e.indices));
    return {in_dim, out_dim, std::move(branches)};
  }

  // Outcome "match": U |n, n> = |n, phi_n>. Outcome "mismatch": read the idler
  // photon number n and prepare phi_n.
  const auto& match = povm.element(0);
  branches.push_back(make_branch("match", conditional_isometry(match, general, dim_a), match.indices));
  std::vector<bool> is_match(in_dim, false);
  for (auto idx : match.indices) is_match[static_cast<std::size_t>(idx)] = true;
  for (std::size_t n = 0; n < ds; ++n) {
    KrausBranch b;
    b.label = "prepare n=" + std::to_string(n);
    b.op = ComplexMatrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(in_dim));
    for (std::size_t a = 0; a < dim_a; ++a) {
      const std::size_t col = a * ds + n;
      if (is_match[col]) continue;
      for (std::size_t i = 0; i < di; ++i)
        b.op(static_cast<Eigen::Index>(a * di + i), static_cast<Eigen::Index>(col)) =
            general.idler_states[n](static_cast<Eigen::Index>(i));
    }
    branches.push_back(std::move(b));
  }
  return {in_dim, out_dim, std::move(branches)};
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return 0.5 * trace_norm(a - b);
}

namespace {

std::size_t resolved_env_dim(const ReductionConfig& c) {
  return c.dim_env > 0 ? c.dim_env : thermal_dim_for_tail(c.n_env, kTailWarning);
}

void validate(const ReductionConfig& c) {
  if (c.dim_sig < 2 || c.dim_idler < 1) throw PreconditionError("reduction: bad dimensions");
  if (!(c.r >= 0.0 && c.r <= 1.0)) throw DomainError("reduction: r must be in [0, 1]");
  if (!(c.n_env >= 0.0)) throw DomainError("reduction: n_env must be >= 0");
  if (!(c.n_pr > 0.0) || c.n_pr >= static_cast<double>(c.dim_sig - 1))
    throw DomainError("reduction: n_pr must lie in (0, dim_sig - 1)");
}

}  // namespace

TrialReport run_reduction_trial(const ReductionConfig& config, std::uint64_t seed) {
  validate(config);
  TrialReport t;
  t.seed = seed;
  std::mt19937_64 rng(seed);
  t.probe = random_general_probe(config.dim_sig, config.dim_idler, config.n_pr, rng);
  t.gram_min_eigenvalue = t.probe.gram_min_eigenvalue();

  const EnvironmentSpec env = thermal_env(FockSpace(resolved_env_dim(config)), config.n_env);
  const ReflectionChannel channel(config.dim_sig, env, config.r);
  const ProbeSpec schmidt = make_probe(ProbeKind::TwoModeSchmidt, t.probe.coeffs);
  const StatePair before = received_states_two(schmidt, env, channel);
  const StatePair general = received_states_bipartite(t.probe.amplitudes(), env, channel);

  const QuantumOperation op = build_transformation(t.probe, channel.output_dim());
  t.trace_residual = op.trace_preservation_residual();
  const ComplexMatrix img0 = op.apply(before.rho0.matrix);
  const ComplexMatrix img1 = op.apply(before.rho1.matrix);
  t.distance_rho0 = trace_distance(img0, general.rho0.matrix);
  t.distance_rho1 = trace_distance(img1, general.rho1.matrix);
  bool ok = t.distance_rho0 <= config.tolerance && t.distance_rho1 <= config.tolerance &&
            t.trace_residual <= kTracePreservation;

  if (config.r == 1.0) {
    const QuantumOperation mp =
        build_transformation(t.probe, channel.output_dim(), TransformScheme::MeasurePrepare);
    t.trace_residual = std::max(t.trace_residual, mp.trace_preservation_residual());
    t.measure_prepare_rho0 = trace_distance(mp.apply(before.rho0.matrix), general.rho0.matrix);
    t.measure_prepare_rho1 = trace_distance(mp.apply(before.rho1.matrix), general.rho1.matrix);
    ok = ok && *t.measure_prepare_rho0 <= config.tolerance &&
         *t.measure_prepare_rho1 <= config.tolerance && t.trace_residual <= kTracePreservation;
  }

  t.kappa_schmidt = chernoff_exact(before.rho0.matrix, before.rho1.matrix, kChernoffTolerance).value;
  t.kappa_after = chernoff_exact(img0, img1, kChernoffTolerance).value;
  t.kappa_general =
      chernoff_exact(general.rho0.matrix, general.rho1.matrix, kChernoffTolerance).value;
  t.pass = ok && t.kappa_after >= t.kappa_schmidt - config.dpi_tolerance;
  return t;
}

ReductionReport verify_schmidt_reduction(const ReductionConfig& config) {
  validate(config);
  ReductionReport rep;
  rep.config = config;
  rep.dim_env = resolved_env_dim(config);
  rep.min_dpi_margin = std::numeric_limits<double>::infinity();
  bool all = true;
  for (std::size_t k = 0; k < config.trials; ++k) {
    rep.trials.push_back(run_reduction_trial(config, config.seed + k));
    const auto& t = rep.trials.back();
    rep.max_distance = std::max({rep.max_distance, t.distance_rho0, t.distance_rho1,
                                 t.measure_prepare_rho0.value_or(0.0),
                                 t.measure_prepare_rho1.value_or(0.0)});
    rep.max_trace_residual = std::max(rep.max_trace_residual, t.trace_residual);
    rep.min_dpi_margin = std::min(rep.min_dpi_margin, t.kappa_after - t.kappa_schmidt);
    rep.general_min_kappa = std::min(rep.general_min_kappa.value_or(1.0), t.kappa_general);
    all = all && t.pass;
  }
  if (config.trials == 0) rep.min_dpi_margin = 0.0;

  if (config.direct_check && config.trials > 0) {
    ScenarioParams p;
    p.r = config.r;
    p.n_pr = config.n_pr;
    p.n_env = config.n_env;
    p.dim_sig = config.dim_sig;
    p.dim_env = rep.dim_env;
    p.dim_idler = config.dim_sig;
    const ProbeSpec shape = tmsv_probe(FockSpace(config.dim_sig), config.n_pr, 1.0);
    const RealVector c0 = retract_to_constraints(
        Eigen::Map<const RealVector>(shape.coeffs.data(), static_cast<Eigen::Index>(shape.dim())),
        config.n_pr);
    const ProbeSpec start =
        make_probe(ProbeKind::TwoModeSchmidt, std::vector<double>(c0.data(), c0.data() + c0.size()));
    OptimizerOptions opts;
    opts.seed = config.seed;
    const OptResult best = minimize_kappa(ProbeMode::Two, p, start, ObjectiveKind::Exact, opts);
    rep.schmidt_min_kappa = best.kappa;
    rep.direct_pass = *rep.schmidt_min_kappa <= *rep.general_min_kappa + config.direct_tolerance;
  }
  rep.pass = all && rep.direct_pass;
  return rep;
}

}  // namespace cvqi
