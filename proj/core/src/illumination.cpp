#include "cvqi/illumination.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvqi {

namespace {

void require_reflectivity(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream os;
    os << "reflectivity r = " << r << " outside [0,1]";
    throw DomainError(os.str());
  }
}

ChannelDiagnostics diagnose(double probe_tail, const EnvironmentSpec& env,
                            const ComplexMatrix& rho0, const ComplexMatrix& rho1,
                            std::size_t dim_idler) {
  ChannelDiagnostics d;
  d.input_tail = probe_tail + env.tail_mass;
  if (d.input_tail > kTailHardLimit) {
    std::ostringstream os;
    os << "received states: input truncation tail " << d.input_tail << " exceeds "
       << kTailHardLimit;
    throw TruncationError(os.str());
  }
  d.tail_warning = d.input_tail > kTailWarning;
  d.trace_defect = std::abs(rho1.trace() - rho0.trace());
  const auto first_spill = static_cast<Eigen::Index>(env.dim() * dim_idler);
  for (Eigen::Index i = first_spill; i < rho1.rows(); ++i) d.spill_mass += rho1(i, i).real();
  return d;
}

}  // namespace

double ScenarioParams::theta() const { return std::asin(r); }

void ScenarioParams::validate() const {
  require_reflectivity(r);
  if (!(n_pr >= 0.0)) throw DomainError("scenario: n_pr must be >= 0");
  if (!(n_env >= 0.0)) throw DomainError("scenario: n_env must be >= 0");
  if (dim_sig < 2 || dim_env < 2 || dim_idler == 1)
    throw PreconditionError("scenario: truncation dimensions must be >= 2");
}

RealMatrix beam_splitter_block(std::size_t total, double theta) {
  const auto n = static_cast<Eigen::Index>(total) + 1;
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  const double big_n = static_cast<double>(total);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double dj = static_cast<double>(j);
    if (j + 1 < n) g(j + 1, j) += std::sqrt((dj + 1.0) * (big_n - dj));  // a^dag b
    if (j > 0) g(j - 1, j) -= std::sqrt(dj * (big_n - dj + 1.0));        // -a b^dag
  }
  return matrix_exp_skew(theta * g).real();
}

BeamSplitter beam_splitter_unitary(const FockSpace& sig, const FockSpace& env, double r) {
  require_reflectivity(r);
  const ComplexMatrix a = annihilation(sig);
  const ComplexMatrix b = annihilation(env);
  const ComplexMatrix id_s = ComplexMatrix::Identity(a.rows(), a.rows());
  const ComplexMatrix id_e = ComplexMatrix::Identity(b.rows(), b.rows());
  const ComplexMatrix big_a = tensor_product(a, id_e);
  const ComplexMatrix big_b = tensor_product(id_s, b);
  const ComplexMatrix gen = big_a.adjoint() * big_b - big_a * big_b.adjoint();
  BeamSplitter out;
  out.unitary = matrix_exp_skew(std::asin(r) * gen);
  const std::size_t complete = std::min(sig.dim(), env.dim());
  for (std::size_t n = complete; n + 2 <= sig.dim() + env.dim(); ++n) out.edge_blocks.push_back(n);
  return out;
}

ReflectionChannel::ReflectionChannel(std::size_t dim_sig, const EnvironmentSpec& env, double r)
    : dim_sig_(dim_sig), dim_env_(env.dim()), dim_out_(dim_sig + env.dim() - 1), r_(r) {
  require_reflectivity(r);
  if (dim_sig < 2 || env.dim() < 2)
    throw PreconditionError("ReflectionChannel: dimensions must be >= 2");
  const double theta = std::asin(r);
  std::vector<RealMatrix> blocks;
  blocks.reserve(dim_out_);
  for (std::size_t total = 0; total < dim_out_; ++total)
    blocks.push_back(beam_splitter_block(total, theta));

  table_.assign(dim_sig_ * dim_sig_ * dim_out_, 0.0);
  for (std::size_t m = 0; m < dim_env_; ++m) {
    const double lam = env.lambdas[m];
    if (lam == 0.0) continue;
    for (std::size_t n = 0; n < dim_sig_; ++n) {
      const RealMatrix& bn = blocks[n + m];
      for (std::size_t n2 = 0; n2 < dim_sig_; ++n2) {
        const RealMatrix& bn2 = blocks[n2 + m];
        double* row = &table_[(n * dim_sig_ + n2) * dim_out_];
        const std::size_t kmax = std::min(n, n2) + m;
        for (std::size_t k = 0; k <= kmax; ++k) {
          const auto ki = static_cast<Eigen::Index>(k);
          row[n + m - k] += lam * bn(ki, static_cast<Eigen::Index>(n)) *
                            bn2(ki, static_cast<Eigen::Index>(n2));
        }
      }
    }
  }
}

ComplexMatrix ReflectionChannel::apply_basis(std::size_t n, std::size_t n2) const {
  const auto d = static_cast<Eigen::Index>(dim_out_);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (std::size_t b = 0; b < dim_out_; ++b) {
    const auto b2 = static_cast<std::ptrdiff_t>(b + n2) - static_cast<std::ptrdiff_t>(n);
    if (b2 < 0 || b2 >= d) continue;
    out(static_cast<Eigen::Index>(b), b2) = element(n, n2, b);
  }
  return out;
}

ComplexMatrix ReflectionChannel::apply(const ComplexMatrix& x) const {
  const auto ds = static_cast<Eigen::Index>(dim_sig_);
  if (x.rows() != ds || x.cols() != ds)
    throw PreconditionError("ReflectionChannel::apply: operator does not match signal dim");
  const auto d = static_cast<Eigen::Index>(dim_out_);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (std::size_t n = 0; n < dim_sig_; ++n) {
    for (std::size_t n2 = 0; n2 < dim_sig_; ++n2) {
      const Complex xv = x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n2));
      if (xv == Complex(0.0)) continue;
      for (std::size_t b = 0; b < dim_out_; ++b) {
        const auto b2 = static_cast<std::ptrdiff_t>(b + n2) - static_cast<std::ptrdiff_t>(n);
        if (b2 < 0 || b2 >= d) continue;
        out(static_cast<Eigen::Index>(b), b2) += xv * element(n, n2, b);
      }
    }
  }
  return out;
}

ComplexMatrix environment_state(const EnvironmentSpec& env, std::size_t out_dim) {
  const auto d = static_cast<Eigen::Index>(out_dim);
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (std::size_t m = 0; m < env.dim() && m < out_dim; ++m)
    rho(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = env.lambdas[m];
  return rho;
}

StatePair received_states_single(const ProbeSpec& probe, const EnvironmentSpec& env,
                                 const ScenarioParams& params) {
  params.validate();
  if (probe.kind != ProbeKind::SingleMode)
    throw PreconditionError("received_states_single: probe is not single-mode");
  if (probe.dim() != params.dim_sig || env.dim() != params.dim_env)
    throw PreconditionError("received_states_single: dimension mismatch with scenario");
  return received_states_single(probe, env, ReflectionChannel(probe.dim(), env, params.r));
}

StatePair received_states_single(const ProbeSpec& probe, const EnvironmentSpec& env,
                                 const ReflectionChannel& channel) {
  if (probe.kind != ProbeKind::SingleMode)
    throw PreconditionError("received_states_single: probe is not single-mode");
  if (probe.dim() != channel.dim_sig() || env.dim() != channel.dim_env())
    throw PreconditionError("received_states_single: channel does not match probe");
  const auto d = static_cast<Eigen::Index>(channel.output_dim());
  ComplexMatrix rho1 = ComplexMatrix::Zero(d, d);
  const auto& c = probe.coeffs;
  for (std::size_t n = 0; n < probe.dim(); ++n) {
    for (std::size_t n2 = 0; n2 < probe.dim(); ++n2) {
      const double w = c[n] * c[n2];
      if (w == 0.0) continue;
      for (std::size_t b = 0; b < channel.output_dim(); ++b) {
        const auto b2 = static_cast<std::ptrdiff_t>(b + n2) - static_cast<std::ptrdiff_t>(n);
        if (b2 < 0 || b2 >= d) continue;
        rho1(static_cast<Eigen::Index>(b), b2) += w * channel.element(n, n2, b);
      }
    }
  }
  StatePair pair;
  pair.rho0 = {environment_state(env, channel.output_dim()), {channel.output_dim()}};
  pair.rho1 = {std::move(rho1), {channel.output_dim()}};
  pair.layout = {{"detected"}, {channel.output_dim()}};
  pair.diagnostics = diagnose(probe.tail_mass, env, pair.rho0.matrix, pair.rho1.matrix, 1);
  return pair;
}

StatePair received_states_two(const ProbeSpec& probe, const EnvironmentSpec& env,
                              const ScenarioParams& params) {
  params.validate();
  if (probe.kind != ProbeKind::TwoModeSchmidt)
    throw PreconditionError("received_states_two: probe is not in Schmidt form");
  if (probe.dim() != params.dim_sig || env.dim() != params.dim_env ||
      (params.dim_idler != 0 && params.dim_idler != probe.dim()))
    throw PreconditionError("received_states_two: dimension mismatch with scenario");
  return received_states_two(probe, env, ReflectionChannel(probe.dim(), env, params.r));
}

StatePair received_states_two(const ProbeSpec& probe, const EnvironmentSpec& env,
                              const ReflectionChannel& channel) {
  if (probe.kind != ProbeKind::TwoModeSchmidt)
    throw PreconditionError("received_states_two: probe is not in Schmidt form");
  if (probe.dim() != channel.dim_sig() || env.dim() != channel.dim_env())
    throw PreconditionError("received_states_two: channel does not match probe");
  const std::size_t dout = channel.output_dim();
  const std::size_t di = probe.dim();
  const auto total = static_cast<Eigen::Index>(dout * di);
  const auto& c = probe.coeffs;

  ComplexMatrix rho1 = ComplexMatrix::Zero(total, total);
  for (std::size_t n = 0; n < di; ++n) {
    for (std::size_t n2 = 0; n2 < di; ++n2) {
      const double w = c[n] * c[n2];
      if (w == 0.0) continue;
      for (std::size_t b = 0; b < dout; ++b) {
        const auto b2 = static_cast<std::ptrdiff_t>(b + n2) - static_cast<std::ptrdiff_t>(n);
        if (b2 < 0 || b2 >= static_cast<std::ptrdiff_t>(dout)) continue;
        const double v = channel.element(n, n2, b);
        if (v == 0.0) continue;
        rho1(static_cast<Eigen::Index>(b * di + n),
             static_cast<Eigen::Index>(static_cast<std::size_t>(b2) * di + n2)) = w * v;
      }
    }
  }
  ComplexMatrix rho0 = ComplexMatrix::Zero(total, total);
  for (std::size_t m = 0; m < env.dim(); ++m)
    for (std::size_t n = 0; n < di; ++n) {
      const auto i = static_cast<Eigen::Index>(m * di + n);
      rho0(i, i) = env.lambdas[m] * c[n] * c[n];
    }

  StatePair pair;
  pair.rho0 = {std::move(rho0), {dout, di}};
  pair.rho1 = {std::move(rho1), {dout, di}};
  pair.layout = {{"detected", "idler"}, {dout, di}};
  pair.diagnostics = diagnose(probe.tail_mass, env, pair.rho0.matrix, pair.rho1.matrix, di);
  return pair;
}

StatePair received_states_bipartite(const ComplexMatrix& psi, const EnvironmentSpec& env,
                                    double r) {
  const ReflectionChannel channel(static_cast<std::size_t>(psi.rows()), env, r);
  return received_states_bipartite(psi, env, channel);
}

StatePair received_states_bipartite(const ComplexMatrix& psi, const EnvironmentSpec& env,
                                    const ReflectionChannel& channel) {
  const auto ds = static_cast<std::size_t>(psi.rows());
  const auto di = static_cast<std::size_t>(psi.cols());
  if (ds != channel.dim_sig() || env.dim() != channel.dim_env())
    throw PreconditionError("received_states_bipartite: channel does not match probe");
  const std::size_t dout = channel.output_dim();
  const auto total = static_cast<Eigen::Index>(dout * di);
  const auto idi = static_cast<Eigen::Index>(di);

  ComplexMatrix rho1 = ComplexMatrix::Zero(total, total);
  for (std::size_t n = 0; n < ds; ++n) {
    for (std::size_t n2 = 0; n2 < ds; ++n2) {
      const ComplexMatrix outer = psi.row(static_cast<Eigen::Index>(n)).transpose() *
                                  psi.row(static_cast<Eigen::Index>(n2)).conjugate();
      if (outer.cwiseAbs().maxCoeff() == 0.0) continue;
      for (std::size_t b = 0; b < dout; ++b) {
        const auto b2 = static_cast<std::ptrdiff_t>(b + n2) - static_cast<std::ptrdiff_t>(n);
        if (b2 < 0 || b2 >= static_cast<std::ptrdiff_t>(dout)) continue;
        const double v = channel.element(n, n2, b);
        if (v == 0.0) continue;
        rho1.block(static_cast<Eigen::Index>(b) * idi, b2 * idi, idi, idi) += v * outer;
      }
    }
  }
  // Mirror blocks are summed from separately rounded products; restore exact
  // Hermiticity so small sparsity blocks pass their relative check.
  rho1 = 0.5 * (rho1 + rho1.adjoint()).eval();
  ComplexMatrix idler = psi.transpose() * psi.conjugate();
  idler = 0.5 * (idler + idler.adjoint()).eval();
  const ComplexMatrix rho0 = tensor_product(environment_state(env, dout), idler);

  StatePair pair;
  pair.rho0 = {rho0, {dout, di}};
  pair.rho1 = {std::move(rho1), {dout, di}};
  pair.layout = {{"detected", "idler"}, {dout, di}};
  pair.diagnostics = diagnose(0.0, env, pair.rho0.matrix, pair.rho1.matrix, di);
  return pair;
}

double gamma(const ProbeSpec& probe) {
  const auto& c = probe.coeffs;
  double g = 0.0;
  for (std::size_t n = 0; n + 1 < c.size(); ++n)
    g += c[n + 1] * c[n] * std::sqrt(static_cast<double>(n + 1));
  return g;
}

ComplexMatrix delta_rho_single(const ProbeSpec& probe, const EnvironmentSpec& env) {
  if (probe.kind != ProbeKind::SingleMode)
    throw PreconditionError("delta_rho_single: probe is not single-mode");
  const double g = gamma(probe);
  const auto d = static_cast<Eigen::Index>(env.dim());
  ComplexMatrix delta = ComplexMatrix::Zero(d, d);
  for (std::size_t m = 0; m + 1 < env.dim(); ++m) {
    const double v = std::sqrt(static_cast<double>(m + 1)) *
                     (env.lambdas[m + 1] - env.lambdas[m]) * g;
    const auto i = static_cast<Eigen::Index>(m);
    delta(i + 1, i) = v;
    delta(i, i + 1) = v;
  }
  return delta;
}

ComplexMatrix delta_rho_two(const ProbeSpec& probe, const EnvironmentSpec& env) {
  if (probe.kind != ProbeKind::TwoModeSchmidt)
    throw PreconditionError("delta_rho_two: probe is not in Schmidt form");
  const std::size_t di = probe.dim();
  const auto total = static_cast<Eigen::Index>(env.dim() * di);
  const auto& c = probe.coeffs;
  ComplexMatrix delta = ComplexMatrix::Zero(total, total);
  for (std::size_t m = 0; m + 1 < env.dim(); ++m) {
    const double env_part =
        std::sqrt(static_cast<double>(m + 1)) * (env.lambdas[m + 1] - env.lambdas[m]);
    for (std::size_t n = 0; n + 1 < di; ++n) {
      const double v = env_part * std::sqrt(static_cast<double>(n + 1)) * c[n] * c[n + 1];
      const auto lo = static_cast<Eigen::Index>(m * di + n);
      const auto hi = static_cast<Eigen::Index>((m + 1) * di + n + 1);
      delta(hi, lo) = v;
      delta(lo, hi) = v;
    }
  }
  return delta;
}

ComplexMatrix embed_environment_operator(const ComplexMatrix& op, std::size_t dim_env,
                                         std::size_t out_dim, std::size_t dim_idler) {
  const std::size_t di = std::max<std::size_t>(dim_idler, 1);
  if (static_cast<std::size_t>(op.rows()) != dim_env * di || op.rows() != op.cols())
    throw PreconditionError("embed_environment_operator: shape mismatch");
  const auto big = static_cast<Eigen::Index>(out_dim * di);
  ComplexMatrix out = ComplexMatrix::Zero(big, big);
  // Row-major (m, i) ordering keeps the environment block contiguous.
  out.topLeftCorner(op.rows(), op.cols()) = op;
  return out;
}

}  // namespace cvqi
