#include "cvqi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvqi {

namespace {

void require_pair(const ComplexMatrix& rho0, const ComplexMatrix& rho1, const char* what) {
  if (rho0.rows() != rho1.rows() || rho0.cols() != rho1.cols() || rho0.rows() != rho0.cols()) {
    std::ostringstream os;
    os << what << ": states have mismatched shapes";
    throw PreconditionError(os.str());
  }
  require_hermitian(rho0, what);
  require_hermitian(rho1, what);
}

void index_blocks(const std::vector<std::vector<Eigen::Index>>& blocks, Eigen::Index n,
                  std::vector<std::size_t>& block_of, std::vector<Eigen::Index>& position) {
  block_of.assign(static_cast<std::size_t>(n), 0);
  position.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t k = 0; k < blocks[b].size(); ++k) {
      block_of[static_cast<std::size_t>(blocks[b][k])] = b;
      position[static_cast<std::size_t>(blocks[b][k])] = static_cast<Eigen::Index>(k);
    }
}

// V (D o A) V^dagger
ComplexMatrix sandwich(const ComplexMatrix& v, const RealMatrix& dd, const ComplexMatrix& a) {
  return v * dd.cast<Complex>().cwiseProduct(a) * v.adjoint();
}

RealMatrix divided_differences(const RealVector& w, double p) {
  const Eigen::Index n = w.size();
  RealMatrix dd(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k <= j; ++k) {
      dd(j, k) = power_divided_difference(w(j), w(k), p);
      dd(k, j) = dd(j, k);
    }
  return dd;
}

}  // namespace

Complex BlockOperator::at(Eigen::Index i, Eigen::Index j) const {
  const auto bi = block_of[static_cast<std::size_t>(i)];
  if (bi != block_of[static_cast<std::size_t>(j)]) return Complex(0.0);
  return values[bi](position[static_cast<std::size_t>(i)], position[static_cast<std::size_t>(j)]);
}

ComplexMatrix BlockOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(block_of.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t j = 0; j < blocks[b].size(); ++j)
      for (std::size_t i = 0; i < blocks[b].size(); ++i)
        out(blocks[b][i], blocks[b][j]) =
            values[b](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  ScalarMinimum best;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  best = f_lo <= f_hi ? ScalarMinimum{lo, f_lo, 2} : ScalarMinimum{hi, f_hi, 2};

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  std::size_t evals = 4;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  const double x = fc <= fd ? c : d;
  const double fx = std::min(fc, fd);
  if (fx < best.value) best = {x, fx, 0};
  best.iterations = evals;
  return best;
}

double power_divided_difference(double a, double b, double p) {
  if (p == 1.0) return 1.0;
  if (a <= 0.0 && b <= 0.0) return 0.0;
  if (b <= 0.0) return support_power(a, p) / a;
  if (a <= 0.0) return support_power(b, p) / b;
  if (p == 0.0) return 0.0;
  const double l = std::log(a / b);
  if (std::abs(l) < 1e-12) return p * std::pow(0.5 * (a + b), p - 1.0);
  return std::pow(b, p - 1.0) * std::expm1(p * l) / std::expm1(l);
}

ChernoffSpectrum::ChernoffSpectrum(const ComplexMatrix& rho0, const ComplexMatrix& rho1) {
  require_pair(rho0, rho1, "chernoff");
  const auto blocks = sparsity_blocks({&rho0, &rho1});
  index_blocks(blocks, rho0.rows(), block_of_, position_);
  blocks_.reserve(blocks.size());
  for (const auto& idx : blocks) {
    Block b;
    b.index = idx;
    b.rho0 = psd_spectrum(principal_submatrix(rho0, idx));
    b.rho1 = psd_spectrum(principal_submatrix(rho1, idx));
    b.overlap = (b.rho1.vectors.adjoint() * b.rho0.vectors).cwiseAbs2();
    clipped_count_ += b.rho0.clipped_count + b.rho1.clipped_count;
    clipped_mass_ += b.rho0.clipped_mass + b.rho1.clipped_mass;
    blocks_.push_back(std::move(b));
  }
}

double ChernoffSpectrum::objective(double s) const {
  double total = 0.0;
  for (const auto& b : blocks_) {
    const Eigen::Index n = b.overlap.rows();
    RealVector p1(n);
    RealVector p0(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      p1(j) = support_power(b.rho1.values(j), s);
      p0(j) = support_power(b.rho0.values(j), 1.0 - s);
    }
    total += p1.dot(b.overlap * p0);
  }
  return total;
}

ChernoffSpectrum::Sensitivity ChernoffSpectrum::sensitivity(double s) const {
  Sensitivity out;
  for (auto* op : {&out.d_rho0, &out.d_rho1}) {
    op->block_of = block_of_;
    op->position = position_;
    op->blocks.reserve(blocks_.size());
    op->values.reserve(blocks_.size());
  }
  for (const auto& b : blocks_) {
    const Eigen::Index n = b.overlap.rows();
    RealVector p1(n);
    RealVector p0(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      p1(j) = support_power(b.rho1.values(j), s);
      p0(j) = support_power(b.rho0.values(j), 1.0 - s);
    }
    const ComplexMatrix m = b.rho1.vectors.adjoint() * b.rho0.vectors;  // V1^dag V0
    // rho0^{1-s} and rho1^s expressed in the other state's eigenbasis.
    const ComplexMatrix a1 = m * p0.cast<Complex>().asDiagonal() * m.adjoint();
    const ComplexMatrix a0 = m.adjoint() * p1.cast<Complex>().asDiagonal() * m;
    out.d_rho1.blocks.push_back(b.index);
    out.d_rho1.values.push_back(
        sandwich(b.rho1.vectors, divided_differences(b.rho1.values, s), a1));
    out.d_rho0.blocks.push_back(b.index);
    out.d_rho0.values.push_back(
        sandwich(b.rho0.vectors, divided_differences(b.rho0.values, 1.0 - s), a0));
  }
  return out;
}

BoundResult helstrom(const ComplexMatrix& rho0, const ComplexMatrix& rho1) {
  require_pair(rho0, rho1, "helstrom");
  const ComplexMatrix diff = rho0 - rho1;
  const auto blocks = sparsity_blocks({&diff});
  double norm = 0.0;
  for (const auto& idx : blocks) norm += trace_norm(principal_submatrix(diff, idx));
  BoundResult out;
  out.value = std::clamp((1.0 - 0.5 * norm) / 2.0, 0.0, 0.5);
  out.diagnostics.blocks = blocks.size();
  return out;
}

BoundResult helstrom(const StatePair& pair) {
  auto out = helstrom(pair.rho0.matrix, pair.rho1.matrix);
  out.diagnostics.truncation_tail = pair.diagnostics.input_tail;
  return out;
}

HelstromSensitivity helstrom_sensitivity(const ComplexMatrix& rho0, const ComplexMatrix& rho1) {
  require_pair(rho0, rho1, "helstrom");
  const ComplexMatrix diff = rho0 - rho1;
  HelstromSensitivity out;
  const auto blocks = sparsity_blocks({&diff});
  double norm = 0.0;
  for (auto* op : {&out.d_rho0, &out.d_rho1}) {
    op->blocks = blocks;
    index_blocks(blocks, diff.rows(), op->block_of, op->position);
  }
  for (const auto& idx : blocks) {
    const auto eig = hermitian_eig(principal_submatrix(diff, idx));
    RealVector sign(eig.values.size());
    for (Eigen::Index i = 0; i < sign.size(); ++i) {
      norm += std::abs(eig.values(i));
      sign(i) = eig.values(i) > 0.0 ? 1.0 : (eig.values(i) < 0.0 ? -1.0 : 0.0);
    }
    const ComplexMatrix sgn = eig.vectors * sign.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    // p_err = 1/2 - ||rho0 - rho1||_1 / 4
    out.d_rho0.values.push_back(-0.25 * sgn);
    out.d_rho1.values.push_back(0.25 * sgn);
  }
  out.p_err = (1.0 - 0.5 * norm) / 2.0;
  return out;
}

BoundResult chernoff_exact(const ComplexMatrix& rho0, const ComplexMatrix& rho1, double s_tol) {
  const ChernoffSpectrum spectrum(rho0, rho1);
  const auto min = golden_section_minimize([&](double s) { return spectrum.objective(s); }, 0.0,
                                           1.0, s_tol);
  BoundResult out;
  out.value = std::clamp(min.value, 0.0, 1.0);
  out.s_opt = min.x;
  out.diagnostics.iterations = min.iterations;
  out.diagnostics.clipped_count = spectrum.clipped_count();
  out.diagnostics.clipped_eigenmass = spectrum.clipped_mass();
  out.diagnostics.blocks = spectrum.block_count();
  return out;
}

BoundResult chernoff_exact(const StatePair& pair, double s_tol) {
  auto out = chernoff_exact(pair.rho0.matrix, pair.rho1.matrix, s_tol);
  out.diagnostics.truncation_tail = pair.diagnostics.input_tail;
  return out;
}

Rho0Eigensystem diagonal_eigensystem(const RealVector& diagonal) { return {diagonal, {}}; }

Rho0Eigensystem eigensystem_of(const ComplexMatrix& rho0) {
  auto spec = psd_spectrum(rho0);
  return {spec.values, spec.vectors};
}

Rho0Eigensystem environment_eigensystem(const EnvironmentSpec& env) {
  return diagonal_eigensystem(
      Eigen::Map<const RealVector>(env.lambdas.data(), static_cast<Eigen::Index>(env.dim())));
}

Rho0Eigensystem product_eigensystem(const EnvironmentSpec& env, const ProbeSpec& probe) {
  const std::size_t di = probe.dim();
  RealVector values(static_cast<Eigen::Index>(env.dim() * di));
  for (std::size_t m = 0; m < env.dim(); ++m)
    for (std::size_t n = 0; n < di; ++n)
      values(static_cast<Eigen::Index>(m * di + n)) =
          env.lambdas[m] * probe.coeffs[n] * probe.coeffs[n];
  return diagonal_eigensystem(values);
}

double low_r_coefficient(const ComplexMatrix& delta, const Rho0Eigensystem& rho0) {
  const Eigen::Index n = rho0.values.size();
  if (delta.rows() != n || delta.cols() != n)
    throw PreconditionError("chernoff_low_r: delta and rho0 eigensystem differ in dimension");
  require_hermitian(delta, "chernoff_low_r");
  const ComplexMatrix rotated =
      rho0.vectors.size() == 0 ? delta : ComplexMatrix(rho0.vectors.adjoint() * delta * rho0.vectors);
  RealVector root(n);
  for (Eigen::Index j = 0; j < n; ++j) root(j) = std::sqrt(std::max(rho0.values(j), 0.0));
  double sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double num = std::norm(rotated(j, k));
      if (num == 0.0) continue;
      const double den = root(j) + root(k);
      if (den == 0.0) {
        std::ostringstream os;
        os << "chernoff_low_r: support violation, <phi_" << j << "|delta|phi_" << k
           << "> = " << std::sqrt(num) << " with zero eigenvalues";
        throw NumericalError(os.str());
      }
      sum += num / (den * den);
    }
  }
  return 0.5 * sum;
}

BoundResult chernoff_low_r(const ComplexMatrix& delta, const Rho0Eigensystem& rho0, double r) {
  BoundResult out;
  out.value = 1.0 - r * r * low_r_coefficient(delta, rho0);
  out.s_opt = 0.5;
  return out;
}

}  // namespace cvqi
