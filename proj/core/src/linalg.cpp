#include "cvqi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <type_traits>

namespace cvqi {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kJacobiEps = 4.0 * std::numeric_limits<double>::epsilon();

double conj_if(double x) { return x; }
Complex conj_if(const Complex& x) { return std::conj(x); }

// Cyclic Jacobi on a Hermitian (or real symmetric) matrix held in `a`.
// On return `a` is diagonal to working precision and `v` holds the
// accumulated rotations.
template <typename Matrix>
int jacobi_sweeps(Matrix& a, Matrix& v) {
  using Scalar = typename Matrix::Scalar;
  const Eigen::Index n = a.rows();
  v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < std::numeric_limits<double>::min()) continue;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        if (mag <= kJacobiEps * std::sqrt(std::abs(app * aqq))) continue;
        rotated = true;

        double bpq = 0.0;
        if constexpr (std::is_same_v<Scalar, double>) {
          bpq = apq;
        } else {
          // Rotate the phase of basis vector q so that a(p,q) becomes real.
          bpq = mag;
          const Scalar phase = std::conj(apq) / mag;
          for (Eigen::Index k = 0; k < n; ++k) {
            if (k == q) continue;
            a(k, q) *= phase;
            a(q, k) = std::conj(a(k, q));
          }
          v.col(q) *= phase;
        }

        const double theta = (aqq - app) / (2.0 * bpq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) = app - t * bpq;
        a(q, q) = aqq + t * bpq;
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = akp - s * (akq + tau * akp);
          a(k, q) = akq + s * (akp - tau * akq);
          a(p, k) = conj_if(a(k, p));
          a(q, k) = conj_if(a(k, q));
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = vkp - s * (vkq + tau * vkp);
          v(k, q) = vkq + s * (vkp - tau * vkq);
        }
      }
    }
    if (!rotated) return sweep + 1;
  }
  throw NumericalError("hermitian_eig: Jacobi iteration did not converge");
}

HermitianEigen sorted_descending(const RealVector& w, const ComplexMatrix& v,
                                 int sweeps) {
  const Eigen::Index n = w.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return w(i) > w(j); });
  HermitianEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = w(order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  out.sweeps = sweeps;
  return out;
}

}  // namespace

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

HermiticityDefect hermiticity_defect(const ComplexMatrix& a) {
  HermiticityDefect d;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i <= j && i < a.rows(); ++i) {
      const double e = std::abs(a(i, j) - std::conj(a(j, i)));
      if (e > d.value) d = {e, i, j};
    }
  }
  return d;
}

bool is_hermitian(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  return hermiticity_defect(a).value <= rel_tol * max_abs(a);
}

void require_hermitian(const ComplexMatrix& a, const std::string& what) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << what << ": matrix is " << a.rows() << "x" << a.cols() << ", not square";
    throw PreconditionError(os.str());
  }
  const auto d = hermiticity_defect(a);
  if (d.value > tol::kHermitian * max_abs(a)) {
    std::ostringstream os;
    os << what << ": not Hermitian, |A(" << d.row << "," << d.col << ") - conj(A("
       << d.col << "," << d.row << "))| = " << d.value;
    throw PreconditionError(os.str());
  }
}

HermitianEigen hermitian_eig(const ComplexMatrix& a) {
  require_hermitian(a, "hermitian_eig");
  const Eigen::Index n = a.rows();
  if (n == 0) return {};
  // Symmetrize so both triangles carry identical data.
  const ComplexMatrix h = 0.5 * (a + a.adjoint());
  if (h.imag().cwiseAbs().maxCoeff() == 0.0) {
    RealMatrix ar = h.real();
    RealMatrix vr;
    const int sweeps = jacobi_sweeps(ar, vr);
    return sorted_descending(ar.diagonal(), vr.cast<Complex>(), sweeps);
  }
  ComplexMatrix ac = h;
  ComplexMatrix vc;
  const int sweeps = jacobi_sweeps(ac, vc);
  return sorted_descending(ac.diagonal().real(), vc, sweeps);
}

PsdSpectrum psd_spectrum(const ComplexMatrix& a) {
  auto eig = hermitian_eig(a);
  PsdSpectrum out;
  out.vectors = std::move(eig.vectors);
  out.values = eig.values;
  for (Eigen::Index i = 0; i < out.values.size(); ++i) {
    const double w = out.values(i);
    if (w < -tol::kNegativeEigen) {
      std::ostringstream os;
      os << "not PSD: eigenvalue " << w << " below -" << tol::kNegativeEigen;
      throw NumericalError(os.str());
    }
    if (w < tol::kEigenFloor) {
      out.values(i) = 0.0;
      ++out.clipped_count;
      out.clipped_mass += std::abs(w);
    }
  }
  return out;
}

double support_power(double x, double s) {
  if (x <= 0.0) return 0.0;
  if (s == 0.0) return 1.0;
  return std::pow(x, s);
}

MatrixPower matrix_power(const ComplexMatrix& a, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    std::ostringstream os;
    os << "matrix_power: exponent " << s << " outside [0,1]";
    throw DomainError(os.str());
  }
  const auto spec = psd_spectrum(a);
  RealVector ws(spec.values.size());
  for (Eigen::Index i = 0; i < ws.size(); ++i) ws(i) = support_power(spec.values(i), s);
  MatrixPower out;
  out.value = spec.vectors * ws.asDiagonal() * spec.vectors.adjoint();
  out.clipped_count = spec.clipped_count;
  out.clipped_mass = spec.clipped_mass;
  return out;
}

ComplexMatrix matrix_exp_skew(const ComplexMatrix& k) {
  if (k.rows() != k.cols()) throw PreconditionError("matrix_exp_skew: matrix not square");
  const double defect = max_abs(k + k.adjoint());
  if (defect > tol::kHermitian * std::max(1.0, max_abs(k))) {
    std::ostringstream os;
    os << "matrix_exp_skew: input not anti-Hermitian, max|K + K^dagger| = " << defect;
    throw PreconditionError(os.str());
  }
  const ComplexMatrix h = Complex(0.0, 1.0) * k;  // K = -iH
  const auto eig = hermitian_eig(0.5 * (h + h.adjoint()));
  ComplexVector phases(eig.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, -eig.values(i));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

double trace_norm(const ComplexMatrix& a) {
  const auto eig = hermitian_eig(a);
  return eig.values.cwiseAbs().sum();
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& a, std::size_t d1, std::size_t d2,
                            Keep keep) {
  const auto n1 = static_cast<Eigen::Index>(d1);
  const auto n2 = static_cast<Eigen::Index>(d2);
  if (a.rows() != n1 * n2 || a.cols() != n1 * n2) {
    std::ostringstream os;
    os << "partial_trace: matrix is " << a.rows() << "x" << a.cols() << ", expected "
       << n1 * n2 << "x" << n1 * n2;
    throw PreconditionError(os.str());
  }
  if (keep == Keep::First) {
    ComplexMatrix out = ComplexMatrix::Zero(n1, n1);
    for (Eigen::Index i = 0; i < n1; ++i)
      for (Eigen::Index j = 0; j < n1; ++j)
        for (Eigen::Index k = 0; k < n2; ++k) out(i, j) += a(i * n2 + k, j * n2 + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(n2, n2);
  for (Eigen::Index i = 0; i < n1; ++i) out += a.block(i * n2, i * n2, n2, n2);
  return out;
}

std::vector<std::vector<Eigen::Index>> sparsity_blocks(
    const std::vector<const ComplexMatrix*>& matrices) {
  if (matrices.empty()) return {};
  const Eigen::Index n = matrices.front()->rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& px = parent[static_cast<std::size_t>(x)];
      px = parent[static_cast<std::size_t>(px)];
      x = px;
    }
    return x;
  };
  for (const auto* m : matrices) {
    if (m->rows() != n || m->cols() != n)
      throw PreconditionError("sparsity_blocks: matrices differ in shape");
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        if ((*m)(i, j) != Complex(0.0) || (*m)(j, i) != Complex(0.0)) {
          const auto ri = find(i);
          const auto rj = find(j);
          if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
        }
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<std::ptrdiff_t> slot(static_cast<std::size_t>(n), -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto root = static_cast<std::size_t>(find(i));
    if (slot[root] < 0) {
      slot[root] = static_cast<std::ptrdiff_t>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return blocks;
}

ComplexMatrix principal_submatrix(const ComplexMatrix& a,
                                  const std::vector<Eigen::Index>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  ComplexMatrix out(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i)
      out(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace cvqi
