#pragma once

// Small dense complex linear algebra: the Hermitian eigensolver used by the
// separability diagnostics, plus a few matrix helpers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "qcka/errors.hpp"

namespace qcka {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const CMatrix& m) {
  return max_abs(m - m.adjoint());
}

struct HermitianEigen {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k pairs with values[k]
  int sweeps = 0;
};

struct JacobiOptions {
  double hermitian_tol = 1e-10;
  double offdiag_threshold = 1e-13;
  int max_sweeps = 100;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each (p, q) rotation first strips the phase of a_pq with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that annihilates
/// the (now real) off-diagonal element. Sweeps continue until the Frobenius
/// mass below the diagonal drops under `offdiag_threshold` (scaled by the
/// matrix norm when that exceeds 1).
inline HermitianEigen jacobi_eigen(const CMatrix& input, const JacobiOptions& opts = {}) {
  if (input.rows() != input.cols()) throw ValidationError("jacobi_eigen: matrix is not square");
  const double defect = hermiticity_defect(input);
  if (!(defect <= opts.hermitian_tol)) {
    throw ValidationError("jacobi_eigen: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const Eigen::Index n = input.rows();
  CMatrix a = 0.5 * (input + input.adjoint());
  CMatrix v = CMatrix::Identity(n, n);

  auto off_mass = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i) s += std::norm(a(i, j));
    return std::sqrt(2.0 * s);
  };
  const double scale = std::max(1.0, a.norm());

  HermitianEigen out;
  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    if (off_mass() <= opts.offdiag_threshold * scale) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const cplx phase = apq / r;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
        const cplx u_pp = c;
        const cplx u_pq = s;
        const cplx u_qp = -s * std::conj(phase);
        const cplx u_qq = c * std::conj(phase);
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * u_pp + akq * u_qp;
          a(k, q) = akp * u_pq + akq * u_qq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
          a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * u_pp + vkq * u_qp;
          v(k, q) = vkp * u_pq + vkq * u_qq;
        }
      }
    }
  }
  if (off_mass() > opts.offdiag_threshold * scale) {
    throw NumericError("jacobi_eigen: no convergence after " + std::to_string(opts.max_sweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });
  out.values.reserve(order.size());
  out.vectors.resize(n, n);
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.values.push_back(a(order[k], order[k]).real());
    out.vectors.col(static_cast<Eigen::Index>(k)) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

inline std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  return jacobi_eigen(m).values;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMatrix projector(const CVector& v) { return v * v.adjoint(); }

}  // namespace qcka
