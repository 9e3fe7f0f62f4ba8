#pragma once

// Unitaries as products of two-coordinate rotations with phases. A d x d
// unitary takes d(d-1) real parameters: one (angle, phase) pair per plane
// (p,q), p < q, applied in lexicographic order. The diagonal phases a general
// unitary would also carry are omitted; they do not change the outcome
// statistics of the basis formed by its columns.

#include <cmath>
#include <cstddef>
#include <span>

#include "qcka/errors.hpp"
#include "qcka/linalg.hpp"

namespace qcka {

inline std::size_t rotation_parameter_count(std::size_t d) { return d * (d - 1); }

inline CMatrix unitary_from_rotations(std::size_t d, std::span<const double> params) {
  if (params.size() != rotation_parameter_count(d)) throw ValidationError("unitary_from_rotations: wrong parameter count");
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix u = CMatrix::Identity(n, n);
  std::size_t k = 0;
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double theta = params[k++];
      const double phi = params[k++];
      const double c = std::cos(theta), s = std::sin(theta);
      const cplx e = std::polar(1.0, phi);
      // u <- u * G where G acts on columns p, q.
      for (Eigen::Index r = 0; r < n; ++r) {
        const cplx up = u(r, p), uq = u(r, q);
        u(r, p) = c * up + s * std::conj(e) * uq;
        u(r, q) = -s * e * up + c * uq;
      }
    }
  }
  return u;
}

}  // namespace qcka
