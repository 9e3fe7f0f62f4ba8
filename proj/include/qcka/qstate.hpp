#pragma once

// Finite-dimensional tripartite quantum states and the diagnostics that link
// them to classical distributions: partial trace over Eve, partial transpose,
// PPT spectrum, measurement, canonical purification and the product-ensemble
// construction for separable states.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qcka/distribution.hpp"
#include "qcka/errors.hpp"
#include "qcka/linalg.hpp"

namespace qcka {

/// Unit vector in C^dA (x) C^dB (x) C^dE; amplitude (a,b,e) at (a*dB + b)*dE + e.
class PureState {
 public:
  static constexpr double kTolerance = 1e-12;

  PureState(std::size_t dA, std::size_t dB, std::size_t dE, std::vector<cplx> amp)
      : dA_(dA), dB_(dB), dE_(dE), amp_(std::move(amp)) {
    if (dA_ == 0 || dB_ == 0 || dE_ == 0) throw ValidationError("PureState: dimensions must be positive");
    if (amp_.size() != dA_ * dB_ * dE_) throw ValidationError("PureState: amplitude count does not match dimensions");
    const double n2 = norm_squared();
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kTolerance) {
      throw ValidationError("PureState: squared norm " + std::to_string(n2) + " differs from 1");
    }
  }

  static PureState from_unnormalized(std::size_t dA, std::size_t dB, std::size_t dE, std::vector<cplx> amp) {
    double n2 = 0.0;
    for (const auto& c : amp) n2 += std::norm(c);
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw ValidationError("PureState::from_unnormalized: zero or non-finite norm");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& c : amp) c *= s;
    return PureState(dA, dB, dE, std::move(amp));
  }

  std::size_t dA() const { return dA_; }
  std::size_t dB() const { return dB_; }
  std::size_t dE() const { return dE_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  cplx operator()(std::size_t a, std::size_t b, std::size_t e) const { return amp_[(a * dB_ + b) * dE_ + e]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& c : amp_) s += std::norm(c);
    return s;
  }

 private:
  std::size_t dA_, dB_, dE_;
  std::vector<cplx> amp_;
};

/// Density operator on C^dA (x) C^dB, composite index a*dB + b.
class DensityMatrix {
 public:
  static constexpr double kHermitianTolerance = 1e-12;
  static constexpr double kTraceTolerance = 1e-12;
  static constexpr double kEigenFloor = -1e-10;

  DensityMatrix(std::size_t dA, std::size_t dB, CMatrix rho) : dA_(dA), dB_(dB), rho_(std::move(rho)) {
    const auto n = static_cast<Eigen::Index>(dA_ * dB_);
    if (dA_ == 0 || dB_ == 0) throw ValidationError("DensityMatrix: dimensions must be positive");
    if (rho_.rows() != n || rho_.cols() != n) throw ValidationError("DensityMatrix: matrix size does not match dA*dB");
    if (hermiticity_defect(rho_) > kHermitianTolerance) throw ValidationError("DensityMatrix: matrix is not Hermitian");
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance) throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
    const double lo = hermitian_eigenvalues(rho_).front();
    if (lo < kEigenFloor) throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(lo));
  }

  std::size_t dA() const { return dA_; }
  std::size_t dB() const { return dB_; }
  const CMatrix& matrix() const { return rho_; }

 private:
  std::size_t dA_, dB_;
  CMatrix rho_;
};

/// Orthonormal basis of C^d stored as the columns of a d x d matrix.
class LocalBasis {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit LocalBasis(CMatrix vectors) : v_(std::move(vectors)) {
    if (v_.rows() == 0 || v_.rows() != v_.cols()) throw ValidationError("LocalBasis: need d vectors of dimension d");
    const double dev = max_abs(v_.adjoint() * v_ - CMatrix::Identity(v_.rows(), v_.cols()));
    if (dev > kTolerance) throw ValidationError("LocalBasis: vectors are not orthonormal (Gram deviation " + std::to_string(dev) + ")");
  }

  static LocalBasis standard(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return LocalBasis(CMatrix::Identity(n, n));
  }

  std::size_t dim() const { return static_cast<std::size_t>(v_.rows()); }
  CVector vector(std::size_t k) const { return v_.col(static_cast<Eigen::Index>(k)); }
  const CMatrix& matrix() const { return v_; }

 private:
  CMatrix v_;
};

/// Rank-one POVM {|z><z|} on Eve's space: sum_z |z><z| = identity.
class EveMeasurementSet {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit EveMeasurementSet(std::vector<CVector> vectors) : v_(std::move(vectors)) {
    if (v_.empty()) throw ValidationError("EveMeasurementSet: no vectors");
    const auto d = v_.front().size();
    if (d == 0) throw ValidationError("EveMeasurementSet: zero-dimensional vectors");
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& z : v_) {
      if (z.size() != d) throw ValidationError("EveMeasurementSet: vectors of different dimensions");
      sum += z * z.adjoint();
    }
    const double dev = completeness_defect(sum);
    if (dev > kTolerance) throw ValidationError("EveMeasurementSet: POVM is incomplete (deviation " + std::to_string(dev) + ")");
  }

  static EveMeasurementSet standard(std::size_t d) { return from_basis(LocalBasis::standard(d)); }

  static EveMeasurementSet from_basis(const LocalBasis& b) {
    std::vector<CVector> v;
    for (std::size_t k = 0; k < b.dim(); ++k) v.push_back(b.vector(k));
    return EveMeasurementSet(std::move(v));
  }

  std::size_t dim() const { return static_cast<std::size_t>(v_.front().size()); }
  std::size_t size() const { return v_.size(); }
  const std::vector<CVector>& vectors() const { return v_; }

  double completeness_defect() const {
    const auto d = v_.front().size();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& z : v_) sum += z * z.adjoint();
    return completeness_defect(sum);
  }

 private:
  static double completeness_defect(const CMatrix& sum) {
    return max_abs(sum - CMatrix::Identity(sum.rows(), sum.cols()));
  }
  std::vector<CVector> v_;
};

struct ProductTerm {
  double weight;
  CVector alpha;  // Alice's factor, unit vector in C^dA
  CVector beta;   // Bob's factor, unit vector in C^dB
};

/// rho_AB = sum_j p_j |alpha_j><alpha_j| (x) |beta_j><beta_j|.
class SeparableDecomposition {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit SeparableDecomposition(std::vector<ProductTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw ValidationError("SeparableDecomposition: no terms");
    const auto dA = terms_.front().alpha.size(), dB = terms_.front().beta.size();
    if (dA == 0 || dB == 0) throw ValidationError("SeparableDecomposition: zero-dimensional factor");
    double total = 0.0;
    for (const auto& t : terms_) {
      if (t.alpha.size() != dA || t.beta.size() != dB) throw ValidationError("SeparableDecomposition: inconsistent factor dimensions");
      if (!(t.weight >= 0.0)) throw ValidationError("SeparableDecomposition: negative weight");
      if (std::abs(t.alpha.norm() - 1.0) > 1e-10 || std::abs(t.beta.norm() - 1.0) > 1e-10)
        throw ValidationError("SeparableDecomposition: factors must be unit vectors");
      total += t.weight;
    }
    if (std::abs(total - 1.0) > kTolerance) throw ValidationError("SeparableDecomposition: weights sum to " + std::to_string(total));
  }

  const std::vector<ProductTerm>& terms() const { return terms_; }
  std::size_t dA() const { return static_cast<std::size_t>(terms_.front().alpha.size()); }
  std::size_t dB() const { return static_cast<std::size_t>(terms_.front().beta.size()); }

  CMatrix density() const {
    const auto n = static_cast<Eigen::Index>(dA() * dB());
    CMatrix rho = CMatrix::Zero(n, n);
    for (const auto& t : terms_) rho += t.weight * kron(projector(t.alpha), projector(t.beta));
    return rho;
  }

 private:
  std::vector<ProductTerm> terms_;
};

/// rho(ab, a'b') = sum_e amp(a,b,e) conj(amp(a',b',e)).
inline DensityMatrix partial_trace_env(const PureState& psi) {
  const auto n = static_cast<Eigen::Index>(psi.dA() * psi.dB());
  const auto dE = static_cast<Eigen::Index>(psi.dE());
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(psi.amplitudes().data(), n, dE);
  CMatrix rho = m * m.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(psi.dA(), psi.dB(), std::move(rho));
}

inline bool is_pure(const DensityMatrix& rho, double tol = 1e-10) {
  const CMatrix& m = rho.matrix();
  return max_abs(m * m - m) <= tol;
}

/// Transposes the B factor: out(i,j; mu,nu) = in(i,nu; mu,j).
inline CMatrix partial_transpose(const CMatrix& m, std::size_t dA, std::size_t dB) {
  const auto n = static_cast<Eigen::Index>(dA * dB);
  if (m.rows() != n || m.cols() != n) throw ValidationError("partial_transpose: matrix size does not match the factorization");
  CMatrix out(n, n);
  const auto b = static_cast<Eigen::Index>(dB);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(dA); ++i)
    for (Eigen::Index j = 0; j < b; ++j)
      for (Eigen::Index mu = 0; mu < static_cast<Eigen::Index>(dA); ++mu)
        for (Eigen::Index nu = 0; nu < b; ++nu) out(i * b + j, mu * b + nu) = m(i * b + nu, mu * b + j);
  return out;
}

inline CMatrix partial_transpose(const DensityMatrix& rho) { return partial_transpose(rho.matrix(), rho.dA(), rho.dB()); }

inline double ppt_min_eigenvalue(const DensityMatrix& rho) { return hermitian_eigenvalues(partial_transpose(rho)).front(); }

/// P(x,y,z) = |<x,y,z|Psi>|^2. The result is renormalized when POVM
/// rounding leaves the total within 1e-10 of one.
inline JointDistribution measure_state(const PureState& psi, const LocalBasis& bA, const LocalBasis& bB,
                                       const EveMeasurementSet& eve) {
  if (bA.dim() != psi.dA() || bB.dim() != psi.dB() || eve.dim() != psi.dE()) {
    throw ValidationError("measure_state: basis dimensions do not match the state");
  }
  const std::size_t dA = psi.dA(), dB = psi.dB(), dE = psi.dE(), nz = eve.size();
  // Contract Eve first: t[a][b][z] = sum_e conj(z_e) amp(a,b,e).
  std::vector<cplx> t(dA * dB * nz, cplx{});
  for (std::size_t ab = 0; ab < dA * dB; ++ab)
    for (std::size_t z = 0; z < nz; ++z) {
      const CVector& zv = eve.vectors()[z];
      cplx s{};
      for (std::size_t e = 0; e < dE; ++e) s += std::conj(zv(static_cast<Eigen::Index>(e))) * psi.amplitudes()[ab * dE + e];
      t[ab * nz + z] = s;
    }
  // Then Bob: u[a][y][z].
  std::vector<cplx> u(dA * dB * nz, cplx{});
  const CMatrix& B = bB.matrix();
  for (std::size_t a = 0; a < dA; ++a)
    for (std::size_t y = 0; y < dB; ++y)
      for (std::size_t z = 0; z < nz; ++z) {
        cplx s{};
        for (std::size_t b = 0; b < dB; ++b)
          s += std::conj(B(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(y))) * t[(a * dB + b) * nz + z];
        u[(a * dB + y) * nz + z] = s;
      }
  const CMatrix& A = bA.matrix();
  std::vector<double> dense(dA * dB * nz, 0.0);
  double total = 0.0;
  for (std::size_t x = 0; x < dA; ++x)
    for (std::size_t y = 0; y < dB; ++y)
      for (std::size_t z = 0; z < nz; ++z) {
        cplx s{};
        for (std::size_t a = 0; a < dA; ++a)
          s += std::conj(A(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(x))) * u[(a * dB + y) * nz + z];
        const double p = std::norm(s);
        dense[(x * dB + y) * nz + z] = p;
        total += p;
      }
  if (std::abs(total - 1.0) > 1e-10) throw NumericError("measure_state: outcome probabilities sum to " + std::to_string(total));
  if (total != 1.0)
    for (auto& p : dense) p /= total;
  return JointDistribution::from_dense(dA, dB, nz, dense);
}

inline JointDistribution measure_standard(const PureState& psi) {
  return measure_state(psi, LocalBasis::standard(psi.dA()), LocalBasis::standard(psi.dB()),
                       EveMeasurementSet::standard(psi.dE()));
}

/// amp(x,y,z) = sqrt(P(x,y,z)): the state whose standard-basis measurement is P.
inline PureState canonical_purification(const JointDistribution& p) {
  std::vector<cplx> amp(p.nx() * p.ny() * p.nz(), cplx{});
  for (const auto& [c, m] : p.cells()) amp[(c[0] * p.ny() + c[1]) * p.nz() + c[2]] = std::sqrt(m);
  return PureState(p.nx(), p.ny(), p.nz(), std::move(amp));
}

struct Theorem1Construction {
  PureState state;
  EveMeasurementSet eve;
};

/// Psi = sum_z sqrt(p_z) |alpha_z, beta_z, z>, with Eve measuring in the
/// standard basis of a space whose dimension is the number of terms. Every
/// conditional state given z is then a product, so I(X;Y|Z) = 0 for all
/// local bases.
inline Theorem1Construction theorem1_construction(const SeparableDecomposition& dec) {
  const std::size_t dA = dec.dA(), dB = dec.dB(), dE = dec.terms().size();
  std::vector<cplx> amp(dA * dB * dE, cplx{});
  for (std::size_t z = 0; z < dE; ++z) {
    const auto& t = dec.terms()[z];
    const double w = std::sqrt(t.weight);
    for (std::size_t a = 0; a < dA; ++a)
      for (std::size_t b = 0; b < dB; ++b)
        amp[(a * dB + b) * dE + z] = w * t.alpha(static_cast<Eigen::Index>(a)) * t.beta(static_cast<Eigen::Index>(b));
  }
  return {PureState::from_unnormalized(dA, dB, dE, std::move(amp)), EveMeasurementSet::standard(dE)};
}

/// (U_A (x) U_B) rho (U_A (x) U_B)^dagger.
inline CMatrix local_conjugate(const CMatrix& rho, const CMatrix& uA, const CMatrix& uB) {
  const CMatrix u = kron(uA, uB);
  return u * rho * u.adjoint();
}

}  // namespace qcka
