#pragma once

// The entanglement measure mu: minimum over Eve's measurement bases of the
// maximum over local product bases of the intrinsic information.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "qcka/distribution.hpp"
#include "qcka/errors.hpp"
#include "qcka/intrinsic.hpp"
#include "qcka/linalg.hpp"
#include "qcka/qstate.hpp"
#include "qcka/random.hpp"
#include "qcka/simplex.hpp"
#include "qcka/unitary.hpp"

namespace qcka {

/// Entropy of the squared Schmidt coefficients of a bipartite unit vector
/// with amplitude index a*dB + b.
inline double pure_state_entanglement_entropy(const CVector& psi, std::size_t dA, std::size_t dB) {
  if (static_cast<std::size_t>(psi.size()) != dA * dB) throw ValidationError("pure_state_entanglement_entropy: size mismatch");
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-10) throw ValidationError("pure_state_entanglement_entropy: vector is not normalized");
  const auto a = static_cast<Eigen::Index>(dA), b = static_cast<Eigen::Index>(dB);
  CMatrix m(a, b);
  for (Eigen::Index i = 0; i < a; ++i)
    for (Eigen::Index j = 0; j < b; ++j) m(i, j) = psi(i * b + j);
  const CMatrix reduced = m * m.adjoint();
  std::vector<double> lambda = hermitian_eigenvalues(reduced);
  double h = 0.0;
  for (double l : lambda) h -= detail::plogp(std::max(0.0, l));
  return h;
}

inline double werner_mu_closed_form(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("werner_mu_closed_form: lambda must lie in [0, 1]");
  if (lambda <= 1.0 / 3.0) return 0.0;
  const double q = 2.0 * lambda / (1.0 + lambda);
  return 0.5 * (1.0 + lambda) * (1.0 - binary_entropy(q));
}

enum class MuQuality { exact, heuristic };

struct MuOptions {
  // Environment dimension of the purification; 0 selects rank(rho).
  std::size_t env_dim = 0;
  // Outer (Eve) restarts beyond the start from the eigenbasis.
  int restarts = 2;
  std::uint64_t seed = 1;
  double tolerance = 1e-6;
  int outer_max_iters = 400;
  // Polishing budget of the inner maximization (after scoring the reference bases).
  int inner_max_iters = 60;
  // Intrinsic-information budget per evaluated point.
  int intrinsic_max_iters = 1500;
  std::size_t intrinsic_deterministic_limit = 0;
  double rank_tolerance = 1e-10;
  // Run the nested search even when rho is pure.
  bool force_heuristic = false;
};

struct MuEstimate {
  double value = 0.0;
  LocalBasis eve_basis = LocalBasis::standard(1);
  LocalBasis alice = LocalBasis::standard(1);
  LocalBasis bob = LocalBasis::standard(1);
  std::vector<double> outer_values;  // best value per outer start
  long evaluations = 0;               // intrinsic-information calls
  MuQuality quality = MuQuality::heuristic;
};

namespace detail {

struct Purification {
  PureState state;
  std::size_t rank;
};

// Psi = sum_k sqrt(p_k) v_k (x) |k> over the eigenpairs of rho with p_k > tol.
inline Purification purify(const DensityMatrix& rho, std::size_t env_dim, double tol) {
  const HermitianEigen eig = jacobi_eigen(rho.matrix());
  const std::size_t n = eig.values.size();
  std::vector<std::size_t> support;
  for (std::size_t k = n; k-- > 0;)
    if (eig.values[k] > tol) support.push_back(k);
  const std::size_t rank = support.size();
  const std::size_t dE = env_dim == 0 ? rank : env_dim;
  if (dE < rank) throw ValidationError("mu_estimate: env_dim is smaller than rank(rho)");
  std::vector<cplx> amp(n * dE, cplx{});
  for (std::size_t e = 0; e < rank; ++e) {
    const auto k = static_cast<Eigen::Index>(support[e]);
    const double w = std::sqrt(eig.values[support[e]]);
    for (std::size_t ab = 0; ab < n; ++ab) amp[ab * dE + e] = w * eig.vectors(static_cast<Eigen::Index>(ab), k);
  }
  return {PureState::from_unnormalized(rho.dA(), rho.dB(), dE, std::move(amp)), rank};
}

// Standard and Fourier bases, plus the circular basis for qubits.
inline std::vector<CMatrix> reference_bases(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<CMatrix> out{CMatrix::Identity(n, n)};
  if (d < 2) return out;
  CMatrix f(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(d));
  out.push_back(f);
  if (d == 2) {
    CMatrix c(2, 2);
    c << 1.0, 1.0, cplx(0.0, 1.0), cplx(0.0, -1.0);
    out.push_back(c / std::sqrt(2.0));
  }
  return out;
}

}  // namespace detail

/// Heuristic min-max estimate of mu. One purification is fixed; the outer
/// Nelder-Mead minimizes over Eve's orthonormal bases and the inner one
/// maximizes over Alice's and Bob's bases, every point scored by
/// intrinsic_upper_bound. Bases are columns of unitary_from_rotations.
/// Rank-one input returns the Schmidt entropy, flagged exact.
inline MuEstimate mu_estimate(const DensityMatrix& rho, const MuOptions& opts = {}) {
  const auto pur = detail::purify(rho, opts.env_dim, opts.rank_tolerance);
  const std::size_t dA = rho.dA(), dB = rho.dB(), dE = pur.state.dE();
  MuEstimate est;
  est.eve_basis = LocalBasis::standard(dE);
  est.alice = LocalBasis::standard(dA);
  est.bob = LocalBasis::standard(dB);

  if (pur.rank == 1 && !opts.force_heuristic) {
    const HermitianEigen eig = jacobi_eigen(rho.matrix());
    est.value = pure_state_entanglement_entropy(eig.vectors.col(eig.vectors.cols() - 1), dA, dB);
    est.quality = MuQuality::exact;
    return est;
  }

  IntrinsicOptions iopts;
  iopts.restarts = 0;
  iopts.max_iters = opts.intrinsic_max_iters;
  iopts.tolerance = opts.tolerance * 1e-2;
  iopts.deterministic_limit = opts.intrinsic_deterministic_limit;
  iopts.deterministic_refinements = 1;

  const std::size_t na = rotation_parameter_count(dA), nb = rotation_parameter_count(dB), ne = rotation_parameter_count(dE);

  auto intrinsic_at = [&](const CMatrix& ue, const CMatrix& ua, const CMatrix& ub) {
    ++est.evaluations;
    std::vector<CVector> eve;
    for (Eigen::Index k = 0; k < ue.cols(); ++k) eve.emplace_back(ue.col(k));
    const JointDistribution p = measure_state(pur.state, LocalBasis(ua), LocalBasis(ub), EveMeasurementSet(std::move(eve)));
    return intrinsic_upper_bound(p, dE, iopts).value;
  };

  struct Inner {
    double value;
    CMatrix ua, ub;
  };
  const std::vector<CMatrix> cand_a = detail::reference_bases(dA), cand_b = detail::reference_bases(dB);
  // Maximum over local bases for a fixed Eve basis: score every pair of
  // reference bases, then polish the best pair.
  auto inner = [&](const CMatrix& ue) {
    Inner best{-1.0, cand_a.front(), cand_b.front()};
    for (const auto& a : cand_a)
      for (const auto& b : cand_b)
        if (const double v = intrinsic_at(ue, a, b); v > best.value) best = {v, a, b};
    if (opts.inner_max_iters <= 0 || na + nb == 0) return best;
    const CMatrix a0 = best.ua, b0 = best.ub;
    auto neg = [&](const std::vector<double>& x) {
      const std::span<const double> s(x);
      return -intrinsic_at(ue, a0 * unitary_from_rotations(dA, s.first(na)), b0 * unitary_from_rotations(dB, s.subspan(na, nb)));
    };
    SimplexOptions so;
    so.initial_step = 0.3;
    so.tolerance = opts.tolerance;
    so.max_iters = opts.inner_max_iters;
    so.max_restarts = 1;
    const SimplexResult r = nelder_mead(neg, std::vector<double>(na + nb, 0.0), so);
    if (-r.value > best.value) {
      const std::span<const double> s(r.x);
      best = {-r.value, a0 * unitary_from_rotations(dA, s.first(na)), b0 * unitary_from_rotations(dB, s.subspan(na, nb))};
    }
    return best;
  };

  SimplexOptions outer_opts;
  outer_opts.initial_step = 0.5;
  outer_opts.tolerance = opts.tolerance;
  outer_opts.max_iters = opts.outer_max_iters;
  outer_opts.max_restarts = 2;

  est.value = std::numeric_limits<double>::infinity();
  std::vector<double> best_e(ne, 0.0);
  CMatrix best_a = cand_a.front(), best_b = cand_b.front();
  for (int r = 0; r <= opts.restarts; ++r) {
    if (est.value <= opts.tolerance) break;
    std::vector<double> e0(ne, 0.0);
    if (r > 0) {
      Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(r)));
      std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
      for (auto& v : e0) v = u(rng);
    }
    double run_best = std::numeric_limits<double>::infinity();
    auto outer = [&](const std::vector<double>& x) {
      if (run_best <= opts.tolerance) return run_best;  // nothing left to gain
      const CMatrix ue = unitary_from_rotations(dE, x);
      const Inner in = inner(ue);
      if (in.value < run_best) run_best = in.value;
      if (in.value < est.value) {
        est.value = in.value;
        best_e = x;
        best_a = in.ua;
        best_b = in.ub;
      }
      return in.value;
    };
    if (ne == 0) {
      outer(e0);
    } else {
      nelder_mead(outer, std::move(e0), outer_opts);
    }
    est.outer_values.push_back(run_best);
  }

  est.value = std::max(0.0, est.value);
  if (!best_e.empty()) est.eve_basis = LocalBasis(unitary_from_rotations(dE, best_e));
  est.alice = LocalBasis(best_a);
  est.bob = LocalBasis(best_b);
  return est;
}

}  // namespace qcka
