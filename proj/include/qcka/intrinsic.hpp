#pragma once

// Intrinsic conditional information I(X;Y|Z-down): the infimum over Eve's
// channels P_Zbar|Z of I(X;Y|Zbar). The estimator below searches that space
// numerically, so what it returns is an upper bound witnessed by an explicit
// channel.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "qcka/channel.hpp"
#include "qcka/distribution.hpp"
#include "qcka/errors.hpp"
#include "qcka/qstate.hpp"
#include "qcka/random.hpp"
#include "qcka/simplex.hpp"

namespace qcka {

/// I(X;Y|Zbar) as a function of the dense channel matrix (nz x nzbar, row-major).
class ConditionalInformationObjective {
 public:
  ConditionalInformationObjective(const JointDistribution& p, std::size_t nzbar)
      : nxy_(p.nx() * p.ny()), nx_(p.nx()), ny_(p.ny()), nz_(p.nz()), nzbar_(nzbar) {
    for (const auto& [c, m] : p.cells()) cells_.push_back({c[0] * p.ny() + c[1], c[2], m});
    q_.resize(nzbar_ * nxy_);
    qz_.resize(nzbar_);
  }

  std::size_t nz() const { return nz_; }
  std::size_t nzbar() const { return nzbar_; }

  double operator()(std::span<const double> w) const {
    std::fill(q_.begin(), q_.end(), 0.0);
    std::fill(qz_.begin(), qz_.end(), 0.0);
    for (const auto& c : cells_) {
      const double* row = &w[c.z * nzbar_];
      for (std::size_t zb = 0; zb < nzbar_; ++zb) {
        const double t = c.p * row[zb];
        q_[zb * nxy_ + c.xy] += t;
        qz_[zb] += t;
      }
    }
    double s = 0.0;
    for (std::size_t zb = 0; zb < nzbar_; ++zb) s += detail::block_information(&q_[zb * nxy_], nx_, ny_, qz_[zb], px_, py_);
    return s;
  }

  double operator()(const Channel& w) const { return (*this)(std::span<const double>(w.entries())); }

 private:
  struct Entry {
    std::size_t xy, z;
    double p;
  };
  std::size_t nxy_, nx_, ny_, nz_, nzbar_;
  std::vector<Entry> cells_;
  mutable std::vector<double> q_, qz_, px_, py_;
};

struct IntrinsicOptions {
  int restarts = 8;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  int max_iters = 5000;
  // Deterministic channels are enumerated when nzbar^nz does not exceed this.
  std::size_t deterministic_limit = 4096;
  // How many of the best deterministic channels seed a local descent.
  int deterministic_refinements = 4;
  // Additional starting channels (e.g. a known certificate).
  std::vector<Channel> extra_starts;
};

struct IntrinsicEstimate {
  double value = std::numeric_limits<double>::infinity();
  Channel best_channel;
  int restarts_run = 0;
  std::vector<double> per_restart_values;
  bool converged = false;
};

namespace detail {

inline void softmax_rows(std::span<const double> logits, std::size_t rows, std::size_t cols, std::vector<double>& w) {
  w.resize(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    // Last logit of each row is pinned to 0.
    double mx = 0.0;
    for (std::size_t c = 0; c + 1 < cols; ++c) mx = std::max(mx, logits[r * (cols - 1) + c]);
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double l = (c + 1 < cols) ? logits[r * (cols - 1) + c] : 0.0;
      const double e = std::exp(l - mx);
      w[r * cols + c] = e;
      sum += e;
    }
    for (std::size_t c = 0; c < cols; ++c) w[r * cols + c] /= sum;
  }
}

inline std::vector<double> logits_from_channel(const Channel& ch, double floor = 1e-4) {
  const std::size_t rows = ch.rows(), cols = ch.cols();
  std::vector<double> l(rows * (cols - 1));
  for (std::size_t r = 0; r < rows; ++r) {
    const double last = std::log(std::max(ch(r, cols - 1), floor));
    for (std::size_t c = 0; c + 1 < cols; ++c) l[r * (cols - 1) + c] = std::log(std::max(ch(r, c), floor)) - last;
  }
  return l;
}

// Row-normalizes a softmax image exactly enough for the Channel invariant.
inline Channel channel_from_weights(std::size_t rows, std::size_t cols, std::vector<double> w) {
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += w[r * cols + c];
    for (std::size_t c = 0; c < cols; ++c) w[r * cols + c] /= s;
  }
  return Channel(rows, cols, std::move(w));
}

// z -> z when the output alphabet is large enough, otherwise z -> z mod nzbar.
inline Channel identity_like(std::size_t nz, std::size_t nzbar) {
  std::vector<std::size_t> map(nz);
  for (std::size_t z = 0; z < nz; ++z) map[z] = z % nzbar;
  return Channel::deterministic(map, nzbar);
}

}  // namespace detail

/// Upper bound on I(X;Y|Z-down) over channels with `nzbar` outputs.
///
/// Candidate channels: the identity (or z mod nzbar when nzbar < nz), every
/// deterministic channel when there are at most `deterministic_limit` of them,
/// and `extra_starts`. Local descent (Nelder-Mead over row-wise softmax
/// logits) then runs from the identity, the best deterministic candidates,
/// each extra start, and `restarts` random points. Restart r draws from a
/// generator seeded with mix_seed(seed, r), so results do not depend on the
/// order restarts are executed in.
inline IntrinsicEstimate intrinsic_upper_bound(const JointDistribution& p, std::size_t nzbar,
                                               const IntrinsicOptions& opts = {}) {
  if (nzbar == 0) throw ValidationError("intrinsic_upper_bound: nzbar must be positive");
  const std::size_t nz = p.nz();
  const ConditionalInformationObjective objective(p, nzbar);

  IntrinsicEstimate est;
  est.best_channel = detail::identity_like(nz, nzbar);

  auto checked = [](double v) {
    if (!std::isfinite(v)) throw NumericError("intrinsic_upper_bound: objective is not finite");
    return v;
  };

  SimplexOptions sopts;
  sopts.tolerance = opts.tolerance;
  sopts.max_iters = opts.max_iters;
  sopts.initial_step = 1.0;

  std::vector<double> scratch;
  auto logit_objective = [&](const std::vector<double>& logits) {
    detail::softmax_rows(logits, nz, nzbar, scratch);
    return objective(std::span<const double>(scratch));
  };

  bool best_converged = false;
  auto record = [&](double value, const Channel& ch, bool converged) {
    value = std::max(0.0, value);
    est.per_restart_values.push_back(value);
    ++est.restarts_run;
    if (value < est.value) {
      est.value = value;
      est.best_channel = ch;
      best_converged = converged;
    }
  };

  // One local descent from `start`; the start itself counts as a candidate.
  auto descend = [&](const Channel& start, std::vector<double> logits) {
    const double start_value = checked(objective(start));
    if (nzbar == 1) {
      record(start_value, start, true);
      return;
    }
    SimplexResult r = nelder_mead(logit_objective, std::move(logits), sopts);
    checked(r.value);
    if (r.value < start_value) {
      detail::softmax_rows(r.x, nz, nzbar, scratch);
      Channel ch = detail::channel_from_weights(nz, nzbar, scratch);
      // Rebuilding the channel can cost the last ulps of the descent.
      if (const double v = checked(objective(ch)); v < start_value) {
        record(v, ch, r.converged);
        return;
      }
    }
    record(start_value, start, true);
  };

  const Channel identity = detail::identity_like(nz, nzbar);
  descend(identity, detail::logits_from_channel(identity));

  // Enumerate deterministic channels, keep the best few.
  double count = std::pow(static_cast<double>(nzbar), static_cast<double>(nz));
  if (count <= static_cast<double>(opts.deterministic_limit) && nzbar > 1) {
    std::vector<std::pair<double, std::vector<std::size_t>>> scored;
    std::vector<std::size_t> map(nz, 0);
    std::vector<double> w(nz * nzbar);
    while (true) {
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t z = 0; z < nz; ++z) w[z * nzbar + map[z]] = 1.0;
      scored.emplace_back(checked(objective(std::span<const double>(w))), map);
      std::size_t k = 0;
      while (k < nz && ++map[k] == nzbar) map[k++] = 0;
      if (k == nz) break;
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    const auto take = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(std::max(0, opts.deterministic_refinements)));
    for (std::size_t i = 0; i < take; ++i) {
      const Channel ch = Channel::deterministic(scored[i].second, nzbar);
      descend(ch, detail::logits_from_channel(ch));
    }
  }

  for (const Channel& ch : opts.extra_starts) {
    if (ch.rows() != nz || ch.cols() != nzbar) throw ValidationError("intrinsic_upper_bound: extra start has the wrong shape");
    descend(ch, detail::logits_from_channel(ch));
  }

  for (int r = 0; r < opts.restarts; ++r) {
    if (est.value <= 0.0) break;
    Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(r)));
    std::normal_distribution<double> g(0.0, 2.0);
    std::vector<double> logits(nz * (nzbar - 1));
    for (auto& l : logits) l = g(rng);
    detail::softmax_rows(logits, nz, nzbar, scratch);
    descend(detail::channel_from_weights(nz, nzbar, scratch), std::move(logits));
  }

  est.converged = best_converged;
  return est;
}

struct CertificateCheck {
  bool passes = false;
  double residual = 0.0;
};

/// Residual I(X;Y|Zbar) after applying `w`; passes iff residual <= tol.
inline CertificateCheck verify_zero_certificate(const JointDistribution& p, const Channel& w, double tol) {
  if (w.rows() != p.nz()) throw ValidationError("verify_zero_certificate: channel rows do not match |Z|");
  const double residual = conditional_mutual_information(apply_channel(p, w));
  return {residual <= tol, residual};
}

struct BasisPair {
  LocalBasis alice;
  LocalBasis bob;
};

/// Eve learns which basis pair j was used: the mean over j of the intrinsic
/// information of each measured distribution.
inline double intrinsic_over_basis_set(const PureState& psi, std::span<const BasisPair> bases,
                                       const EveMeasurementSet& eve, const IntrinsicOptions& opts = {}) {
  if (bases.empty()) throw ValidationError("intrinsic_over_basis_set: need at least one basis pair");
  double sum = 0.0;
  for (const auto& bp : bases) {
    const JointDistribution p = measure_state(psi, bp.alice, bp.bob, eve);
    sum += intrinsic_upper_bound(p, eve.size(), opts).value;
  }
  return sum / static_cast<double>(bases.size());
}

}  // namespace qcka
