#pragma once

// Repeat-code advantage distillation and the symmetrizing preprocessing of
// the alpha family.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>

#include "qcka/distribution.hpp"
#include "qcka/errors.hpp"
#include "qcka/random.hpp"

namespace qcka {

struct RepeatCodeAnalytic {
  unsigned N = 0;
  double p_accept = 0.0;
  double beta_N = 0.0;
  double gamma_N_lower = 0.0;
};

namespace detail {

inline void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0, 1]");
}

inline void check_block_length(unsigned N) {
  if (N < 2 || N % 2 != 0) throw ValidationError("repeat code: N must be even and >= 2");
}

inline double binomial(unsigned n, unsigned k) {
  double c = 1.0;
  for (unsigned i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

}  // namespace detail

inline RepeatCodeAnalytic repeat_code_analytic(double D, double delta, unsigned N) {
  detail::check_unit(D, "D");
  detail::check_unit(delta, "delta");
  detail::check_block_length(N);
  RepeatCodeAnalytic r;
  r.N = N;
  const double dn = std::pow(D, N);
  r.p_accept = dn + std::pow(1.0 - D, N);
  r.beta_N = dn / r.p_accept;
  r.gamma_N_lower = 0.5 * detail::binomial(N, N / 2) * std::pow((1.0 - delta) * delta, N / 2);
  return r;
}

struct SimulationResult {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;
  std::uint64_t correctly_accepted = 0;
  std::uint64_t bob_errors = 0;
  std::uint64_t eve_errors = 0;
  std::uint64_t eve_errors_on_correct = 0;
  double bob_error_rate = 0.0;
  double eve_error_rate = 0.0;
  double bob_standard_error = 0.0;
  double eve_standard_error = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

inline constexpr std::uint64_t kSimulationChunk = 1u << 16;

namespace detail {

struct SimulationCounts {
  std::uint64_t trials = 0, accepted = 0, correct = 0, bob_errors = 0, eve_errors = 0, eve_errors_on_correct = 0;

  SimulationCounts& operator+=(const SimulationCounts& o) {
    trials += o.trials;
    accepted += o.accepted;
    correct += o.correct;
    bob_errors += o.bob_errors;
    eve_errors += o.eve_errors;
    eve_errors_on_correct += o.eve_errors_on_correct;
    return *this;
  }
};

// Per position: X uniform, Y = X xor [D-noise]; Eve knows whether the
// position is disturbed and holds an estimate of X that is right with
// probability delta.
inline SimulationCounts simulate_chunk(double D, double delta, unsigned N, std::uint64_t trials, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution coin(0.5), noise(D), eve_right(delta);
  SimulationCounts c;
  c.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const bool C = coin(rng);
    unsigned flips = 0, eve_zeros = 0;
    for (unsigned i = 0; i < N; ++i) {
      const bool x = coin(rng);
      const bool y = x != noise(rng);
      const bool z = eve_right(rng) ? x : !x;
      flips += (C != x) != y;  // Bob's block bit (C xor X_i) xor Y_i
      eve_zeros += (C != x) == z;
    }
    if (flips != 0 && flips != N) continue;
    ++c.accepted;
    const bool bob_guess = flips == N;
    const bool correct = bob_guess == C;
    if (correct) ++c.correct;
    else ++c.bob_errors;
    bool eve_guess;
    if (2 * eve_zeros > N) eve_guess = false;
    else if (2 * eve_zeros < N) eve_guess = true;
    else eve_guess = coin(rng);
    if (eve_guess != C) {
      ++c.eve_errors;
      if (correct) ++c.eve_errors_on_correct;
    }
  }
  return c;
}

}  // namespace detail

/// Monte Carlo run of the repeat-code protocol. Trials are split into fixed
/// chunks with seeds derived from (seed, chunk index), so the result depends
/// only on the arguments.
inline SimulationResult repeat_code_simulate(double D, double delta, unsigned N, std::uint64_t trials, std::uint64_t seed) {
  detail::check_unit(D, "D");
  detail::check_unit(delta, "delta");
  detail::check_block_length(N);
  if (trials == 0) throw ValidationError("repeat code: trials must be >= 1");
  detail::SimulationCounts total;
  for (std::uint64_t chunk = 0, done = 0; done < trials; ++chunk) {
    const std::uint64_t n = std::min(kSimulationChunk, trials - done);
    total += detail::simulate_chunk(D, delta, N, n, mix_seed(seed, chunk));
    done += n;
  }
  SimulationResult r;
  r.trials = total.trials;
  r.accepted = total.accepted;
  r.correctly_accepted = total.correct;
  r.bob_errors = total.bob_errors;
  r.eve_errors = total.eve_errors;
  r.eve_errors_on_correct = total.eve_errors_on_correct;
  r.seed = seed;
  if (total.accepted > 0) {
    const double a = static_cast<double>(total.accepted);
    r.bob_error_rate = static_cast<double>(total.bob_errors) / a;
    r.eve_error_rate = static_cast<double>(total.eve_errors) / a;
    r.bob_standard_error = std::sqrt(r.bob_error_rate * (1.0 - r.bob_error_rate) / a);
    r.eve_standard_error = std::sqrt(r.eve_error_rate * (1.0 - r.eve_error_rate) / a);
  }
  return r;
}

inline constexpr double kAdvantageMargin = 1e-12;

/// True iff D/(1-D) < 2 sqrt((1-delta) delta), i.e. the repeat code gives
/// Alice and Bob an advantage. Equality (within 1e-12) counts as false.
inline bool advantage_condition(double D, double delta) {
  detail::check_unit(delta, "delta");
  if (!(D >= 0.0 && D < 1.0)) throw ValidationError("advantage_condition: D must lie in [0, 1)");
  return D / (1.0 - D) < 2.0 * std::sqrt((1.0 - delta) * delta) - kAdvantageMargin;
}

/// Flips the more likely value of X (and of Y) with the probability that
/// makes each bit uniform. Requires binary X and Y.
inline JointDistribution symmetrize_binary(const JointDistribution& p) {
  if (p.nx() != 2 || p.ny() != 2) throw ValidationError("symmetrize_binary: X and Y must be binary");
  double px0 = 0.0, py0 = 0.0;
  for (const auto& [c, v] : p.cells()) {
    if (c[0] == 0) px0 += v;
    if (c[1] == 0) py0 += v;
  }
  // flip[b][v][vb]: probability that bit value v becomes vb.
  auto flips = [](double p0) {
    std::array<std::array<double, 2>, 2> f{{{1.0, 0.0}, {0.0, 1.0}}};
    if (p0 > 0.5) f[0] = {0.5 / p0, 1.0 - 0.5 / p0};
    else if (p0 < 0.5) f[1] = {1.0 - 0.5 / (1.0 - p0), 0.5 / (1.0 - p0)};
    return f;
  };
  const auto fx = flips(px0), fy = flips(py0);
  std::map<Cell, double> out;
  for (const auto& [c, v] : p.cells())
    for (std::size_t xb = 0; xb < 2; ++xb)
      for (std::size_t yb = 0; yb < 2; ++yb)
        if (const double w = v * fx[c[0]][xb] * fy[c[1]][yb]; w > 0.0) out[{xb, yb, c[2]}] += w;
  return JointDistribution::from_weights(2, 2, p.nz(), std::move(out));
}

struct RepeatCodeAdvantage {
  double prob_agree = 0.0;
  double bob_ratio = 0.0;      // P[X != Y] / P[X = Y]
  double eve_overlap = 0.0;    // Bhattacharyya overlap of P(Z | X=Y=0) and P(Z | X=Y=1)
  bool advantage = false;
};

/// Per-block exponents of the repeat code on binary X and Y: Bob's error
/// decays like bob_ratio^N and Eve's like eve_overlap^N (up to polynomial
/// factors). Advantage iff bob_ratio < eve_overlap; on the disturbance-D
/// scenario this is the same inequality as advantage_condition.
inline RepeatCodeAdvantage repeat_code_advantage(const JointDistribution& p) {
  if (p.nx() != 2 || p.ny() != 2) throw ValidationError("repeat_code_advantage: X and Y must be binary");
  std::vector<double> z0(p.nz(), 0.0), z1(p.nz(), 0.0);
  double a0 = 0.0, a1 = 0.0;
  for (const auto& [c, v] : p.cells()) {
    if (c[0] != c[1]) continue;
    (c[0] == 0 ? z0 : z1)[c[2]] += v;
    (c[0] == 0 ? a0 : a1) += v;
  }
  RepeatCodeAdvantage r;
  r.prob_agree = a0 + a1;
  if (a0 == 0.0 || a1 == 0.0) return r;
  r.bob_ratio = (1.0 - r.prob_agree) / r.prob_agree;
  for (std::size_t z = 0; z < p.nz(); ++z) r.eve_overlap += std::sqrt(z0[z] / a0 * z1[z] / a1);
  r.advantage = r.bob_ratio < r.eve_overlap - kAdvantageMargin;
  return r;
}

struct Example3ProtocolResult {
  JointDistribution joint;
  double prob_agree = 0.0;
  double eve_tv_on_agree = 0.0;
  double flip_probability = 0.0;
};

/// Restrict the alpha family to X, Y in {1, 2}, then flip X: 1 -> 2 and
/// Y: 2 -> 1 with probability (2 alpha - 5)/(2 alpha + 4) so that both bits
/// are uniform. Eve's symbols are 0 (diagonal), 1 (the alpha cell) and 2 (the
/// 5 - alpha cell); bit values 1, 2 are indices 0, 1.
inline Example3ProtocolResult example3_protocol(double alpha) {
  if (!(alpha > 2.5 && alpha <= 5.0)) throw ValidationError("example3_protocol: alpha must lie in (2.5, 5]");
  const double r = (2.0 * alpha - 5.0) / (2.0 * alpha + 4.0);
  // Restricted (x, y, z) weights before symmetrization.
  const std::map<Cell, double> restricted{{{0, 0, 0}, 2.0}, {{1, 1, 0}, 2.0}, {{0, 1, 1}, alpha}, {{1, 0, 2}, 5.0 - alpha}};
  auto flip_x = [&](std::size_t x, std::size_t xb) { return x == 0 ? (xb == 1 ? r : 1.0 - r) : (xb == 1 ? 1.0 : 0.0); };
  auto flip_y = [&](std::size_t y, std::size_t yb) { return y == 1 ? (yb == 0 ? r : 1.0 - r) : (yb == 0 ? 1.0 : 0.0); };
  std::map<Cell, double> out;
  for (const auto& [c, w] : restricted)
    for (std::size_t xb = 0; xb < 2; ++xb)
      for (std::size_t yb = 0; yb < 2; ++yb)
        if (double v = w * flip_x(c[0], xb) * flip_y(c[1], yb); v > 0.0) out[{xb, yb, c[2]}] += v;

  Example3ProtocolResult res{JointDistribution::from_weights(2, 2, 3, std::move(out)), 0.0, 0.0, r};
  const auto& j = res.joint;
  double a0 = 0.0, a1 = 0.0;
  for (std::size_t z = 0; z < 3; ++z) {
    a0 += j(0, 0, z);
    a1 += j(1, 1, z);
  }
  res.prob_agree = a0 + a1;
  for (std::size_t z = 0; z < 3; ++z) res.eve_tv_on_agree += 0.5 * std::abs(j(0, 0, z) / a0 - j(1, 1, z) / a1);
  return res;
}

}  // namespace qcka
