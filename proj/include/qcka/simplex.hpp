#pragma once

// Nelder-Mead downhill simplex with restarts from the incumbent.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace qcka {

struct SimplexOptions {
  double initial_step = 0.5;
  // Converged once a fresh simplex around the incumbent improves it by less than this.
  double tolerance = 1e-9;
  int max_iters = 5000;
  int max_restarts = 8;
};

struct SimplexResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes `f` from `x0`. Standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). A single simplex stops when the spread of its
/// values drops below tolerance; it is then rebuilt around the best vertex
/// with a halved step, and the run ends once a rebuilt simplex no longer
/// improves the incumbent by `tolerance`.
template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, const SimplexOptions& opts = {}) {
  const std::size_t n = x0.size();
  SimplexResult res;
  res.x = x0;
  res.value = f(x0);
  res.evaluations = 1;
  if (n == 0) {
    res.converged = true;
    return res;
  }

  std::vector<std::vector<double>> pts(n + 1);
  std::vector<double> vals(n + 1);
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  double step = opts.initial_step;
  for (int restart = 0; restart <= opts.max_restarts && res.iterations < opts.max_iters; ++restart) {
    const double start_value = res.value;
    pts[0] = res.x;
    vals[0] = res.value;
    for (std::size_t i = 0; i < n; ++i) {
      pts[i + 1] = res.x;
      pts[i + 1][i] += step;
      vals[i + 1] = eval(pts[i + 1]);
    }

    while (res.iterations < opts.max_iters) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t best = order[0], worst = order[n], second = order[n - 1];
      if (vals[worst] - vals[best] <= opts.tolerance * 0.5) break;
      ++res.iterations;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t k = 0; k <= n; ++k)
        if (k != worst)
          for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[k][i];
      for (auto& c : centroid) c /= static_cast<double>(n);

      for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + (centroid[i] - pts[worst][i]);
      const double fr = eval(trial);
      if (fr < vals[best]) {
        for (std::size_t i = 0; i < n; ++i) trial2[i] = centroid[i] + 2.0 * (centroid[i] - pts[worst][i]);
        const double fe = eval(trial2);
        if (fe < fr) {
          pts[worst] = trial2;
          vals[worst] = fe;
        } else {
          pts[worst] = trial;
          vals[worst] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[worst] = trial;
        vals[worst] = fr;
        continue;
      }
      const bool outside = fr < vals[worst];
      for (std::size_t i = 0; i < n; ++i)
        trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                            : centroid[i] + 0.5 * (pts[worst][i] - centroid[i]);
      const double fc = eval(trial2);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = trial2;
        vals[worst] = fc;
        continue;
      }
      for (std::size_t k = 0; k <= n; ++k) {
        if (k == best) continue;
        for (std::size_t i = 0; i < n; ++i) pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
        vals[k] = eval(pts[k]);
      }
    }

    const auto best_it = std::min_element(vals.begin(), vals.end());
    const auto best = static_cast<std::size_t>(best_it - vals.begin());
    if (vals[best] < res.value) {
      res.value = vals[best];
      res.x = pts[best];
    }
    if (start_value - res.value < opts.tolerance) {
      res.converged = true;
      break;
    }
    step = std::max(step * 0.5, 1e-3);
  }
  return res;
}

}  // namespace qcka
