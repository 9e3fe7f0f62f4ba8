#pragma once

// Finite classical distributions P_XYZ and P_XY, Shannon quantities in bits,
// Eve's post-processing channels, and the Csiszar-Korner lower bound.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qcka/channel.hpp"
#include "qcka/errors.hpp"

namespace qcka {

using Cell = std::array<std::size_t, 3>;
using Cell2 = std::array<std::size_t, 2>;

struct AxisLabels {
  std::vector<std::string> x, y, z;
  friend bool operator==(const AxisLabels&, const AxisLabels&) = default;
};

namespace detail {

inline void check_probability(double p, const std::string& where) {
  if (!std::isfinite(p) || p < 0.0) throw ValidationError(where + ": probability " + std::to_string(p) + " is negative or not finite");
}

inline double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Entropy of nonnegative weights that already sum to one (not checked).
inline double entropy_unchecked(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) h -= plogp(v);
  return h;
}

}  // namespace detail

/// Tripartite probability mass function over [0,nx) x [0,ny) x [0,nz).
/// Stored sparsely; zero cells are dropped.
class JointDistribution {
 public:
  static constexpr double kTolerance = 1e-12;

  JointDistribution(std::size_t nx, std::size_t ny, std::size_t nz, std::map<Cell, double> mass,
                    AxisLabels labels = {})
      : nx_(nx), ny_(ny), nz_(nz), mass_(std::move(mass)), labels_(std::move(labels)) {
    const double total = validate();
    if (std::abs(total - 1.0) > kTolerance) {
      throw ValidationError("JointDistribution: total mass " + std::to_string(total) + " differs from 1");
    }
  }

  // Weights of any positive total ("to be normalized" tables).
  static JointDistribution from_weights(std::size_t nx, std::size_t ny, std::size_t nz,
                                        std::map<Cell, double> weights, AxisLabels labels = {}) {
    double total = 0.0;
    for (const auto& [cell, w] : weights) {
      detail::check_probability(w, "JointDistribution::from_weights");
      total += w;
    }
    if (!(total > 0.0)) throw ValidationError("JointDistribution::from_weights: zero total weight");
    for (auto& [cell, w] : weights) w /= total;
    return JointDistribution(nx, ny, nz, std::move(weights), std::move(labels));
  }

  // Dense layout index (x*ny + y)*nz + z.
  static JointDistribution from_dense(std::size_t nx, std::size_t ny, std::size_t nz, std::span<const double> dense) {
    if (dense.size() != nx * ny * nz) throw ValidationError("JointDistribution::from_dense: size mismatch");
    std::map<Cell, double> m;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t z = 0; z < nz; ++z)
          if (double p = dense[(x * ny + y) * nz + z]; p != 0.0) m[{x, y, z}] = p;
    return JointDistribution(nx, ny, nz, std::move(m));
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t nz() const { return nz_; }
  const std::map<Cell, double>& cells() const { return mass_; }
  const AxisLabels& labels() const { return labels_; }

  double operator()(std::size_t x, std::size_t y, std::size_t z) const {
    auto it = mass_.find({x, y, z});
    return it == mass_.end() ? 0.0 : it->second;
  }

  std::vector<double> dense() const {
    std::vector<double> d(nx_ * ny_ * nz_, 0.0);
    for (const auto& [c, p] : mass_) d[(c[0] * ny_ + c[1]) * nz_ + c[2]] = p;
    return d;
  }

  double total() const {
    double s = 0.0;
    for (const auto& [c, p] : mass_) s += p;
    return s;
  }

  friend bool operator==(const JointDistribution&, const JointDistribution&) = default;

 private:
  struct Unscaled {};
  friend JointDistribution apply_channel(const JointDistribution&, const Channel&);
  friend JointDistribution relabel(const JointDistribution&, const std::vector<std::size_t>&,
                                   const std::vector<std::size_t>&, const std::vector<std::size_t>&);

  // Derived from an already-normalized distribution: checked, never rescaled.
  JointDistribution(Unscaled, std::size_t nx, std::size_t ny, std::size_t nz, std::map<Cell, double> mass)
      : nx_(nx), ny_(ny), nz_(nz), mass_(std::move(mass)) {
    const double total = validate();
    if (std::abs(total - 1.0) > kTolerance) {
      throw NumericError("JointDistribution: derived mass " + std::to_string(total) + " differs from 1");
    }
  }

  double validate() {
    if (nx_ == 0 || ny_ == 0 || nz_ == 0) throw ValidationError("JointDistribution: alphabet sizes must be positive");
    double total = 0.0;
    for (auto it = mass_.begin(); it != mass_.end();) {
      const auto& [c, p] = *it;
      if (c[0] >= nx_ || c[1] >= ny_ || c[2] >= nz_) {
        throw ValidationError("JointDistribution: cell (" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," +
                              std::to_string(c[2]) + ") outside the declared alphabets");
      }
      detail::check_probability(p, "JointDistribution");
      total += p;
      it = (p == 0.0) ? mass_.erase(it) : std::next(it);
    }
    auto check_labels = [](const std::vector<std::string>& l, std::size_t n, const char* axis) {
      if (!l.empty() && l.size() != n) throw ValidationError(std::string("JointDistribution: label count for ") + axis);
    };
    check_labels(labels_.x, nx_, "X");
    check_labels(labels_.y, ny_, "Y");
    check_labels(labels_.z, nz_, "Z");
    return total;
  }

  std::size_t nx_, ny_, nz_;
  std::map<Cell, double> mass_;
  AxisLabels labels_;
};

/// Bipartite probability mass function P_XY.
class BipartiteDistribution {
 public:
  static constexpr double kTolerance = 1e-12;

  BipartiteDistribution(std::size_t nx, std::size_t ny, std::map<Cell2, double> mass)
      : nx_(nx), ny_(ny), mass_(std::move(mass)) {
    if (nx_ == 0 || ny_ == 0) throw ValidationError("BipartiteDistribution: alphabet sizes must be positive");
    double total = 0.0;
    for (auto it = mass_.begin(); it != mass_.end();) {
      const auto& [c, p] = *it;
      if (c[0] >= nx_ || c[1] >= ny_) throw ValidationError("BipartiteDistribution: cell outside the declared alphabets");
      detail::check_probability(p, "BipartiteDistribution");
      total += p;
      it = (p == 0.0) ? mass_.erase(it) : std::next(it);
    }
    if (std::abs(total - 1.0) > kTolerance) {
      throw ValidationError("BipartiteDistribution: total mass " + std::to_string(total) + " differs from 1");
    }
    if (total != 1.0)
      for (auto& [c, p] : mass_) p /= total;
  }

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  const std::map<Cell2, double>& cells() const { return mass_; }

  double operator()(std::size_t x, std::size_t y) const {
    auto it = mass_.find({x, y});
    return it == mass_.end() ? 0.0 : it->second;
  }

 private:
  std::size_t nx_, ny_;
  std::map<Cell2, double> mass_;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Dense marginal over the kept axes, in X, Y, Z order (row-major).
struct Marginal {
  std::vector<Axis> axes;
  std::vector<std::size_t> shape;
  std::vector<double> mass;

  BipartiteDistribution to_bipartite() const {
    if (shape.size() != 2) throw ValidationError("Marginal::to_bipartite: marginal is not over two axes");
    std::map<Cell2, double> m;
    for (std::size_t i = 0; i < shape[0]; ++i)
      for (std::size_t j = 0; j < shape[1]; ++j)
        if (double p = mass[i * shape[1] + j]; p != 0.0) m[{i, j}] = p;
    return BipartiteDistribution(shape[0], shape[1], std::move(m));
  }
};

inline Marginal marginalize(const JointDistribution& p, std::vector<Axis> axes) {
  if (axes.empty()) throw ValidationError("marginalize: empty axis set");
  bool keep[3] = {false, false, false};
  for (Axis a : axes) keep[static_cast<int>(a)] = true;
  const std::size_t dims[3] = {p.nx(), p.ny(), p.nz()};
  Marginal out;
  for (int a = 0; a < 3; ++a) {
    if (keep[a]) {
      out.axes.push_back(static_cast<Axis>(a));
      out.shape.push_back(dims[a]);
    }
  }
  std::size_t size = 1;
  for (auto s : out.shape) size *= s;
  out.mass.assign(size, 0.0);
  for (const auto& [c, m] : p.cells()) {
    std::size_t idx = 0;
    for (int a = 0; a < 3; ++a)
      if (keep[a]) idx = idx * dims[a] + c[static_cast<std::size_t>(a)];
    out.mass[idx] += m;
  }
  return out;
}

inline double shannon_entropy(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    detail::check_probability(v, "shannon_entropy");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-10) throw ValidationError("shannon_entropy: input sums to " + std::to_string(total));
  return detail::entropy_unchecked(p);
}

inline double binary_entropy(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("binary_entropy: argument outside [0,1]");
  return -detail::plogp(q) - detail::plogp(1.0 - q);
}

namespace detail {

// Sum_{xy} p log2(p / (px py)) for a dense nx-by-ny block of total mass `total`
// (the block need not be normalized; the result is scaled by `total`).
inline double block_information(const double* block, std::size_t nx, std::size_t ny, double total,
                                std::vector<double>& px, std::vector<double>& py) {
  if (!(total > 0.0)) return 0.0;
  px.assign(nx, 0.0);
  py.assign(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += block[x * ny + y];
      py[y] += block[x * ny + y];
    }
  double s = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      const double v = block[x * ny + y];
      if (v > 0.0) s += v * std::log2(v * total / (px[x] * py[y]));
    }
  return std::max(0.0, s);
}

}  // namespace detail

inline double mutual_information(const BipartiteDistribution& p) {
  std::vector<double> block(p.nx() * p.ny(), 0.0);
  for (const auto& [c, m] : p.cells()) block[c[0] * p.ny() + c[1]] = m;
  std::vector<double> px, py;
  return detail::block_information(block.data(), p.nx(), p.ny(), 1.0, px, py);
}

inline double mutual_information_xy(const JointDistribution& p) {
  return mutual_information(marginalize(p, {Axis::X, Axis::Y}).to_bipartite());
}
inline double mutual_information_xz(const JointDistribution& p) {
  return mutual_information(marginalize(p, {Axis::X, Axis::Z}).to_bipartite());
}
inline double mutual_information_yz(const JointDistribution& p) {
  return mutual_information(marginalize(p, {Axis::Y, Axis::Z}).to_bipartite());
}

/// I(X;Y|Z) = sum_z P_Z(z) I(X;Y|Z=z); empty z-slices contribute nothing.
inline double conditional_mutual_information(const JointDistribution& p) {
  const std::size_t nx = p.nx(), ny = p.ny(), nz = p.nz();
  std::vector<double> slices(nz * nx * ny, 0.0);
  std::vector<double> pz(nz, 0.0);
  for (const auto& [c, m] : p.cells()) {
    slices[(c[2] * nx + c[0]) * ny + c[1]] += m;
    pz[c[2]] += m;
  }
  std::vector<double> px, py;
  double s = 0.0;
  for (std::size_t z = 0; z < nz; ++z) s += detail::block_information(&slices[z * nx * ny], nx, ny, pz[z], px, py);
  return s;
}

/// P_XYZbar(x,y,zbar) = sum_z P(x,y,z) W(zbar|z).
inline JointDistribution apply_channel(const JointDistribution& p, const Channel& w) {
  if (w.rows() != p.nz()) {
    throw ValidationError("apply_channel: channel has " + std::to_string(w.rows()) + " rows but Z has " +
                          std::to_string(p.nz()) + " symbols");
  }
  std::map<Cell, double> out;
  for (const auto& [c, m] : p.cells())
    for (std::size_t zb = 0; zb < w.cols(); ++zb)
      if (double t = w(c[2], zb); t != 0.0) out[{c[0], c[1], zb}] += m * t;
  return JointDistribution(JointDistribution::Unscaled{}, p.nx(), p.ny(), w.cols(), std::move(out));
}

/// max{I(X;Y) - I(X;Z), I(Y;X) - I(Y;Z)}, unclamped.
inline double ck_lower_bound(const JointDistribution& p) {
  const double ixy = mutual_information_xy(p);
  return std::max(ixy - mutual_information_xz(p), ixy - mutual_information_yz(p));
}

/// Symbols permuted per axis: cell (x,y,z) moves to (px[x], py[y], pz[z]).
inline JointDistribution relabel(const JointDistribution& p, const std::vector<std::size_t>& px,
                                 const std::vector<std::size_t>& py, const std::vector<std::size_t>& pz) {
  if (px.size() != p.nx() || py.size() != p.ny() || pz.size() != p.nz())
    throw ValidationError("relabel: permutation sizes do not match the alphabets");
  for (const auto* perm : {&px, &py, &pz}) {
    std::vector<bool> hit(perm->size(), false);
    for (std::size_t v : *perm) {
      if (v >= perm->size() || hit[v]) throw ValidationError("relabel: argument is not a permutation");
      hit[v] = true;
    }
  }
  std::map<Cell, double> out;
  for (const auto& [c, m] : p.cells()) out[{px[c[0]], py[c[1]], pz[c[2]]}] = m;
  return JointDistribution(JointDistribution::Unscaled{}, p.nx(), p.ny(), p.nz(), std::move(out));
}

inline constexpr std::size_t kErased = 2;

/// Binary X, Y with P[X != Y] = alpha; Z = [Z_X, Z_Y] where each component
/// is its party's bit passed through an independent erasure channel. The
/// erasure symbol is index 2 on each component; Z is flattened to 3*z_x + z_y.
inline JointDistribution erasure_scenario(double alpha, double delta_x, double delta_y) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(alpha) || !in_unit(delta_x) || !in_unit(delta_y))
    throw ValidationError("erasure_scenario: parameters must lie in [0,1]");
  std::map<Cell, double> m;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      const double pxy = (x == y) ? (1.0 - alpha) / 2.0 : alpha / 2.0;
      for (int ex = 0; ex < 2; ++ex)
        for (int ey = 0; ey < 2; ++ey) {
          const std::size_t zx = ex ? kErased : x;
          const std::size_t zy = ey ? kErased : y;
          const double w = pxy * (ex ? delta_x : 1.0 - delta_x) * (ey ? delta_y : 1.0 - delta_y);
          if (w != 0.0) m[{x, y, zx * 3 + zy}] += w;
        }
    }
  AxisLabels labels{{"0", "1"}, {"0", "1"}, {}};
  const char* sym[3] = {"0", "1", "D"};
  for (int zx = 0; zx < 3; ++zx)
    for (int zy = 0; zy < 3; ++zy) labels.z.push_back(std::string("[") + sym[zx] + "," + sym[zy] + "]");
  return JointDistribution(2, 2, 9, std::move(m), std::move(labels));
}

}  // namespace qcka
