#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qcka/errors.hpp"

namespace qcka {

/// Row-stochastic matrix W(zbar | z): rows index the input symbol z, columns
/// the output symbol zbar.
class Channel {
 public:
  static constexpr double kRowTolerance = 1e-12;

  Channel() = default;

  Channel(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), w_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) throw ValidationError("Channel: empty alphabet");
    if (w_.size() != rows_ * cols_) throw ValidationError("Channel: entry count does not match shape");
    for (std::size_t z = 0; z < rows_; ++z) {
      double sum = 0.0;
      for (std::size_t c = 0; c < cols_; ++c) {
        const double p = w_[z * cols_ + c];
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw ValidationError("Channel: entry (" + std::to_string(z) + "," + std::to_string(c) +
                                ") is negative or not finite");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > kRowTolerance) {
        throw ValidationError("Channel: row " + std::to_string(z) + " sums to " + std::to_string(sum));
      }
    }
  }

  static Channel identity(std::size_t n) {
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;
    return Channel(n, n, std::move(w));
  }

  // Every input mapped to output `target`.
  static Channel constant(std::size_t rows, std::size_t cols, std::size_t target = 0) {
    if (target >= cols) throw ValidationError("Channel::constant: target out of range");
    std::vector<double> w(rows * cols, 0.0);
    for (std::size_t z = 0; z < rows; ++z) w[z * cols + target] = 1.0;
    return Channel(rows, cols, std::move(w));
  }

  // z -> map[z] with certainty.
  static Channel deterministic(const std::vector<std::size_t>& map, std::size_t cols) {
    std::vector<double> w(map.size() * cols, 0.0);
    for (std::size_t z = 0; z < map.size(); ++z) {
      if (map[z] >= cols) throw ValidationError("Channel::deterministic: output out of range");
      w[z * cols + map[z]] = 1.0;
    }
    return Channel(map.size(), cols, std::move(w));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t z, std::size_t zbar) const { return w_[z * cols_ + zbar]; }
  const std::vector<double>& entries() const { return w_; }

  // Same channel with inputs relabeled: row perm[z] of the result is row z of this.
  Channel permute_inputs(const std::vector<std::size_t>& perm) const {
    if (perm.size() != rows_) throw ValidationError("Channel::permute_inputs: size mismatch");
    std::vector<double> w(w_.size());
    for (std::size_t z = 0; z < rows_; ++z)
      for (std::size_t c = 0; c < cols_; ++c) w[perm[z] * cols_ + c] = w_[z * cols_ + c];
    return Channel(rows_, cols_, std::move(w));
  }

  // Same channel with `cols - cols()` extra outputs that are never used.
  Channel padded(std::size_t cols) const {
    if (cols < cols_) throw ValidationError("Channel::padded: cannot remove outputs");
    std::vector<double> w(rows_ * cols, 0.0);
    for (std::size_t z = 0; z < rows_; ++z)
      for (std::size_t c = 0; c < cols_; ++c) w[z * cols + c] = w_[z * cols_ + c];
    return Channel(rows_, cols, std::move(w));
  }

  friend bool operator==(const Channel&, const Channel&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> w_;
};

}  // namespace qcka
