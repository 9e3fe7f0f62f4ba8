#pragma once

// Reference computations used only by the tests: they follow the textbook
// definitions directly and share no code with the library.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace qcka_test {

// H over a dense table, bits; ignores zero entries.
inline double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

// I(X;Y|Z) = H(XZ) + H(YZ) - H(XYZ) - H(Z) over dense (x*ny+y)*nz+z.
inline double cmi_entropy_form(const std::vector<double>& d, std::size_t nx, std::size_t ny, std::size_t nz) {
  std::vector<double> xz(nx * nz, 0.0), yz(ny * nz, 0.0), z(nz, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t k = 0; k < nz; ++k) {
        const double p = d[(x * ny + y) * nz + k];
        xz[x * nz + k] += p;
        yz[y * nz + k] += p;
        z[k] += p;
      }
  return entropy_of(xz) + entropy_of(yz) - entropy_of(d) - entropy_of(z);
}

// I(X;Y) = H(X) + H(Y) - H(XY) over dense x*ny+y.
inline double mi_entropy_form(const std::vector<double>& d, std::size_t nx, std::size_t ny) {
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      px[x] += d[x * ny + y];
      py[y] += d[x * ny + y];
    }
  return entropy_of(px) + entropy_of(py) - entropy_of(d);
}

inline std::vector<double> eigen_oracle(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  const auto& v = es.eigenvalues();
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace qcka_test
