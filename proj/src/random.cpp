#include "dgap/random.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace dgap {

uint64_t mixed_seed(uint64_t base, uint64_t counter) {
  // splitmix64 finalizer over the combined value.
  uint64_t z = base + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ComplexMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      g(i, j) = rng.gaussian_complex();
    }
  }
  return g;
}

ComplexMatrix haar_isometry(int rows, int cols, Rng& rng) {
  if (rows < cols || cols < 1) {
    throw std::invalid_argument("haar_isometry: need rows >= cols >= 1");
  }
  const ComplexMatrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
  const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (int j = 0; j < cols; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

ComplexMatrix haar_unitary(int d, Rng& rng) { return haar_isometry(d, d, rng); }

ComplexVector random_unit_vector(int n, Rng& rng) {
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.gaussian_complex();
  const double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

ComplexMatrix random_hermitian(int n, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix random_traceless_hermitian(int n, Rng& rng) {
  ComplexMatrix h = random_hermitian(n, rng);
  const Complex tr = h.trace();
  h -= (tr / static_cast<double>(n)) * ComplexMatrix::Identity(n, n);
  return h;
}

ComplexMatrix random_density(int n, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace dgap
