#pragma once

#include <cstdint>
#include <random>

#include "dgap/linalg.hpp"

namespace dgap {

// Seed for a task identified by a counter within a sweep: plain XOR, so a
// sweep's record content is independent of scheduling order.
inline uint64_t task_seed(uint64_t base, uint64_t counter) { return base ^ counter; }

// Stronger mixing for nested streams (e.g. per-restart seeds inside a task
// that was itself seeded with task_seed).
uint64_t mixed_seed(uint64_t base, uint64_t counter);

// Deterministic RNG wrapper: a fixed seed reproduces the exact same stream.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }
  Complex gaussian_complex() { return Complex(gaussian(), gaussian()); }
  double uniform() { return uniform_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

ComplexMatrix gaussian_matrix(int rows, int cols, Rng& rng);

// Haar-distributed isometry (rows >= cols): QR of a complex Gaussian matrix
// with the R-diagonal phases absorbed into Q, which makes the distribution
// exactly Haar rather than merely orthonormal.
ComplexMatrix haar_isometry(int rows, int cols, Rng& rng);
ComplexMatrix haar_unitary(int d, Rng& rng);

ComplexVector random_unit_vector(int n, Rng& rng);
ComplexMatrix random_hermitian(int n, Rng& rng);
ComplexMatrix random_traceless_hermitian(int n, Rng& rng);
// Generic full-rank density matrix G G^dag / tr(G G^dag).
ComplexMatrix random_density(int n, Rng& rng);

}  // namespace dgap
