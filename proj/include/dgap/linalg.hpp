#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dgap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Composite index of |i>_H (x) |j>_K in the H-major ordering used everywhere
// in this library: basis vector |i,j> sits at position i*dim_k + j.
inline int composite_index(int i, int j, int dim_k) { return i * dim_k + j; }

bool all_finite(const ComplexMatrix& m);

// An operator on H (x) K, stored as a square matrix over the H-major product
// basis. dim_h and dim_k are the factor dimensions.
struct BipartiteOperator {
  int dim_h = 0;
  int dim_k = 0;
  ComplexMatrix matrix;

  BipartiteOperator(int dh, int dk, ComplexMatrix m);
  int side() const { return dim_h * dim_k; }
};

enum class Factor { H, K };

// Schatten-1 norm (sum of singular values). Requires a square matrix.
double trace_norm(const ComplexMatrix& m);
// Hilbert-Schmidt / Frobenius norm. Any shape.
double hs_norm(const ComplexMatrix& m);
// Largest singular value. Any shape.
double spectral_norm(const ComplexMatrix& m);
// All singular values, descending.
RealVector singular_values(const ComplexMatrix& m);

// Kronecker product in the H-major convention: the left factor owns the
// major index, so kron(A, B) * vec(X) == vec(A * X * B^T).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Traces out the named factor: which == Factor::H gives the dK x dK operator
// tr_H(X), which == Factor::K gives the dH x dH operator tr_K(X).
ComplexMatrix partial_trace(const BipartiteOperator& x, Factor which);

// Transposition on the H factor only: out[(i,j),(k,l)] = in[(k,j),(i,l)].
// An exact entry permutation; applying it twice is the identity.
BipartiteOperator partial_transpose(const BipartiteOperator& x);

// Vectorization following |vec(A)> = sum_ij A_ij |i>_H (x) |j>_K, so entry
// A(i, j) lands at component i*d + j.
ComplexVector vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexVector& v, int d);

// Swap operator F(|i> (x) |j>) = |j> (x) |i> on two factors of dimension d.
BipartiteOperator swap_operator(int d);

struct HermEig {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // columns, same order
};

// Eigendecomposition of a Hermitian matrix. Inputs with asymmetry up to
// 1e-10 in spectral norm are symmetrized as (H + H^dag)/2 first; anything
// worse is rejected.
HermEig herm_eig(const ComplexMatrix& h);

// Number of singular values above rel_tol * (largest singular value).
int numerical_rank(const ComplexMatrix& m, double rel_tol = 1e-10);

// Orthonormal Hermitian basis of d x d matrices under <A,B> = tr(A^dag B).
// Element 0 is I/sqrt(d); elements 1..d-1 are traceless diagonal; the rest
// are the symmetric and antisymmetric off-diagonal pairs.
std::vector<ComplexMatrix> hermitian_basis(int d);

}  // namespace dgap
