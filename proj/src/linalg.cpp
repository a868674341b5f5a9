#include "dgap/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dgap {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex& z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

BipartiteOperator::BipartiteOperator(int dh, int dk, ComplexMatrix m)
    : dim_h(dh), dim_k(dk), matrix(std::move(m)) {
  if (dh < 1 || dk < 1) {
    throw std::invalid_argument("BipartiteOperator: factor dimensions must be positive");
  }
  const int n = dh * dk;
  if (matrix.rows() != n || matrix.cols() != n) {
    throw std::invalid_argument("BipartiteOperator: matrix must be " + std::to_string(n) +
                                "x" + std::to_string(n));
  }
}

namespace {

bool nearly_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("trace_norm: matrix must be square");
  }
  if (m.rows() == 0) return 0.0;
  // Hermitian fast path: singular values are |eigenvalues|.
  if (nearly_hermitian(m, 1e-13 * std::max(1.0, m.cwiseAbs().maxCoeff()))) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix(0.5 * (m + m.adjoint())),
                                                    Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double hs_norm(const ComplexMatrix& m) { return m.norm(); }

double spectral_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

RealVector singular_values(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const BipartiteOperator& x, Factor which) {
  const int dh = x.dim_h;
  const int dk = x.dim_k;
  if (which == Factor::H) {
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (int j = 0; j < dk; ++j) {
      for (int l = 0; l < dk; ++l) {
        Complex s = 0.0;
        for (int i = 0; i < dh; ++i) {
          s += x.matrix(composite_index(i, j, dk), composite_index(i, l, dk));
        }
        out(j, l) = s;
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dh, dh);
  for (int i = 0; i < dh; ++i) {
    for (int k = 0; k < dh; ++k) {
      Complex s = 0.0;
      for (int j = 0; j < dk; ++j) {
        s += x.matrix(composite_index(i, j, dk), composite_index(k, j, dk));
      }
      out(i, k) = s;
    }
  }
  return out;
}

BipartiteOperator partial_transpose(const BipartiteOperator& x) {
  const int dh = x.dim_h;
  const int dk = x.dim_k;
  ComplexMatrix out(x.side(), x.side());
  for (int i = 0; i < dh; ++i) {
    for (int j = 0; j < dk; ++j) {
      for (int k = 0; k < dh; ++k) {
        for (int l = 0; l < dk; ++l) {
          out(composite_index(i, j, dk), composite_index(k, l, dk)) =
              x.matrix(composite_index(k, j, dk), composite_index(i, l, dk));
        }
      }
    }
  }
  return BipartiteOperator(dh, dk, std::move(out));
}

ComplexVector vec(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("vec: matrix must be square");
  }
  const int d = static_cast<int>(a.rows());
  ComplexVector v(d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      v(composite_index(i, j, d)) = a(i, j);
    }
  }
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, int d) {
  if (d < 1 || v.size() != static_cast<Eigen::Index>(d) * d) {
    throw std::invalid_argument("unvec: vector length must equal d*d");
  }
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      a(i, j) = v(composite_index(i, j, d));
    }
  }
  return a;
}

BipartiteOperator swap_operator(int d) {
  if (d < 1) throw std::invalid_argument("swap_operator: d must be positive");
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      f(composite_index(j, i, d), composite_index(i, j, d)) = 1.0;
    }
  }
  return BipartiteOperator(d, d, std::move(f));
}

HermEig herm_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("herm_eig: matrix must be square");
  }
  const ComplexMatrix asym = h - h.adjoint();
  if (spectral_norm(asym) > 1e-10) {
    throw std::domain_error("herm_eig: input is not Hermitian within tolerance 1e-10");
  }
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver failed");
  }
  // Eigen returns ascending order; flip to descending.
  HermEig out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

int numerical_rank(const ComplexMatrix& m, double rel_tol) {
  if (rel_tol <= 0.0) {
    throw std::invalid_argument("numerical_rank: rel_tol must be positive");
  }
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const RealVector sv = singular_values(m);
  const double top = sv(0);
  if (top == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * top) ++rank;
  }
  return rank;
}

std::vector<ComplexMatrix> hermitian_basis(int d) {
  if (d < 1) throw std::invalid_argument("hermitian_basis: d must be positive");
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<size_t>(d) * d);
  basis.push_back(ComplexMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  for (int k = 1; k < d; ++k) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < k; ++i) m(i, i) = 1.0;
    m(k, k) = -static_cast<double>(k);
    basis.push_back(m / std::sqrt(static_cast<double>(k) * (k + 1)));
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      ComplexMatrix sym = ComplexMatrix::Zero(d, d);
      sym(i, j) = inv_sqrt2;
      sym(j, i) = inv_sqrt2;
      basis.push_back(sym);
      ComplexMatrix asym = ComplexMatrix::Zero(d, d);
      asym(i, j) = Complex(0.0, inv_sqrt2);
      asym(j, i) = Complex(0.0, -inv_sqrt2);
      basis.push_back(asym);
    }
  }
  return basis;
}

}  // namespace dgap
