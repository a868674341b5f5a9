#include "dgap/diamond.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dgap/random.hpp"
#include "dgap/sdp.hpp"

namespace dgap {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct ComplexTriplet {
  int row;
  int col;
  Complex value;
};

// One affine constraint of the diamond-norm SDP, kept in complex form for
// dual-certificate reconstruction. block is 0 (top-left) or 1 (bottom-right);
// triplets index the N x N block.
struct BlockConstraint {
  int block;
  std::vector<ComplexTriplet> triplets;
  double rhs;
};

std::vector<ComplexTriplet> matrix_triplets(const ComplexMatrix& m) {
  std::vector<ComplexTriplet> out;
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (m(r, c) != Complex(0.0, 0.0)) out.push_back({r, c, m(r, c)});
    }
  }
  return out;
}

// Constraints forcing each diagonal block to have the form 1_Y (x) sigma with
// tr(sigma) = 1: orthogonality against h_a (x) g_b for traceless h_a, plus
// the block trace.
std::vector<BlockConstraint> build_constraints(int d) {
  const int n = d * d;
  const auto basis = hermitian_basis(d);
  std::vector<BlockConstraint> out;
  for (int block = 0; block < 2; ++block) {
    for (int a = 1; a < d * d; ++a) {
      const auto ha = matrix_triplets(basis[a]);
      for (int b = 0; b < d * d; ++b) {
        const auto gb = matrix_triplets(basis[b]);
        BlockConstraint c;
        c.block = block;
        c.rhs = 0.0;
        for (const auto& ea : ha) {
          for (const auto& eb : gb) {
            c.triplets.push_back({composite_index(ea.row, eb.row, d),
                                  composite_index(ea.col, eb.col, d),
                                  ea.value * eb.value});
          }
        }
        out.push_back(std::move(c));
      }
    }
  }
  for (int block = 0; block < 2; ++block) {
    BlockConstraint c;
    c.block = block;
    c.rhs = static_cast<double>(d);
    for (int i = 0; i < n; ++i) c.triplets.push_back({i, i, 1.0});
    out.push_back(std::move(c));
  }
  return out;
}

// Real embedding of a complex Hermitian matrix: [[Re, -Im], [Im, Re]].
RealMatrix embed_dense(const ComplexMatrix& m) {
  const int n = static_cast<int>(m.rows());
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m.real();
  out.bottomRightCorner(n, n) = m.real();
  out.topRightCorner(n, n) = -m.imag();
  out.bottomLeftCorner(n, n) = m.imag();
  return out;
}

// Inverse of embed_dense with averaging over the embedding symmetry, so
// roundoff that leaves the embedded subspace is projected back.
ComplexMatrix unembed_dense(const RealMatrix& m) {
  const int n = static_cast<int>(m.rows()) / 2;
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double re = 0.5 * (m(i, j) + m(n + i, n + j));
      const double im = 0.5 * (m(n + i, j) - m(i, n + j));
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

void embed_triplet(sdp::SymTriplets& dst, int row, int col, Complex v, int nc) {
  if (v.real() != 0.0) {
    dst.add(row, col, v.real());
    dst.add(nc + row, nc + col, v.real());
  }
  if (v.imag() != 0.0) {
    dst.add(row, nc + col, -v.imag());
    dst.add(nc + row, col, v.imag());
  }
}

double min_eigenvalue(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix(0.5 * (h + h.adjoint())),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_norm_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix(0.5 * (h + h.adjoint())),
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

ComplexMatrix assemble_block(const ComplexMatrix& b0, const ComplexMatrix& x,
                             const ComplexMatrix& b1) {
  const int n = static_cast<int>(b0.rows());
  ComplexMatrix m(2 * n, 2 * n);
  m.topLeftCorner(n, n) = b0;
  m.topRightCorner(n, n) = x;
  m.bottomLeftCorner(n, n) = x.adjoint();
  m.bottomRightCorner(n, n) = b1;
  return m;
}

// Feasible-point repair: project the diagonal blocks onto the 1 (x) sigma
// form and, if the result dips below zero, mix toward the strictly feasible
// maximally mixed point. Returns the certified primal objective Re<J, X>.
double primal_certificate(const ComplexMatrix& m_c, const ComplexMatrix& j, int d) {
  const int n = d * d;
  ComplexMatrix b0 = m_c.topLeftCorner(n, n);
  ComplexMatrix b1 = m_c.bottomRightCorner(n, n);
  ComplexMatrix xb = m_c.topRightCorner(n, n);

  const ComplexMatrix eye = ComplexMatrix::Identity(d, d);
  auto project_block = [&](const ComplexMatrix& b) {
    ComplexMatrix sigma = partial_trace(BipartiteOperator(d, d, b), Factor::H) / d;
    sigma = 0.5 * (sigma + sigma.adjoint()).eval();
    const double tr = sigma.trace().real();
    if (tr < 0.5) return ComplexMatrix(kron(eye, eye / static_cast<double>(d)));
    return ComplexMatrix(kron(eye, ComplexMatrix(sigma / tr)));
  };
  b0 = project_block(b0);
  b1 = project_block(b1);

  double shrink = 1.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const ComplexMatrix m = assemble_block(b0, shrink * xb, b1);
    const double lam = min_eigenvalue(m);
    const double margin = 1e-14 * (1.0 + spectral_norm_hermitian(m));
    if (lam >= margin) break;
    // Mixing with M0 = blkdiag(1 (x) I/d, 1 (x) I/d) keeps the block form
    // and raises the minimum eigenvalue to at least t/d + (1-t) lam.
    const double t = std::min(1.0, (2.0 * margin - lam) / (1.0 / d - lam));
    b0 = (1.0 - t) * b0 + (t / d) * kron(eye, eye);
    b1 = (1.0 - t) * b1 + (t / d) * kron(eye, eye);
    shrink *= (1.0 - t);
  }
  return ((j.adjoint() * (shrink * xb)).trace()).real();
}

// Dual certificate: Y_b = -2 G_b(y) from the block multipliers; any shift
// that makes [[Y0, -J], [-J^dag, Y1]] PSD yields the verified upper bound
// (||tr_Y Y0||_inf + ||tr_Y Y1||_inf) / 2.
double dual_certificate(const std::vector<BlockConstraint>& constraints,
                        const Eigen::VectorXd& y, const ComplexMatrix& j, int d) {
  const int n = d * d;
  ComplexMatrix g0 = ComplexMatrix::Zero(n, n);
  ComplexMatrix g1 = ComplexMatrix::Zero(n, n);
  for (size_t i = 0; i < constraints.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0.0) continue;
    ComplexMatrix& g = constraints[i].block == 0 ? g0 : g1;
    for (const auto& t : constraints[i].triplets) {
      g(t.row, t.col) += yi * t.value;
    }
  }
  ComplexMatrix y0 = -2.0 * g0;
  ComplexMatrix y1 = -2.0 * g1;
  const ComplexMatrix w = assemble_block(y0, -j, y1);
  const double lam = min_eigenvalue(w);
  const double eps = std::max(0.0, -lam) + 1e-12 * (1.0 + hs_norm(w));
  y0.diagonal().array() += eps;
  y1.diagonal().array() += eps;
  const ComplexMatrix t0 = partial_trace(BipartiteOperator(d, d, y0), Factor::H);
  const ComplexMatrix t1 = partial_trace(BipartiteOperator(d, d, y1), Factor::H);
  return 0.5 * (spectral_norm_hermitian(t0) + spectral_norm_hermitian(t1));
}

}  // namespace

DiamondResult diamond_norm_sdp(const SuperOperator& s) {
  const int d = s.d;
  const int n = d * d;
  const ComplexMatrix j_full = superop_choi(s).matrix.matrix;
  const double scale = hs_norm(j_full);

  DiamondResult out;
  out.method = "sdp";
  if (scale < 1e-13) {
    // ||S||_<> <= ||J||_1 <= sqrt(N) ||J||_2, so the zero map certifies itself.
    out.lower_certificate = 0.0;
    out.upper_certificate = std::sqrt(static_cast<double>(n)) * scale;
    out.value = 0.5 * out.upper_certificate;
    out.gap = out.upper_certificate;
    return out;
  }
  const ComplexMatrix j = j_full / scale;

  const auto constraints = build_constraints(d);
  sdp::Problem prob;
  prob.n = 4 * n;  // 2N complex block matrix, embedded
  ComplexMatrix c_std = ComplexMatrix::Zero(2 * n, 2 * n);
  c_std.topRightCorner(n, n) = -0.5 * j;
  c_std.bottomLeftCorner(n, n) = -0.5 * j.adjoint();
  prob.objective = embed_dense(c_std);
  prob.rhs.resize(static_cast<Eigen::Index>(constraints.size()));
  prob.constraints.reserve(constraints.size());
  for (size_t i = 0; i < constraints.size(); ++i) {
    sdp::SymTriplets a;
    const int offset = constraints[i].block * n;
    for (const auto& t : constraints[i].triplets) {
      embed_triplet(a, offset + t.row, offset + t.col, t.value, 2 * n);
    }
    prob.constraints.push_back(std::move(a));
    // <emb(A), emb(M)> = 2 Re<A, M>.
    prob.rhs(static_cast<Eigen::Index>(i)) = 2.0 * constraints[i].rhs;
  }

  sdp::Options opts;
  opts.gap_tol = 5e-10;
  opts.feas_tol = 1e-9;
  const sdp::Solution sol = sdp::solve(prob, opts);

  const ComplexMatrix m_c = unembed_dense(sol.X);
  const double lower = primal_certificate(ComplexMatrix(0.5 * (m_c + m_c.adjoint())), j, d);
  const double upper = dual_certificate(constraints, sol.y, j, d);

  out.iterations = sol.iterations;
  out.lower_certificate = std::max(0.0, lower) * scale;
  out.upper_certificate = std::max(upper, lower) * scale;
  out.value = 0.5 * (out.lower_certificate + out.upper_certificate);
  out.gap = out.upper_certificate - out.lower_certificate;

  const double gap_budget = d <= 4 ? 1e-6 : 1e-5 * (1.0 + out.value);
  if (!(out.gap <= gap_budget) || !std::isfinite(out.value)) {
    throw SolverFailure("diamond_norm_sdp: certified gap " + std::to_string(out.gap) +
                            " exceeds budget after " + std::to_string(sol.iterations) +
                            " iterations",
                        out);
  }
  return out;
}

namespace {

struct AscentEval {
  double value;
  ComplexMatrix sign_matrix;  // subgradient witness, sign(0) = +1
};

AscentEval evaluate_ascent(const SuperOperator& s, const ComplexVector& psi) {
  const int n = s.d * s.d;
  const ComplexMatrix rho = psi * psi.adjoint();
  ComplexMatrix y = apply_extended(s, BipartiteOperator(s.d, s.d, rho)).matrix;
  y = 0.5 * (y + y.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(y);
  AscentEval out;
  out.value = es.eigenvalues().cwiseAbs().sum();
  RealVector signs(n);
  for (int i = 0; i < n; ++i) signs(i) = es.eigenvalues()(i) < 0.0 ? -1.0 : 1.0;
  out.sign_matrix = es.eigenvectors() * signs.asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

}  // namespace

AscentState diamond_norm_ascent(const SuperOperator& s, int restarts, uint64_t seed) {
  if (!s.hermiticity_preserving) {
    throw std::domain_error("diamond_norm_ascent: map must be Hermiticity-preserving");
  }
  if (restarts < 1) throw std::invalid_argument("diamond_norm_ascent: restarts must be >= 1");

  const int d = s.d;
  const int n = d * d;
  SuperOperator adj = make_superop(d, ComplexMatrix(s.transfer.adjoint()));

  auto gradient_operator = [&](const ComplexMatrix& w) {
    ComplexMatrix g = apply_extended(adj, BipartiteOperator(d, d, w)).matrix;
    return ComplexMatrix(0.5 * (g + g.adjoint()));
  };

  ComplexVector best_psi = ComplexVector::Zero(n);
  best_psi(0) = 1.0;
  double best_value = -1.0;

  for (int r = 0; r < restarts; ++r) {
    ComplexVector psi;
    if (r == 0) {
      // Maximally entangled start; often near the optimum for id - T maps.
      psi = vec(ComplexMatrix::Identity(d, d)) / std::sqrt(static_cast<double>(d));
    } else {
      Rng rng(mixed_seed(seed, static_cast<uint64_t>(r)));
      psi = random_unit_vector(n, rng);
    }
    AscentEval cur = evaluate_ascent(s, psi);

    int stalled = 0;
    for (int iter = 0; iter < 1000 && stalled < 5; ++iter) {
      const double f_before = cur.value;
      const ComplexMatrix g = gradient_operator(cur.sign_matrix);
      ComplexVector grad = g * psi;
      grad -= (psi.dot(grad)) * psi;  // tangent projection

      bool improved = false;
      if (grad.norm() > 1e-15) {
        const ComplexVector u = grad.normalized();
        double alpha = 0.1;
        for (int h = 0; h < 30; ++h) {
          ComplexVector cand = psi + alpha * u;
          cand.normalize();
          const AscentEval trial = evaluate_ascent(s, cand);
          if (trial.value > cur.value) {
            psi = cand;
            cur = trial;
            improved = true;
            break;
          }
          alpha *= 0.5;
        }
      }
      if (!improved) {
        // Fixed-point polish: the top eigenvector of the gradient operator
        // maximizes the linearized objective <W, (S (x) id)(psi psi^dag)>.
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
        ComplexVector cand = es.eigenvectors().col(n - 1);
        cand.normalize();
        const AscentEval trial = evaluate_ascent(s, cand);
        if (trial.value > cur.value) {
          psi = cand;
          cur = trial;
        }
      }
      stalled = (cur.value - f_before < 1e-12) ? stalled + 1 : 0;
    }

    if (cur.value > best_value) {
      best_value = cur.value;
      best_psi = psi;
    }
  }

  best_psi.normalize();
  AscentState out;
  out.psi = best_psi;
  out.value = evaluate_ascent(s, best_psi).value;
  out.restarts_used = restarts;
  out.seed = seed;
  return out;
}

PointwiseLR pointwise_LR(const Channel& t, const BipartiteOperator& rho) {
  const int d = t.d;
  if (rho.dim_h != d || rho.dim_k != d) {
    throw std::invalid_argument("pointwise_LR: rho must live on H (x) K with dH = dK = d");
  }
  if ((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("pointwise_LR: rho is not Hermitian");
  }
  if (std::abs(rho.matrix.trace().real() - 1.0) > 1e-10 ||
      std::abs(rho.matrix.trace().imag()) > 1e-10) {
    throw std::invalid_argument("pointwise_LR: rho must have unit trace");
  }
  if (min_eigenvalue(rho.matrix) < -1e-10) {
    throw std::invalid_argument("pointwise_LR: rho is not positive semidefinite");
  }

  const SuperOperator phi = id_minus(t);
  const SuperOperator theta_phi = compose_theta(phi);
  PointwiseLR out;
  out.R = trace_norm(apply_extended(phi, rho).matrix);
  out.L = trace_norm(apply_extended(theta_phi, rho).matrix);
  if (out.L > (d / kSqrt2) * out.R + 1e-9) {
    throw std::logic_error("pointwise_LR: pointwise theorem bound violated");
  }
  return out;
}

}  // namespace dgap
