#include "dgap/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace dgap::sdp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Eigen::MatrixXd SymTriplets::dense(int n) const {
  MatrixXd m = MatrixXd::Zero(n, n);
  for (const auto& e : entries) m(e.row, e.col) += e.value;
  return m;
}

namespace {

double inner(const MatrixXd& a, const MatrixXd& b) { return (a.array() * b.array()).sum(); }

VectorXd apply_constraints(const Problem& prob, const MatrixXd& v) {
  VectorXd out(prob.constraints.size());
  for (size_t i = 0; i < prob.constraints.size(); ++i) {
    double s = 0.0;
    for (const auto& e : prob.constraints[i].entries) s += e.value * v(e.row, e.col);
    out(static_cast<Eigen::Index>(i)) = s;
  }
  return out;
}

MatrixXd adjoint_constraints(const Problem& prob, const VectorXd& y) {
  MatrixXd out = MatrixXd::Zero(prob.n, prob.n);
  for (size_t i = 0; i < prob.constraints.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0.0) continue;
    for (const auto& e : prob.constraints[i].entries) out(e.row, e.col) += yi * e.value;
  }
  return out;
}

// Schur complement M_ij = tr(A_i X A_j S^-1), evaluated entrywise through the
// triplet lists: tr(A_i X A_j Sinv) = sum_a sum_b u_a v_b X(c_a, r_b) Sinv(c_b, r_a).
MatrixXd schur_complement(const Problem& prob, const MatrixXd& x, const MatrixXd& sinv) {
  const int m = static_cast<int>(prob.constraints.size());
  MatrixXd out(m, m);
  for (int i = 0; i < m; ++i) {
    const auto& ai = prob.constraints[i].entries;
    for (int j = i; j < m; ++j) {
      const auto& aj = prob.constraints[j].entries;
      double s = 0.0;
      for (const auto& ea : ai) {
        double partial = 0.0;
        for (const auto& eb : aj) {
          partial += eb.value * x(ea.col, eb.row) * sinv(eb.col, ea.row);
        }
        s += ea.value * partial;
      }
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

// Largest step alpha <= 1 with P + alpha*D staying positive definite,
// shortened by the fraction-to-boundary factor tau.
double max_step(const MatrixXd& p, const MatrixXd& d, double tau) {
  Eigen::LLT<MatrixXd> llt(p);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd l = llt.matrixL();
  MatrixXd w = l.triangularView<Eigen::Lower>().solve(d);
  w = l.triangularView<Eigen::Lower>().solve(w.transpose()).eval();
  w = 0.5 * (w + w.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(w, Eigen::EigenvaluesOnly);
  const double lam_min = es.eigenvalues().minCoeff();
  if (lam_min >= 0.0) return 1.0;
  return std::min(1.0, -tau / lam_min);
}

struct Residuals {
  VectorXd rp;
  MatrixXd rd;
  double pres = 0.0;
  double dres = 0.0;
};

Residuals residuals(const Problem& prob, const MatrixXd& x, const VectorXd& y,
                    const MatrixXd& s, double bnorm, double cnorm) {
  Residuals r;
  r.rp = prob.rhs - apply_constraints(prob, x);
  r.rd = prob.objective - s - adjoint_constraints(prob, y);
  r.pres = r.rp.norm() / (1.0 + bnorm);
  r.dres = r.rd.norm() / (1.0 + cnorm);
  return r;
}

}  // namespace

Solution solve(const Problem& prob, const Options& opts) {
  const int n = prob.n;
  const int m = static_cast<int>(prob.constraints.size());
  if (n < 1) throw std::invalid_argument("sdp::solve: empty problem");
  if (prob.rhs.size() != m) throw std::invalid_argument("sdp::solve: rhs size mismatch");
  if (prob.objective.rows() != n || prob.objective.cols() != n) {
    throw std::invalid_argument("sdp::solve: objective size mismatch");
  }

  const double bnorm = prob.rhs.norm();
  const double cnorm = prob.objective.norm();

  // Cold start scaled to the data, SDPT3-style.
  double xi_p = std::sqrt(static_cast<double>(n));
  double xi_d = std::sqrt(static_cast<double>(n));
  for (int i = 0; i < m; ++i) {
    double anorm = 0.0;
    for (const auto& e : prob.constraints[i].entries) anorm += e.value * e.value;
    anorm = std::sqrt(anorm);
    xi_p = std::max(xi_p, n * std::abs(prob.rhs(i)) / (1.0 + anorm));
    xi_d = std::max(xi_d, anorm);
  }
  xi_d = std::max(xi_d, cnorm / std::sqrt(static_cast<double>(n)));

  MatrixXd x = xi_p * MatrixXd::Identity(n, n);
  MatrixXd s = xi_d * MatrixXd::Identity(n, n);
  VectorXd y = VectorXd::Zero(m);

  Solution best;
  best.X = x;
  best.S = s;
  best.y = y;
  double best_score = std::numeric_limits<double>::infinity();

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const Residuals res = residuals(prob, x, y, s, bnorm, cnorm);
    const double pobj = inner(prob.objective, x);
    const double dobj = prob.rhs.dot(y);
    const double xs = inner(x, s);
    const double mu = xs / n;
    const double rel_gap = std::abs(xs) / (1.0 + std::abs(pobj) + std::abs(dobj));

    const double score = std::max({rel_gap, res.pres, res.dres});
    if (score < best_score) {
      best_score = score;
      best.X = x;
      best.S = s;
      best.y = y;
      best.primal_objective = pobj;
      best.dual_objective = dobj;
      best.rel_gap = rel_gap;
      best.primal_residual = res.pres;
      best.dual_residual = res.dres;
    }
    if (rel_gap <= opts.gap_tol && res.pres <= opts.feas_tol && res.dres <= opts.feas_tol) {
      best.converged = true;
      break;
    }
    if (mu <= 0.0 || !std::isfinite(mu)) break;

    Eigen::LLT<MatrixXd> s_llt(s);
    if (s_llt.info() != Eigen::Success) break;
    const MatrixXd sinv = s_llt.solve(MatrixXd::Identity(n, n));

    MatrixXd schur = schur_complement(prob, x, sinv);
    // Tiny diagonal lift to keep the factorization stable near convergence.
    const double jitter = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
    schur.diagonal().array() += jitter;
    Eigen::LDLT<MatrixXd> schur_ldlt(schur);
    if (schur_ldlt.info() != Eigen::Success) break;

    const VectorXd a_sinv = apply_constraints(prob, sinv);
    const MatrixXd x_rd_sinv = x * res.rd * sinv;
    const VectorXd a_xrdsinv = apply_constraints(prob, x_rd_sinv);

    // Predictor: sigma = 0.
    const VectorXd rhs_aff = prob.rhs + a_xrdsinv;
    const VectorXd dy_aff = schur_ldlt.solve(rhs_aff);
    const MatrixXd ds_aff = res.rd - adjoint_constraints(prob, dy_aff);
    MatrixXd dx_aff = -x - x * ds_aff * sinv;
    dx_aff = 0.5 * (dx_aff + dx_aff.transpose()).eval();

    const double ap_aff = max_step(x, dx_aff, opts.step_fraction);
    const double ad_aff = max_step(s, ds_aff, opts.step_fraction);
    const double mu_aff =
        inner(x + ap_aff * dx_aff, s + ad_aff * ds_aff) / n;
    double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3);
    sigma = std::clamp(sigma, 1e-10, 1.0);

    // Corrector with the Mehrotra second-order term.
    const MatrixXd corr = dx_aff * ds_aff * sinv;
    const VectorXd a_corr = apply_constraints(prob, corr);
    const VectorXd rhs_cc = prob.rhs - (sigma * mu) * a_sinv + a_xrdsinv + a_corr;
    const VectorXd dy = schur_ldlt.solve(rhs_cc);
    const MatrixXd ds = res.rd - adjoint_constraints(prob, dy);
    MatrixXd dx = (sigma * mu) * sinv - x - x * ds * sinv - corr;
    dx = 0.5 * (dx + dx.transpose()).eval();

    double ap = max_step(x, dx, opts.step_fraction);
    double ad = max_step(s, ds, opts.step_fraction);
    if (ap <= 1e-14 && ad <= 1e-14) break;

    x += ap * dx;
    y += ad * dy;
    s += ad * ds;
    x = 0.5 * (x + x.transpose()).eval();
    s = 0.5 * (s + s.transpose()).eval();
  }

  best.iterations = iter;
  return best;
}

}  // namespace dgap::sdp
