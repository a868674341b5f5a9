#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dgap::sdp {

// One symmetric real constraint matrix, stored as a full triplet list (both
// triangles present). Kept sparse because the diamond-norm constraints touch
// only a handful of entries each.
struct SymTriplets {
  struct Entry {
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;

  void add(int r, int c, double v) { entries.push_back({r, c, v}); }
  Eigen::MatrixXd dense(int n) const;
};

// Standard-form SDP over real symmetric matrices:
//   minimize <C, X>  subject to  <A_i, X> = b_i,  X >= 0,
// with dual  maximize b'y  subject to  C - sum_i y_i A_i = S >= 0.
struct Problem {
  int n = 0;
  Eigen::MatrixXd objective;  // C
  std::vector<SymTriplets> constraints;
  Eigen::VectorXd rhs;  // b
};

struct Options {
  int max_iterations = 200;
  double gap_tol = 1e-9;    // <X,S> / (1 + |pobj| + |dobj|)
  double feas_tol = 1e-9;   // relative primal/dual residual norms
  double step_fraction = 0.98;
};

struct Solution {
  Eigen::MatrixXd X;  // primal iterate
  Eigen::MatrixXd S;  // dual slack
  Eigen::VectorXd y;  // dual multipliers
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double rel_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Primal-dual path-following interior-point method (HKM direction with a
// Mehrotra predictor-corrector step).
Solution solve(const Problem& prob, const Options& opts = {});

}  // namespace dgap::sdp
