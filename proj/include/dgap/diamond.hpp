#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dgap/channels.hpp"

namespace dgap {

struct DiamondResult {
  double value = 0.0;
  double lower_certificate = 0.0;
  double upper_certificate = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string method;  // "sdp" or "ascent"
};

// Raised when the interior-point solve cannot certify the requested gap;
// carries the best certificates found.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& msg, DiamondResult partial)
      : std::runtime_error(msg), partial_(std::move(partial)) {}
  const DiamondResult& partial() const { return partial_; }

 private:
  DiamondResult partial_;
};

// Diamond norm of a general linear map via the completely bounded trace-norm
// semidefinite program over the Choi matrix: maximize Re<J(S), X> subject to
// [[1 (x) rho0, X], [X^dag, 1 (x) rho1]] >= 0 with rho0, rho1 densities.
// `value` is the midpoint of an eigenvalue-verified primal (lower) and dual
// (upper) certificate pair; the certified gap is at most 1e-6 for d <= 4.
DiamondResult diamond_norm_sdp(const SuperOperator& s);

struct AscentState {
  ComplexVector psi;  // best unit vector found, on H (x) K with dK = d
  double value = 0.0;
  int restarts_used = 0;
  uint64_t seed = 0;
};

inline constexpr int kDefaultAscentRestarts = 50;

// Certified lower bound on the diamond norm of a Hermiticity-preserving map:
// projected subgradient ascent of psi -> ||(S (x) id)(psi psi^dag)||_1 over
// the unit sphere, multi-start, deterministic in the seed.
AscentState diamond_norm_ascent(const SuperOperator& s,
                                int restarts = kDefaultAscentRestarts,
                                uint64_t seed = 0);

struct PointwiseLR {
  double L = 0.0;
  double R = 0.0;
};

// L(rho) = ||(Theta o Phi (x) id)(rho)||_1 and R(rho) = ||(Phi (x) id)(rho)||_1
// for Phi = id - T, at a density rho on H (x) K with dH = dK = d.
PointwiseLR pointwise_LR(const Channel& t, const BipartiteOperator& rho);

}  // namespace dgap
