#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgap/linalg.hpp"

namespace dgap {

// A channel in Kraus form: T(X) = sum_k E_k X E_k^dag. The type checks only
// shape invariants so that deliberately invalid Kraus lists can be built and
// fed to is_cptp; trace preservation is checked by is_cptp.
struct Channel {
  int d = 0;
  std::vector<ComplexMatrix> kraus;
  std::string description;

  Channel(int dim, std::vector<ComplexMatrix> ops, std::string desc = "");
};

// A linear map on d x d operators stored as its d^2 x d^2 transfer matrix:
// vec(S(X)) = transfer * vec(X) in the H-major vec convention.
struct SuperOperator {
  int d = 0;
  ComplexMatrix transfer;
  bool hermiticity_preserving = false;
  bool trace_annihilating = false;
};

// Builds a SuperOperator and evaluates its flags on the matrix-unit basis
// (hermiticity preservation within 1e-10, trace annihilation within 1e-12).
SuperOperator make_superop(int d, ComplexMatrix transfer);

SuperOperator identity_superop(int d);
// Transfer of the transposition map: the swap operator.
SuperOperator transpose_superop(int d);
SuperOperator scale_superop(const SuperOperator& s, Complex factor);

struct ChoiMatrix {
  int d;
  BipartiteOperator matrix;  // on H_out (x) H_in, both of dimension d
};

// Transfer matrix of a Kraus channel: sum_k E_k (x) E_k^*.
SuperOperator channel_to_superop(const Channel& t);

// Unnormalized Choi matrix J(S) = sum_ij S(E_ij) (x) E_ij; J(id) has trace d.
ChoiMatrix superop_choi(const SuperOperator& s);
// Inverse reshuffle of superop_choi.
SuperOperator choi_superop(const ChoiMatrix& j);

ComplexMatrix apply(const SuperOperator& s, const ComplexMatrix& x);

// (S (x) id_K)(X) for X on H (x) K with dim H = s.d. Internally regroups the
// four indices so the transfer matrix acts on the H row/column pair; the
// regrouping is a pure index bijection exposed for testing below.
BipartiteOperator apply_extended(const SuperOperator& s, const BipartiteOperator& x);

// Reshapes an operator X on H (x) K into the dH^2 x dK^2 matrix M with
// M(i*dH + k, j*dK + l) = X[(i,j),(k,l)], and back.
ComplexMatrix regroup_bipartite(const BipartiteOperator& x);
BipartiteOperator ungroup_bipartite(const ComplexMatrix& grouped, int dim_h, int dim_k);

struct CptpReport {
  double tp_error = 0.0;
  bool pass = false;
};

// tp_error = || sum_k E_k^dag E_k - I || in spectral norm.
CptpReport is_cptp(const Channel& t, double tol = 1e-10);

// Haar-random channel: the env Kraus blocks of a Haar isometry
// V: C^d -> C^d (x) C^env. Deterministic in the seed.
Channel random_channel(int d, int env, uint64_t seed);

Channel identity_channel(int d);
// T(X) = (1-p) X + p tr(X) I/d.
Channel depolarizing_channel(int d, double p);
// Off-diagonal entries damped by (1-p); Kraus set {sqrt(1-p) I} + {sqrt(p) |i><i|}.
Channel dephasing_channel(int d, double p);
Channel unitary_channel(const ComplexMatrix& u);
// T(X) = tr(X) sigma.
Channel replacer_channel(const ComplexMatrix& sigma);

// Parses "name[:key=val[,key=val...]]" or "@file.json". Families: identity,
// depolarizing:p=, dephasing:p=, replacer (maximally mixed target),
// unitary:kind={clock|shift|fourier|haar}[,seed=], haar:env=[,seed=].
Channel parse_channel_spec(const std::string& spec, int d);

// Transfer of id - T; hermiticity-preserving and trace-annihilating.
SuperOperator id_minus(const Channel& t);
// Transfer of Theta o S, i.e. output-side transposition.
SuperOperator compose_theta(const SuperOperator& s);

}  // namespace dgap
