#include "dgap/channels.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dgap/random.hpp"
#include "dgap/serialization.hpp"

namespace dgap {

Channel::Channel(int dim, std::vector<ComplexMatrix> ops, std::string desc)
    : d(dim), kraus(std::move(ops)), description(std::move(desc)) {
  if (d < 1) throw std::invalid_argument("Channel: dimension must be positive");
  if (kraus.empty()) throw std::invalid_argument("Channel: Kraus list must be nonempty");
  for (const auto& e : kraus) {
    if (e.rows() != d || e.cols() != d) {
      throw std::invalid_argument("Channel: every Kraus operator must be d x d");
    }
    if (!all_finite(e)) throw std::invalid_argument("Channel: non-finite Kraus entries");
  }
}

SuperOperator make_superop(int d, ComplexMatrix transfer) {
  if (d < 1) throw std::invalid_argument("make_superop: dimension must be positive");
  const int n = d * d;
  if (transfer.rows() != n || transfer.cols() != n) {
    throw std::invalid_argument("make_superop: transfer must be d^2 x d^2");
  }
  if (!all_finite(transfer)) throw std::invalid_argument("make_superop: non-finite entries");

  SuperOperator s;
  s.d = d;
  s.transfer = std::move(transfer);

  // S(E_ij) is column (i,j) of the transfer, reshaped. Hermiticity
  // preservation means S(E_ji) == S(E_ij)^dag for all matrix units.
  double herm_dev = 0.0;
  double trace_dev = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const ComplexMatrix out_ij = unvec(s.transfer.col(composite_index(i, j, d)), d);
      const ComplexMatrix out_ji = unvec(s.transfer.col(composite_index(j, i, d)), d);
      herm_dev = std::max(herm_dev, (out_ji - out_ij.adjoint()).cwiseAbs().maxCoeff());
      trace_dev = std::max(trace_dev, std::abs(out_ij.trace()));
    }
  }
  s.hermiticity_preserving = herm_dev <= 1e-10;
  s.trace_annihilating = trace_dev <= 1e-12;
  return s;
}

SuperOperator identity_superop(int d) {
  return make_superop(d, ComplexMatrix::Identity(d * d, d * d));
}

SuperOperator transpose_superop(int d) { return make_superop(d, swap_operator(d).matrix); }

SuperOperator scale_superop(const SuperOperator& s, Complex factor) {
  return make_superop(s.d, ComplexMatrix(factor * s.transfer));
}

SuperOperator channel_to_superop(const Channel& t) {
  const int n = t.d * t.d;
  ComplexMatrix transfer = ComplexMatrix::Zero(n, n);
  for (const auto& e : t.kraus) {
    transfer += kron(e, e.conjugate());
  }
  return make_superop(t.d, std::move(transfer));
}

ChoiMatrix superop_choi(const SuperOperator& s) {
  const int d = s.d;
  const int n = d * d;
  // J[(a,i),(c,j)] = transfer[(a,c),(i,j)]: swap of the middle indices.
  ComplexMatrix j(n, n);
  for (int a = 0; a < d; ++a) {
    for (int i = 0; i < d; ++i) {
      for (int c = 0; c < d; ++c) {
        for (int jj = 0; jj < d; ++jj) {
          j(composite_index(a, i, d), composite_index(c, jj, d)) =
              s.transfer(composite_index(a, c, d), composite_index(i, jj, d));
        }
      }
    }
  }
  return ChoiMatrix{d, BipartiteOperator(d, d, std::move(j))};
}

SuperOperator choi_superop(const ChoiMatrix& j) {
  const int d = j.d;
  const int n = d * d;
  ComplexMatrix transfer(n, n);
  for (int a = 0; a < d; ++a) {
    for (int c = 0; c < d; ++c) {
      for (int i = 0; i < d; ++i) {
        for (int jj = 0; jj < d; ++jj) {
          transfer(composite_index(a, c, d), composite_index(i, jj, d)) =
              j.matrix.matrix(composite_index(a, i, d), composite_index(c, jj, d));
        }
      }
    }
  }
  return make_superop(d, std::move(transfer));
}

ComplexMatrix apply(const SuperOperator& s, const ComplexMatrix& x) {
  if (x.rows() != s.d || x.cols() != s.d) {
    throw std::invalid_argument("apply: operand must be d x d");
  }
  return unvec(s.transfer * vec(x), s.d);
}

ComplexMatrix regroup_bipartite(const BipartiteOperator& x) {
  const int dh = x.dim_h;
  const int dk = x.dim_k;
  ComplexMatrix grouped(dh * dh, dk * dk);
  for (int i = 0; i < dh; ++i) {
    for (int k = 0; k < dh; ++k) {
      for (int j = 0; j < dk; ++j) {
        for (int l = 0; l < dk; ++l) {
          grouped(composite_index(i, k, dh), composite_index(j, l, dk)) =
              x.matrix(composite_index(i, j, dk), composite_index(k, l, dk));
        }
      }
    }
  }
  return grouped;
}

BipartiteOperator ungroup_bipartite(const ComplexMatrix& grouped, int dim_h, int dim_k) {
  if (grouped.rows() != dim_h * dim_h || grouped.cols() != dim_k * dim_k) {
    throw std::invalid_argument("ungroup_bipartite: shape mismatch");
  }
  ComplexMatrix out(dim_h * dim_k, dim_h * dim_k);
  for (int i = 0; i < dim_h; ++i) {
    for (int k = 0; k < dim_h; ++k) {
      for (int j = 0; j < dim_k; ++j) {
        for (int l = 0; l < dim_k; ++l) {
          out(composite_index(i, j, dim_k), composite_index(k, l, dim_k)) =
              grouped(composite_index(i, k, dim_h), composite_index(j, l, dim_k));
        }
      }
    }
  }
  return BipartiteOperator(dim_h, dim_k, std::move(out));
}

BipartiteOperator apply_extended(const SuperOperator& s, const BipartiteOperator& x) {
  if (x.dim_h != s.d) {
    throw std::invalid_argument("apply_extended: H factor dimension must match the map");
  }
  const ComplexMatrix grouped = regroup_bipartite(x);
  return ungroup_bipartite(s.transfer * grouped, x.dim_h, x.dim_k);
}

CptpReport is_cptp(const Channel& t, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("is_cptp: tol must be positive");
  ComplexMatrix sum = ComplexMatrix::Zero(t.d, t.d);
  for (const auto& e : t.kraus) sum += e.adjoint() * e;
  const double err = spectral_norm(sum - ComplexMatrix::Identity(t.d, t.d));
  return CptpReport{err, err <= tol};
}

Channel random_channel(int d, int env, uint64_t seed) {
  if (d < 1 || env < 1) {
    throw std::invalid_argument("random_channel: d and env must be positive");
  }
  Rng rng(seed);
  const ComplexMatrix v = haar_isometry(d * env, d, rng);
  std::vector<ComplexMatrix> kraus(env, ComplexMatrix(d, d));
  for (int e = 0; e < env; ++e) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        kraus[e](i, j) = v(composite_index(i, e, env), j);
      }
    }
  }
  std::ostringstream desc;
  desc << "haar(d=" << d << ",env=" << env << ",seed=" << seed << ")";
  return Channel(d, std::move(kraus), desc.str());
}

Channel identity_channel(int d) {
  return Channel(d, {ComplexMatrix::Identity(d, d)}, "identity");
}

Channel depolarizing_channel(int d, double p) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("depolarizing_channel: p must lie in [0,1]");
  }
  std::vector<ComplexMatrix> kraus;
  if (p < 1.0) {
    kraus.push_back(std::sqrt(1.0 - p) * ComplexMatrix::Identity(d, d));
  }
  if (p > 0.0) {
    const double w = std::sqrt(p / d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        ComplexMatrix e = ComplexMatrix::Zero(d, d);
        e(i, j) = w;
        kraus.push_back(std::move(e));
      }
    }
  }
  std::ostringstream desc;
  desc << "depolarizing(p=" << p << ")";
  return Channel(d, std::move(kraus), desc.str());
}

Channel dephasing_channel(int d, double p) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("dephasing_channel: p must lie in [0,1]");
  }
  std::vector<ComplexMatrix> kraus;
  if (p < 1.0) {
    kraus.push_back(std::sqrt(1.0 - p) * ComplexMatrix::Identity(d, d));
  }
  if (p > 0.0) {
    for (int i = 0; i < d; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, i) = std::sqrt(p);
      kraus.push_back(std::move(e));
    }
  }
  std::ostringstream desc;
  desc << "dephasing(p=" << p << ")";
  return Channel(d, std::move(kraus), desc.str());
}

Channel unitary_channel(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() < 1) {
    throw std::invalid_argument("unitary_channel: U must be square");
  }
  const int d = static_cast<int>(u.rows());
  if (spectral_norm(u.adjoint() * u - ComplexMatrix::Identity(d, d)) > 1e-10) {
    throw std::invalid_argument("unitary_channel: U is not unitary within 1e-10");
  }
  return Channel(d, {u}, "unitary");
}

Channel replacer_channel(const ComplexMatrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1) {
    throw std::invalid_argument("replacer_channel: sigma must be square");
  }
  const int d = static_cast<int>(sigma.rows());
  if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > 1e-10 ||
      std::abs(sigma.trace().real() - 1.0) > 1e-10 || std::abs(sigma.trace().imag()) > 1e-10) {
    throw std::invalid_argument("replacer_channel: sigma must be a density matrix");
  }
  const HermEig eig = herm_eig(sigma);
  if (eig.eigenvalues.minCoeff() < -1e-10) {
    throw std::invalid_argument("replacer_channel: sigma must be positive semidefinite");
  }
  // T(X) = tr(X) sigma via Kraus operators sqrt(s_k) |v_k><j|.
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < d; ++k) {
    const double s = std::max(eig.eigenvalues(k), 0.0);
    if (s <= 1e-14 && !kraus.empty()) continue;
    const double w = std::sqrt(s);
    for (int j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e.col(j) = w * eig.eigenvectors.col(k);
      kraus.push_back(std::move(e));
    }
  }
  return Channel(d, std::move(kraus), "replacer");
}

namespace {

ComplexMatrix clock_unitary(int d) {
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    const double phase = 2.0 * M_PI * k / d;
    u(k, k) = Complex(std::cos(phase), std::sin(phase));
  }
  return u;
}

ComplexMatrix shift_unitary(int d) {
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) u((k + 1) % d, k) = 1.0;
  return u;
}

ComplexMatrix fourier_unitary(int d) {
  ComplexMatrix u(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double phase = 2.0 * M_PI * i * j / d;
      u(i, j) = norm * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return u;
}

struct SpecArgs {
  std::string name;
  std::map<std::string, std::string> kv;
};

SpecArgs parse_spec_string(const std::string& spec) {
  SpecArgs out;
  const auto colon = spec.find(':');
  out.name = spec.substr(0, colon);
  if (colon == std::string::npos) return out;
  std::string rest = spec.substr(colon + 1);
  std::istringstream stream(rest);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("channel spec: malformed key=value pair '" + item + "'");
    }
    out.kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double require_double(const SpecArgs& args, const std::string& key) {
  const auto it = args.kv.find(key);
  if (it == args.kv.end()) {
    throw std::invalid_argument("channel spec '" + args.name + "': missing key '" + key + "'");
  }
  size_t pos = 0;
  const double v = std::stod(it->second, &pos);
  if (pos != it->second.size()) {
    throw std::invalid_argument("channel spec: bad numeric value '" + it->second + "'");
  }
  return v;
}

uint64_t optional_seed(const SpecArgs& args, uint64_t fallback) {
  const auto it = args.kv.find("seed");
  if (it == args.kv.end()) return fallback;
  return std::stoull(it->second);
}

void reject_unknown_keys(const SpecArgs& args, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : args.kv) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) ok = true;
    }
    if (!ok) {
      throw std::invalid_argument("channel spec '" + args.name + "': unknown key '" + key + "'");
    }
  }
}

}  // namespace

Channel parse_channel_spec(const std::string& spec, int d) {
  if (spec.empty()) throw std::invalid_argument("channel spec: empty string");
  if (spec[0] == '@') {
    Channel c = load_channel_json(spec.substr(1));
    if (c.d != d) {
      throw std::invalid_argument("channel spec: file channel has d=" + std::to_string(c.d) +
                                  ", expected d=" + std::to_string(d));
    }
    return c;
  }
  const SpecArgs args = parse_spec_string(spec);
  if (args.name == "identity") {
    reject_unknown_keys(args, {});
    return identity_channel(d);
  }
  if (args.name == "depolarizing") {
    reject_unknown_keys(args, {"p"});
    return depolarizing_channel(d, require_double(args, "p"));
  }
  if (args.name == "dephasing") {
    reject_unknown_keys(args, {"p"});
    return dephasing_channel(d, require_double(args, "p"));
  }
  if (args.name == "replacer") {
    reject_unknown_keys(args, {});
    return replacer_channel(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
  }
  if (args.name == "unitary") {
    reject_unknown_keys(args, {"kind", "seed"});
    std::string kind = "clock";
    if (const auto it = args.kv.find("kind"); it != args.kv.end()) kind = it->second;
    if (kind == "clock") return unitary_channel(clock_unitary(d));
    if (kind == "shift") return unitary_channel(shift_unitary(d));
    if (kind == "fourier") return unitary_channel(fourier_unitary(d));
    if (kind == "haar") {
      Rng rng(optional_seed(args, 0));
      return unitary_channel(haar_unitary(d, rng));
    }
    throw std::invalid_argument("channel spec: unknown unitary kind '" + kind + "'");
  }
  if (args.name == "haar") {
    reject_unknown_keys(args, {"env", "seed"});
    int env = d * d;
    if (const auto it = args.kv.find("env"); it != args.kv.end()) {
      if (it->second == "d") {
        env = d;
      } else if (it->second == "d2") {
        env = d * d;
      } else {
        env = std::stoi(it->second);
      }
    }
    return random_channel(d, env, optional_seed(args, 0));
  }
  throw std::invalid_argument("channel spec: unknown family '" + args.name + "'");
}

SuperOperator id_minus(const Channel& t) {
  const SuperOperator st = channel_to_superop(t);
  const int n = t.d * t.d;
  return make_superop(t.d, ComplexMatrix(ComplexMatrix::Identity(n, n) - st.transfer));
}

SuperOperator compose_theta(const SuperOperator& s) {
  const ComplexMatrix f = swap_operator(s.d).matrix;
  return make_superop(s.d, ComplexMatrix(f * s.transfer));
}

}  // namespace dgap
