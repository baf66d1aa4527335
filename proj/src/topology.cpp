#include "ftc/topology.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ftc {

namespace {

int ceil_log2(int n) {
  int t = 0;
  int v = 1;
  while (v < n) {
    v *= 2;
    ++t;
  }
  return t;
}

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

void require_n(int n) {
  if (n < 2) throw std::invalid_argument("graph size must be at least 2");
  if (n > kMaxMatrixDim) throw std::invalid_argument("graph size exceeds configured max");
}

int count_max_degree(const DenseMatrix& w) {
  int deg = 0;
  for (int i = 0; i < w.rows; ++i) {
    int d = 0;
    const double* row = w.row(i);
    for (int j = 0; j < w.cols; ++j)
      if (j != i && row[j] != 0.0) ++d;
    deg = std::max(deg, d);
  }
  return deg;
}

MixingMatrix finish(DenseMatrix w, int l) {
  MixingMatrix m;
  m.max_degree = count_max_degree(w);
  m.weights = std::move(w);
  m.index_l = l;
  return m;
}

// Smallest p >= 2 with p^k = n; returns {p, k}.
std::pair<int, int> smallest_power_base(int n) {
  for (int p = 2; p <= n; ++p) {
    int q = n;
    int k = 0;
    while (q % p == 0) {
      q /= p;
      ++k;
    }
    if (q == 1) return {p, k};
  }
  throw std::invalid_argument("no power base found");  // unreachable for n >= 2
}

}  // namespace

std::string_view family_name(GraphFamily f) {
  switch (f) {
    case GraphFamily::OnePeerExponential: return "one-peer-exp";
    case GraphFamily::OnePeerHyperCube: return "one-peer-hypercube";
    case GraphFamily::PPeerHyperCuboid: return "p-peer-hypercuboid";
    case GraphFamily::DeBruijn: return "de-bruijn";
    case GraphFamily::StaticExponential: return "static-exp";
    case GraphFamily::StaticHyperCuboid: return "static-hypercuboid";
    case GraphFamily::FullyConnected: return "fully-connected";
  }
  return "?";
}

std::optional<GraphFamily> family_from_name(std::string_view name) {
  for (GraphFamily f :
       {GraphFamily::OnePeerExponential, GraphFamily::OnePeerHyperCube,
        GraphFamily::PPeerHyperCuboid, GraphFamily::DeBruijn, GraphFamily::StaticExponential,
        GraphFamily::StaticHyperCuboid, GraphFamily::FullyConnected}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

bool family_is_dynamic(GraphFamily f) {
  switch (f) {
    case GraphFamily::OnePeerExponential:
    case GraphFamily::OnePeerHyperCube:
    case GraphFamily::PPeerHyperCuboid:
    case GraphFamily::DeBruijn:
      return true;
    default:
      return false;
  }
}

std::vector<int> prime_factorize(long long n) {
  if (n < 2) throw std::invalid_argument("prime_factorize: n must be >= 2");
  std::vector<int> factors;
  long long m = n;
  for (long long p = 2; p * p <= m; ++p) {
    while (m % p == 0) {
      factors.push_back(static_cast<int>(p));
      m /= p;
    }
  }
  if (m > 1) factors.push_back(static_cast<int>(m));
  return factors;  // ascending by construction
}

MultiBaseCode multibase_encode(long long i, const std::vector<int>& bases) {
  if (bases.empty()) throw std::invalid_argument("multibase_encode: empty base list");
  long long total = 1;
  for (int b : bases) {
    if (b < 2) throw std::invalid_argument("multibase_encode: bases must be >= 2");
    total *= b;
  }
  if (i < 0 || i >= total) throw std::invalid_argument("multibase_encode: index out of range");
  MultiBaseCode code;
  code.bases = bases;
  const int tau = static_cast<int>(bases.size());
  code.digits.assign(tau, 0);
  long long rem = i;
  for (int r = 0; r < tau; ++r) {  // digits[0] least significant, base p_0 = bases.back()
    const int b = bases[tau - 1 - r];
    code.digits[r] = static_cast<int>(rem % b);
    rem /= b;
  }
  return code;
}

long long multibase_decode(const MultiBaseCode& code) {
  const int tau = static_cast<int>(code.bases.size());
  if (static_cast<int>(code.digits.size()) != tau)
    throw std::invalid_argument("multibase_decode: digit/base length mismatch");
  long long v = 0;
  for (int k = 0; k < tau; ++k) {  // most significant first
    const int b = code.bases[k];
    const int digit = code.digits[tau - 1 - k];
    if (digit < 0 || digit >= b) throw std::invalid_argument("multibase_decode: digit out of range");
    v = v * b + digit;
  }
  return v;
}

MixingMatrix one_peer_exponential(int n, int l) {
  require_n(n);
  if (l < 0) throw std::invalid_argument("one_peer_exponential: l must be >= 0");
  const int tau = ceil_log2(n);
  const int offset = 1 << (l % tau);
  DenseMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, i) += 0.5;
    w(i, (i + offset) % n) += 0.5;  // mod(j - i, n) = 2^mod(l, tau)
  }
  return finish(std::move(w), l);
}

MixingMatrix one_peer_hypercube(int n, int l) {
  require_n(n);
  if (!is_power_of_two(n)) throw std::invalid_argument("one_peer_hypercube: n must be a power of 2");
  if (l < 0) throw std::invalid_argument("one_peer_hypercube: l must be >= 0");
  const int tau = ceil_log2(n);
  const int bit = 1 << (l % tau);
  DenseMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, i) = 0.5;
    w(i, i ^ bit) = 0.5;
  }
  return finish(std::move(w), l);
}

MixingMatrix p_peer_hypercuboid(int n, int l) {
  require_n(n);
  if (l < 0) throw std::invalid_argument("p_peer_hypercuboid: l must be >= 0");
  const std::vector<int> bases = prime_factorize(n);  // bases[k] = p_{tau-1-k}
  const int tau = static_cast<int>(bases.size());
  const int r = l % tau;  // slot with the averaging factor
  DenseMatrix w;
  bool first = true;
  for (int k = 0; k < tau; ++k) {
    const int slot = tau - 1 - k;
    const int b = bases[k];
    DenseMatrix factor = (slot == r) ? DenseMatrix::averaging(b) : DenseMatrix::identity(b);
    w = first ? std::move(factor) : kron(w, factor);
    first = false;
  }
  return finish(std::move(w), l);
}

MixingMatrix de_bruijn(int p, int tau) {
  if (p < 2 || tau < 1) throw std::invalid_argument("de_bruijn: need p >= 2, tau >= 1");
  long long n64 = 1;
  for (int i = 0; i < tau; ++i) {
    n64 *= p;
    if (n64 > kMaxMatrixDim) throw std::invalid_argument("de_bruijn: p^tau exceeds max size");
  }
  const int n = static_cast<int>(n64);
  const int head = n / p;  // p^{tau-1}
  DenseMatrix w(n, n);
  const double v = 1.0 / p;
  for (int i = 0; i < n; ++i) {
    // out-edges: low tau-1 digits of i become the high tau-1 digits of j
    const int base = (i % head) * p;
    for (int d = 0; d < p; ++d) w(i, base + d) = v;
  }
  MixingMatrix m = finish(std::move(w), 0);
  return m;
}

MixingMatrix static_variant(GraphFamily family, int n, int de_bruijn_base) {
  require_n(n);
  switch (family) {
    case GraphFamily::DeBruijn: {
      auto [p, t] = de_bruijn_base > 0 ? std::pair<int, int>{de_bruijn_base, 0}
                                       : smallest_power_base(n);
      if (de_bruijn_base > 0) {
        int q = n;
        t = 0;
        while (q % p == 0) {
          q /= p;
          ++t;
        }
        if (q != 1) throw std::invalid_argument("de Bruijn: n is not a power of the given base");
      }
      return de_bruijn(p, t);
    }
    case GraphFamily::FullyConnected:
      return finish(DenseMatrix::averaging(n), 0);
    case GraphFamily::OnePeerExponential:
    case GraphFamily::OnePeerHyperCube:
    case GraphFamily::PPeerHyperCuboid:
    case GraphFamily::StaticExponential:
    case GraphFamily::StaticHyperCuboid:
      break;
  }
  const GraphFamily dynamic =
      (family == GraphFamily::StaticExponential) ? GraphFamily::OnePeerExponential
      : (family == GraphFamily::StaticHyperCuboid) ? GraphFamily::PPeerHyperCuboid
                                                   : family;
  if (dynamic == GraphFamily::OnePeerHyperCube && !is_power_of_two(n))
    throw std::invalid_argument("static hypercube: n must be a power of 2");

  // Union of the period's off-diagonal supports.
  const int tau = (dynamic == GraphFamily::OnePeerExponential ||
                   dynamic == GraphFamily::OnePeerHyperCube)
                      ? ceil_log2(n)
                      : static_cast<int>(prime_factorize(n).size());
  DenseMatrix support(n, n);
  for (int l = 0; l < tau; ++l) {
    const MixingMatrix wl = (dynamic == GraphFamily::OnePeerExponential)
                                ? one_peer_exponential(n, l)
                                : (dynamic == GraphFamily::OnePeerHyperCube)
                                      ? one_peer_hypercube(n, l)
                                      : p_peer_hypercuboid(n, l);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && wl.weights(i, j) != 0.0) support(i, j) = 1.0;
  }
  int degree = -1;
  for (int i = 0; i < n; ++i) {
    int d = 0;
    for (int j = 0; j < n; ++j)
      if (support(i, j) != 0.0) ++d;
    if (degree < 0) degree = d;
    if (d != degree) throw std::logic_error("static_variant: union graph is not regular");
  }
  const double wt = 1.0 / (degree + 1);
  DenseMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, i) = wt;
    for (int j = 0; j < n; ++j)
      if (support(i, j) != 0.0) w(i, j) = wt;
  }
  return finish(std::move(w), 0);
}

TopologySequence build_sequence(GraphFamily family, int n, int de_bruijn_base) {
  require_n(n);
  TopologySequence seq;
  seq.n = n;
  seq.family = family;
  switch (family) {
    case GraphFamily::OnePeerExponential: {
      seq.tau = ceil_log2(n);
      for (int l = 0; l < seq.tau; ++l) seq.matrices.push_back(one_peer_exponential(n, l));
      seq.ftc_claimed = is_power_of_two(n);
      break;
    }
    case GraphFamily::OnePeerHyperCube: {
      seq.tau = ceil_log2(n);
      for (int l = 0; l < seq.tau; ++l) seq.matrices.push_back(one_peer_hypercube(n, l));
      seq.ftc_claimed = true;
      break;
    }
    case GraphFamily::PPeerHyperCuboid: {
      seq.tau = static_cast<int>(prime_factorize(n).size());
      for (int l = 0; l < seq.tau; ++l) seq.matrices.push_back(p_peer_hypercuboid(n, l));
      seq.ftc_claimed = true;
      break;
    }
    case GraphFamily::DeBruijn: {
      auto [p, t] = smallest_power_base(n);
      if (de_bruijn_base > 0) {
        p = de_bruijn_base;
        int q = n;
        t = 0;
        while (q % p == 0) {
          q /= p;
          ++t;
        }
        if (q != 1) throw std::invalid_argument("de Bruijn: n is not a power of the given base");
      }
      seq.tau = t;
      const MixingMatrix w = de_bruijn(p, t);
      for (int l = 0; l < t; ++l) {
        seq.matrices.push_back(w);
        seq.matrices.back().index_l = l;
      }
      seq.ftc_claimed = true;
      break;
    }
    case GraphFamily::StaticExponential:
    case GraphFamily::StaticHyperCuboid: {
      seq.tau = 1;
      seq.matrices.push_back(static_variant(family, n));
      seq.ftc_claimed = false;
      break;
    }
    case GraphFamily::FullyConnected: {
      seq.tau = 1;
      seq.matrices.push_back(finish(DenseMatrix::averaging(n), 0));
      seq.ftc_claimed = true;  // J_n averages exactly in a single round
      break;
    }
  }
  for (const auto& m : seq.matrices) {
    if (doubly_stochastic_residual(m.weights).worst() > 1e-12)
      throw std::logic_error("build_sequence: generated matrix is not doubly stochastic");
  }
  return seq;
}

FtcReport verify_ftc(const TopologySequence& seq, double tol) {
  if (seq.matrices.empty()) throw std::invalid_argument("verify_ftc: empty sequence");
  FtcReport rep;
  std::vector<DenseMatrix> ws;
  ws.reserve(seq.matrices.size());
  bool stochastic_ok = true;
  for (const auto& m : seq.matrices) {
    rep.stochastic.push_back(doubly_stochastic_residual(m.weights));
    stochastic_ok = stochastic_ok && rep.stochastic.back().worst() <= tol;
    ws.push_back(m.weights);
  }
  rep.product_residual = consensus_product_residual(ws);
  rep.residual_form = residual_form_norm(ws);
  rep.pass = stochastic_ok && rep.product_residual <= tol;
  return rep;
}

PermutationEquivalence debruijn_cuboid_permutation(int p, int tau, int l) {
  if (l < 0) throw std::invalid_argument("debruijn_cuboid_permutation: l must be >= 0");
  const PermutationMap ps_t = perfect_shuffle(p, tau).inverse();  // P_s^T
  PermutationEquivalence eq;
  eq.left = ps_t.pow(l + 1);
  eq.right = ps_t.pow(l);
  eq.cuboid_index = l % tau;

  long long n = 1;
  for (int i = 0; i < tau; ++i) n *= p;
  const DenseMatrix whc = p_peer_hypercuboid(static_cast<int>(n), eq.cuboid_index).weights;
  const DenseMatrix wdb = de_bruijn(p, tau).weights;
  const DenseMatrix lhs =
      matmul(matmul(eq.left.to_matrix(), wdb), eq.right.to_matrix().transpose());
  eq.max_error = max_abs_diff(whc, lhs);
  return eq;
}

}  // namespace ftc
