#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ftc/dense.hpp"
#include "ftc/matkit.hpp"

namespace ftc {

enum class GraphFamily {
  OnePeerExponential,
  OnePeerHyperCube,
  PPeerHyperCuboid,
  DeBruijn,
  StaticExponential,
  StaticHyperCuboid,
  FullyConnected,
};

// CLI-facing names: one-peer-exp, one-peer-hypercube, p-peer-hypercuboid,
// de-bruijn, static-exp, static-hypercuboid, fully-connected.
std::string_view family_name(GraphFamily f);
std::optional<GraphFamily> family_from_name(std::string_view name);
bool family_is_dynamic(GraphFamily f);

struct MixingMatrix {
  DenseMatrix weights;
  int index_l = 0;
  int max_degree = 0;  // max over nodes of non-self neighbors
};

struct TopologySequence {
  int n = 0;
  int tau = 0;
  std::vector<MixingMatrix> matrices;
  GraphFamily family = GraphFamily::FullyConnected;
  bool ftc_claimed = false;  // metadata only; verify_ftc recomputes
};

// Mixed-radix representation. bases is ordered (p_{tau-1}, ..., p_0) most
// significant first; digits[r] is the digit for base p_r, so digits[0] is
// the least significant digit.
struct MultiBaseCode {
  std::vector<int> bases;
  std::vector<int> digits;
};

// Ascending prime factors with multiplicity; tau = factor count. With the
// ascending order, bases[k] = p_{tau-1-k}: the largest prime lands at p_0.
std::vector<int> prime_factorize(long long n);

MultiBaseCode multibase_encode(long long i, const std::vector<int>& bases);
long long multibase_decode(const MultiBaseCode& code);

MixingMatrix one_peer_exponential(int n, int l);
MixingMatrix one_peer_hypercube(int n, int l);
MixingMatrix p_peer_hypercuboid(int n, int l);
MixingMatrix de_bruijn(int p, int tau);

// Static counterpart over the union of the period's edge sets plus
// self-loops, uniform weight 1/(degree+1). The union graph of each family
// is regular, so this is doubly stochastic; for the exponential family it
// is the standard static exponential graph with spectral gap 2/(1+tau).
// For DeBruijn the period is a single repeated matrix and the static
// variant is that matrix itself.
MixingMatrix static_variant(GraphFamily family, int n, int de_bruijn_base = 0);

// de_bruijn_base: base p for DeBruijn (0 = smallest p with p^k = n).
TopologySequence build_sequence(GraphFamily family, int n, int de_bruijn_base = 0);

struct FtcReport {
  std::vector<StochasticResidual> stochastic;  // per matrix
  double product_residual = 0.0;
  double residual_form = 0.0;
  bool pass = false;
};
FtcReport verify_ftc(const TopologySequence& seq, double tol = 1e-12);

// Permutation equivalence between de Bruijn graphs and hyper-cuboids:
// (P_s^T)^(l+1) W_db P_s^l equals the hyper-cuboid matrix W_hc^(l).
// cuboid_index reports the matched index explicitly; max_error is the
// entrywise deviation and is exactly zero.
struct PermutationEquivalence {
  PermutationMap left;   // P = (P_s^T)^(l+1)
  PermutationMap right;  // Q = (P_s^T)^l  (identity applied as Q^T)
  int cuboid_index = 0;
  double max_error = 0.0;
};
PermutationEquivalence debruijn_cuboid_permutation(int p, int tau, int l);

}  // namespace ftc
