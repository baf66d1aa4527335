#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "ftc/matkit.hpp"
#include "ftc/rng.hpp"
#include "ftc/topology.hpp"
#include "oracles.hpp"

using namespace ftc;

namespace {

std::vector<DenseMatrix> weights_of(const TopologySequence& seq) {
  std::vector<DenseMatrix> ws;
  for (const auto& m : seq.matrices) ws.push_back(m.weights);
  return ws;
}

}  // namespace

TEST_CASE("prime factorization") {
  CHECK(prime_factorize(20) == std::vector<int>{2, 2, 5});
  CHECK(prime_factorize(7) == std::vector<int>{7});
  CHECK(prime_factorize(64) == std::vector<int>(6, 2));
  CHECK_THROWS_AS(prime_factorize(1), std::invalid_argument);

  // trial oracle: ascending, product matches, every factor prime
  for (int n = 2; n <= 200; ++n) {
    const auto f = prime_factorize(n);
    CHECK(std::is_sorted(f.begin(), f.end()));
    long long prod = 1;
    for (int p : f) {
      prod *= p;
      bool prime = p >= 2;
      for (int q = 2; q * q <= p; ++q)
        if (p % q == 0) prime = false;
      CHECK(prime);
    }
    CHECK(prod == n);
  }
}

TEST_CASE("multi-base representation") {
  const auto c5 = multibase_encode(5, {2, 3});
  CHECK(c5.digits == std::vector<int>{2, 1});  // {1}_2 x {2}_3, digit[0] least significant
  CHECK(multibase_decode(c5) == 5);

  const auto c11 = multibase_encode(11, {2, 2, 3});
  CHECK(c11.digits == std::vector<int>{2, 1, 1});  // {1}_2 x {1}_2 x {2}_3
  CHECK(multibase_decode(c11) == 11);

  const auto c0 = multibase_encode(0, {3, 5, 2});
  CHECK(std::all_of(c0.digits.begin(), c0.digits.end(), [](int d) { return d == 0; }));

  CHECK_THROWS_AS(multibase_encode(6, {2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(multibase_encode(-1, {2, 3}), std::invalid_argument);

  for (const auto& bases : {std::vector<int>{2, 3}, {5, 2, 2}, {3, 3, 3}}) {
    const int total = std::accumulate(bases.begin(), bases.end(), 1, std::multiplies<>());
    for (int i = 0; i < total; ++i) CHECK(multibase_decode(multibase_encode(i, bases)) == i);
  }
}

TEST_CASE("one-peer exponential structure") {
  CHECK(max_abs_diff(one_peer_exponential(2, 0).weights, DenseMatrix::averaging(2)) == 0.0);

  const auto w0 = one_peer_exponential(8, 0).weights;
  for (int i = 0; i < 8; ++i) {
    CHECK(w0(i, i) == 0.5);
    CHECK(w0(i, (i + 1) % 8) == 0.5);
  }

  // period tau = 3 at n=8
  CHECK(max_abs_diff(one_peer_exponential(8, 5).weights, one_peer_exponential(8, 2).weights) == 0.0);

  SUBCASE("circulant: every row is row 0 rotated") {
    for (int n : {5, 8, 12}) {
      for (int l = 0; l < 4; ++l) {
        const auto w = one_peer_exponential(n, l).weights;
        CHECK(oracles::is_circulant(w));
      }
    }
  }
  SUBCASE("asymmetric for n > 2") {
    const auto w = one_peer_exponential(8, 0).weights;
    CHECK(max_abs_diff(w, w.transpose()) > 0.0);
  }
  CHECK_THROWS_AS(one_peer_exponential(1, 0), std::invalid_argument);
}

TEST_CASE("one-peer hypercube structure") {
  CHECK(max_abs_diff(one_peer_hypercube(2, 0).weights, DenseMatrix::averaging(2)) == 0.0);

  const auto w = one_peer_hypercube(4, 0).weights;
  CHECK(w(0, 1) == 0.5);
  CHECK(w(1, 0) == 0.5);
  CHECK(w(2, 3) == 0.5);
  CHECK(w(3, 2) == 0.5);
  CHECK(w(0, 2) == 0.0);

  for (int l = 0; l < 3; ++l) {
    const auto wl = one_peer_hypercube(8, l).weights;
    CHECK(max_abs_diff(wl, wl.transpose()) == 0.0);  // exact symmetry
  }
  CHECK_THROWS_AS(one_peer_hypercube(12, 0), std::invalid_argument);
}

TEST_CASE("p-peer hyper-cuboid") {
  // paper's n=12 example: agents 8 and 11 connect with weight 1/2 at l=1
  CHECK(p_peer_hypercuboid(12, 1).weights(8, 11) == 0.5);

  CHECK(max_abs_diff(p_peer_hypercuboid(6, 0).weights,
                     kron(DenseMatrix::identity(2), DenseMatrix::averaging(3))) == 0.0);

  CHECK(max_abs_diff(p_peer_hypercuboid(4, 0).weights, p_peer_hypercuboid(4, 2).weights) == 0.0);

  SUBCASE("Kronecker route matches the element-wise rule up to n=72") {
    for (int n = 2; n <= 72; ++n) {
      const auto bases = prime_factorize(n);
      for (int l = 0; l < static_cast<int>(bases.size()); ++l) {
        const auto got = p_peer_hypercuboid(n, l).weights;
        CHECK(max_abs_diff(got, oracles::hypercuboid_elementwise(bases, l)) <= 1e-15);
        CHECK(max_abs_diff(got, got.transpose()) == 0.0);
      }
    }
  }
}

TEST_CASE("maximum degrees match the family bounds up to n=72") {
  for (int n = 2; n <= 72; ++n) {
    const auto factors = prime_factorize(n);
    const int tau_exp = [&] {
      int t = 0, v = 1;
      while (v < n) v *= 2, ++t;
      return std::max(t, 1);
    }();
    for (int l = 0; l < tau_exp; ++l) CHECK(one_peer_exponential(n, l).max_degree == 1);
    if ((n & (n - 1)) == 0)
      for (int l = 0; l < tau_exp; ++l) CHECK(one_peer_hypercube(n, l).max_degree == 1);
    // per matrix the degree is p_{mod(l,tau)} - 1; the period maximum is the
    // largest prime factor minus one
    const int tau = static_cast<int>(factors.size());
    int period_max = 0;
    for (int l = 0; l < tau; ++l) {
      const int slot_base = factors[static_cast<std::size_t>(tau - 1 - (l % tau))];
      const int deg = p_peer_hypercuboid(n, l).max_degree;
      CHECK(deg == slot_base - 1);
      period_max = std::max(period_max, deg);
    }
    CHECK(period_max == factors.back() - 1);
  }
  for (auto [p, tau] : {std::pair{2, 3}, {2, 6}, {3, 3}, {5, 2}, {2, 1}}) {
    CHECK(de_bruijn(p, tau).max_degree <= p);
  }
}

TEST_CASE("de Bruijn graphs") {
  const auto w = de_bruijn(2, 3).weights;
  CHECK(w(3, 6) == 0.5);  // node 3 = (011): out-edges to (110), (111)
  CHECK(w(3, 7) == 0.5);
  int count = 0;
  for (int j = 0; j < 8; ++j)
    if (w(3, j) != 0.0) ++count;
  CHECK(count == 2);

  CHECK(max_abs_diff(de_bruijn(2, 1).weights, DenseMatrix::averaging(2)) == 0.0);

  const auto w4 = de_bruijn(2, 2).weights;
  CHECK(max_abs_diff(matmul(w4, w4), DenseMatrix::averaging(4)) <= 1e-16);

  SUBCASE("Kronecker form (J_p (x) I ... I) P_s") {
    for (auto [p, tau] : {std::pair{2, 3}, {3, 2}, {2, 4}}) {
      int n = 1;
      for (int i = 0; i < tau; ++i) n *= p;
      DenseMatrix k = DenseMatrix::averaging(p);
      if (tau > 1) k = kron(k, DenseMatrix::identity(n / p));
      const auto want = matmul(k, perfect_shuffle(p, tau).to_matrix());
      CHECK(max_abs_diff(de_bruijn(p, tau).weights, want) <= 1e-15);
    }
  }
  SUBCASE("doubly stochastic") {
    for (auto [p, tau] : {std::pair{2, 4}, {3, 3}, {5, 1}})
      CHECK(doubly_stochastic_residual(de_bruijn(p, tau).weights).worst() == 0.0);
  }
}

TEST_CASE("static variants") {
  CHECK(max_abs_diff(static_variant(GraphFamily::OnePeerExponential, 2).weights,
                     DenseMatrix::averaging(2)) == 0.0);

  // uniform circulant over the union support {0, 1, 2, 4} at n=8
  const auto s8 = static_variant(GraphFamily::OnePeerExponential, 8).weights;
  for (int off : {0, 1, 2, 4}) CHECK(s8(0, off) == 0.25);
  CHECK(s8(0, 3) == 0.0);
  CHECK(oracles::is_circulant(s8));
  CHECK(std::abs(spectral_deviation(s8) - 0.5) <= 1e-9);

  SUBCASE("doubly stochastic, symmetric when the period is symmetric") {
    for (int n : {6, 8, 12, 18, 24}) {
      const auto s = static_variant(GraphFamily::PPeerHyperCuboid, n).weights;
      CHECK(doubly_stochastic_residual(s).worst() <= 1e-12);
      CHECK(max_abs_diff(s, s.transpose()) == 0.0);
    }
    for (int n : {6, 8, 16, 20}) {
      CHECK(doubly_stochastic_residual(static_variant(GraphFamily::OnePeerExponential, n).weights)
                .worst() <= 1e-12);
    }
  }
  SUBCASE("support is the union of the period supports plus self-loops") {
    const int n = 12;
    const auto s = static_variant(GraphFamily::PPeerHyperCuboid, n).weights;
    DenseMatrix uni(n, n);
    for (int l = 0; l < 3; ++l) {
      const auto wl = p_peer_hypercuboid(n, l).weights;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (wl(i, j) != 0.0) uni(i, j) = 1.0;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK((s(i, j) != 0.0) == (uni(i, j) != 0.0));
  }
}

TEST_CASE("build_sequence metadata") {
  const auto cuboid12 = build_sequence(GraphFamily::PPeerHyperCuboid, 12);
  CHECK(cuboid12.tau == 3);
  CHECK(cuboid12.ftc_claimed);

  const auto exp6 = build_sequence(GraphFamily::OnePeerExponential, 6);
  CHECK(exp6.tau == 3);
  CHECK_FALSE(exp6.ftc_claimed);

  const auto db8 = build_sequence(GraphFamily::DeBruijn, 8);
  CHECK(db8.tau == 3);
  CHECK(db8.matrices.size() == 3);
  CHECK(max_abs_diff(db8.matrices[0].weights, db8.matrices[2].weights) == 0.0);

  CHECK(build_sequence(GraphFamily::StaticExponential, 8).tau == 1);
  CHECK_FALSE(build_sequence(GraphFamily::StaticHyperCuboid, 12).ftc_claimed);
  CHECK(build_sequence(GraphFamily::FullyConnected, 5).ftc_claimed);

  CHECK_THROWS_AS(build_sequence(GraphFamily::OnePeerHyperCube, 12), std::invalid_argument);
  CHECK_THROWS_AS(build_sequence(GraphFamily::OnePeerExponential, 1), std::invalid_argument);
}

TEST_CASE("verify_ftc") {
  CHECK(verify_ftc(build_sequence(GraphFamily::OnePeerHyperCube, 16)).pass);
  CHECK(verify_ftc(build_sequence(GraphFamily::OnePeerHyperCube, 16)).product_residual <= 1e-12);
  CHECK_FALSE(verify_ftc(build_sequence(GraphFamily::OnePeerExponential, 12)).pass);

  // a J_n anywhere in the sequence absorbs the rest
  TopologySequence with_j = build_sequence(GraphFamily::OnePeerExponential, 6);
  MixingMatrix j;
  j.weights = DenseMatrix::averaging(6);
  with_j.matrices.insert(with_j.matrices.begin() + 1, j);
  with_j.tau = static_cast<int>(with_j.matrices.size());
  CHECK(verify_ftc(with_j).pass);
}

TEST_CASE("verify matches the published claims for n <= 72") {
  for (int n = 2; n <= 72; ++n) {
    const bool pow2 = (n & (n - 1)) == 0;
    CHECK(verify_ftc(build_sequence(GraphFamily::OnePeerExponential, n)).pass == pow2);
    if (pow2) CHECK(verify_ftc(build_sequence(GraphFamily::OnePeerHyperCube, n)).pass);
    CHECK(verify_ftc(build_sequence(GraphFamily::PPeerHyperCuboid, n)).pass);
    CHECK(verify_ftc(build_sequence(GraphFamily::DeBruijn, n)).pass);  // n = p^tau via base inference
  }
}

TEST_CASE("any ordering of an FTC period still averages exactly") {
  const auto check_orders = [](const TopologySequence& seq, bool exhaustive) {
    const auto base = weights_of(seq);
    std::vector<int> order(base.size());
    std::iota(order.begin(), order.end(), 0);
    const auto residual_of = [&](const std::vector<int>& ord) {
      std::vector<DenseMatrix> perm;
      for (int idx : ord) perm.push_back(base[static_cast<std::size_t>(idx)]);
      return consensus_product_residual(perm);
    };
    if (exhaustive) {
      do {
        CHECK(residual_of(order) <= 1e-12);
      } while (std::next_permutation(order.begin(), order.end()));
    } else {
      StreamRng rng(0x0D7);
      for (int t = 0; t < 20; ++t) {
        for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
          const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
          std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
        CHECK(residual_of(order) <= 1e-12);
      }
    }
    // cyclic rotations
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t r = 0; r < base.size(); ++r) {
      std::rotate(order.begin(), order.begin() + 1, order.end());
      CHECK(residual_of(order) <= 1e-12);
    }
  };
  check_orders(build_sequence(GraphFamily::OnePeerExponential, 8), true);
  check_orders(build_sequence(GraphFamily::OnePeerHyperCube, 8), true);
  check_orders(build_sequence(GraphFamily::PPeerHyperCuboid, 12), true);
  check_orders(build_sequence(GraphFamily::OnePeerExponential, 32), false);  // tau = 5
  check_orders(build_sequence(GraphFamily::PPeerHyperCuboid, 64), false);    // tau = 6
}

TEST_CASE("de Bruijn / hyper-cuboid permutation equivalence") {
  for (auto [p, tau] : {std::pair{2, 3}, {3, 2}}) {
    for (int l = 0; l < tau; ++l) {
      const auto eq = debruijn_cuboid_permutation(p, tau, l);
      CAPTURE(p);
      CAPTURE(tau);
      CAPTURE(l);
      CHECK(eq.max_error == 0.0);
      CHECK(eq.cuboid_index == l);
    }
  }
  const auto trivial = debruijn_cuboid_permutation(2, 1, 0);
  CHECK(trivial.max_error == 0.0);  // both sides J_2
}

TEST_CASE("family names round-trip") {
  for (GraphFamily f :
       {GraphFamily::OnePeerExponential, GraphFamily::OnePeerHyperCube,
        GraphFamily::PPeerHyperCuboid, GraphFamily::DeBruijn, GraphFamily::StaticExponential,
        GraphFamily::StaticHyperCuboid, GraphFamily::FullyConnected}) {
    CHECK(family_from_name(family_name(f)) == f);
  }
  CHECK_FALSE(family_from_name("ring").has_value());
}
