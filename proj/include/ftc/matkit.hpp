#pragma once

#include <algorithm>
#include <iosfwd>
#include <string>
#include <vector>

#include "ftc/dense.hpp"

namespace ftc {

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// Perfect shuffle P_s on p^tau indices: for basis vectors,
// P_s (a_{tau-1} (x) ... (x) a_0) = a_0 (x) a_{tau-1} (x) ... (x) a_1,
// i.e. the digit string of the index rotates right. P_s^tau = I.
PermutationMap perfect_shuffle(int p, int tau);

struct StochasticResidual {
  double row = 0.0;         // max_i |sum_j w_ij - 1|
  double col = 0.0;         // max_j |sum_i w_ij - 1|
  double negativity = 0.0;  // max(0, -min entry)
  double worst() const { return std::max({row, col, negativity}); }
};
StochasticResidual doubly_stochastic_residual(const DenseMatrix& w);

// Max-norm of W^(last) ... W^(first) - J_n; the first element of seq is
// applied first, matching the product order in the consensus definition.
double consensus_product_residual(const std::vector<DenseMatrix>& seq);
// Max-norm of the equivalent residual-form product (W^(l) - J_n) chained
// in the same order.
double residual_form_norm(const std::vector<DenseMatrix>& seq);

// Largest singular value of W - J_n, by power iteration on (W-J)^T (W-J).
// Deterministic: seeded with an alternating +-1 vector plus a second fixed
// pseudorandom start (the alternating vector is an exact eigenvector of
// every even-order circulant, so a single start can miss the top space).
double spectral_deviation(const DenseMatrix& w, double tol = 1e-12, int max_iters = 10000);

// Matrix CSV: one row per line, comma separated, 17 significant digits,
// no header.
void write_matrix_csv(const DenseMatrix& w, std::ostream& out);

std::string format_double17(double v);

}  // namespace ftc
