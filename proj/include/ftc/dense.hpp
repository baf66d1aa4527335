#pragma once

#include <cstddef>
#include <vector>

namespace ftc {

// Generous cap on matrix dimensions; the experiments never exceed n=128,
// the guard only turns accidental huge inputs into a clean error.
inline constexpr int kMaxMatrixDim = 4096;

// Dense row-major matrix of doubles. All topology and verification math
// runs on dense storage; sparsity is only exploited by skipping zero
// entries in the simulation inner loops.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c);

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  double* row(int i) { return data.data() + static_cast<std::size_t>(i) * cols; }
  const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * cols; }
  bool square() const { return rows == cols && rows > 0; }

  DenseMatrix transpose() const;

  static DenseMatrix identity(int n);
  static DenseMatrix averaging(int n);  // J_n = (1/n) 11^T
};

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

// Permutation on {0,...,size-1}; map[i] is the destination of source index i.
// As a matrix, P e_i = e_{map[i]}.
struct PermutationMap {
  std::vector<int> map;

  int size() const { return static_cast<int>(map.size()); }
  bool is_bijection() const;
  PermutationMap inverse() const;
  PermutationMap then(const PermutationMap& next) const;  // apply *this first
  PermutationMap pow(int k) const;                        // k >= 0 repeats
  DenseMatrix to_matrix() const;

  static PermutationMap identity(int n);
};

}  // namespace ftc
