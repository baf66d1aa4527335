#include "ftc/matkit.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>

#include "ftc/kernels.hpp"
#include "ftc/rng.hpp"

namespace ftc {

DenseMatrix::DenseMatrix(int r, int c) : rows(r), cols(c) {
  if (r < 1 || c < 1 || r > kMaxMatrixDim || c > kMaxMatrixDim)
    throw std::invalid_argument("matrix dimensions out of range");
  data.assign(static_cast<std::size_t>(r) * c, 0.0);
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::averaging(int n) {
  DenseMatrix m(n, n);
  const double v = 1.0 / n;
  for (double& e : m.data) e = v;
  return m;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k)
    m = std::max(m, std::abs(a.data[k] - b.data[k]));
  return m;
}

bool PermutationMap::is_bijection() const {
  std::vector<char> seen(map.size(), 0);
  for (int v : map) {
    if (v < 0 || v >= size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

PermutationMap PermutationMap::inverse() const {
  PermutationMap inv;
  inv.map.assign(map.size(), 0);
  for (int i = 0; i < size(); ++i) inv.map[map[i]] = i;
  return inv;
}

PermutationMap PermutationMap::then(const PermutationMap& next) const {
  if (next.size() != size()) throw std::invalid_argument("permutation size mismatch");
  PermutationMap out;
  out.map.resize(map.size());
  for (int i = 0; i < size(); ++i) out.map[i] = next.map[map[i]];
  return out;
}

PermutationMap PermutationMap::pow(int k) const {
  if (k < 0) throw std::invalid_argument("permutation power must be >= 0");
  PermutationMap out = identity(size());
  for (int i = 0; i < k; ++i) out = out.then(*this);
  return out;
}

DenseMatrix PermutationMap::to_matrix() const {
  DenseMatrix p(size(), size());
  for (int i = 0; i < size(); ++i) p(map[i], i) = 1.0;
  return p;
}

PermutationMap PermutationMap::identity(int n) {
  PermutationMap id;
  id.map.resize(n);
  for (int i = 0; i < n; ++i) id.map[i] = i;
  return id;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  const std::int64_t r = static_cast<std::int64_t>(a.rows) * b.rows;
  const std::int64_t c = static_cast<std::int64_t>(a.cols) * b.cols;
  if (r > kMaxMatrixDim || c > kMaxMatrixDim)
    throw std::invalid_argument("kron: result exceeds configured max size");
  DenseMatrix out(static_cast<int>(r), static_cast<int>(c));
  for (int ia = 0; ia < a.rows; ++ia) {
    for (int ja = 0; ja < a.cols; ++ja) {
      const double v = a(ia, ja);
      if (v == 0.0) continue;
      for (int ib = 0; ib < b.rows; ++ib) {
        double* orow = out.row(ia * b.rows + ib) + static_cast<std::size_t>(ja) * b.cols;
        const double* brow = b.row(ib);
        for (int jb = 0; jb < b.cols; ++jb) orow[jb] = v * brow[jb];
      }
    }
  }
  return out;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
  DenseMatrix out(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    double* orow = out.row(i);
    const double* arow = a.row(i);
    for (int k = 0; k < a.cols; ++k) {
      if (arow[k] != 0.0) kernels::axpy(arow[k], b.row(k), orow, b.cols);
    }
  }
  return out;
}

PermutationMap perfect_shuffle(int p, int tau) {
  if (p < 2 || tau < 1) throw std::invalid_argument("perfect_shuffle: need p >= 2, tau >= 1");
  std::int64_t n = 1;
  for (int i = 0; i < tau; ++i) {
    n *= p;
    if (n > kMaxMatrixDim) throw std::invalid_argument("perfect_shuffle: p^tau exceeds max size");
  }
  const std::int64_t stride = n / p;
  PermutationMap ps;
  ps.map.resize(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    ps.map[static_cast<std::size_t>(i)] = static_cast<int>((i % p) * stride + i / p);
  return ps;
}

StochasticResidual doubly_stochastic_residual(const DenseMatrix& w) {
  if (!w.square()) throw std::invalid_argument("doubly_stochastic_residual: matrix not square");
  StochasticResidual r;
  const int n = w.rows;
  std::vector<double> colsum(n, 0.0);
  double minv = w.data[0];
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    const double* row = w.row(i);
    for (int j = 0; j < n; ++j) {
      rowsum += row[j];
      colsum[j] += row[j];
      minv = std::min(minv, row[j]);
    }
    r.row = std::max(r.row, std::abs(rowsum - 1.0));
  }
  for (int j = 0; j < n; ++j) r.col = std::max(r.col, std::abs(colsum[j] - 1.0));
  r.negativity = std::max(0.0, -minv);
  return r;
}

double consensus_product_residual(const std::vector<DenseMatrix>& seq) {
  if (seq.empty()) throw std::invalid_argument("consensus_product_residual: empty sequence");
  const int n = seq.front().rows;
  for (const auto& w : seq)
    if (!w.square() || w.rows != n)
      throw std::invalid_argument("consensus_product_residual: dimension mismatch");
  DenseMatrix prod = seq.front();
  for (std::size_t k = 1; k < seq.size(); ++k) prod = matmul(seq[k], prod);
  const double jv = 1.0 / n;
  double m = 0.0;
  for (double e : prod.data) m = std::max(m, std::abs(e - jv));
  return m;
}

double residual_form_norm(const std::vector<DenseMatrix>& seq) {
  if (seq.empty()) throw std::invalid_argument("residual_form_norm: empty sequence");
  const int n = seq.front().rows;
  auto hat = [n](const DenseMatrix& w) {
    DenseMatrix h = w;
    const double jv = 1.0 / n;
    for (double& e : h.data) e -= jv;
    return h;
  };
  DenseMatrix prod = hat(seq.front());
  for (std::size_t k = 1; k < seq.size(); ++k) prod = matmul(hat(seq[k]), prod);
  double m = 0.0;
  for (double e : prod.data) m = std::max(m, std::abs(e));
  return m;
}

namespace {

// One power-iteration run on B = what^T what from a given start vector,
// deflated against the all-ones null direction. Returns the converged
// Rayleigh quotient (an eigenvalue of B reachable from v0).
double power_iterate(const DenseMatrix& what, std::vector<double> v, double tol, int max_iters) {
  const int n = what.rows;
  auto deflate = [n](std::vector<double>& u) {
    double mean = 0.0;
    for (double e : u) mean += e;
    mean /= n;
    for (double& e : u) e -= mean;
  };
  auto norm = [n](const std::vector<double>& u) {
    return std::sqrt(kernels::dot(u.data(), u.data(), static_cast<std::size_t>(n)));
  };

  deflate(v);
  double vn = norm(v);
  if (vn == 0.0) return 0.0;
  for (double& e : v) e /= vn;

  std::vector<double> u(n), z(n);
  double lambda = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    // u = what * v ; z = what^T * u
    for (int i = 0; i < n; ++i)
      u[i] = kernels::dot(what.row(i), v.data(), static_cast<std::size_t>(n));
    std::fill(z.begin(), z.end(), 0.0);
    for (int i = 0; i < n; ++i)
      kernels::axpy(u[i], what.row(i), z.data(), static_cast<std::size_t>(n));
    deflate(z);
    const double next = kernels::dot(v.data(), z.data(), static_cast<std::size_t>(n));
    const double zn = norm(z);
    if (zn < 1e-150) return 0.0;  // start lies in the nullspace of B
    for (int i = 0; i < n; ++i) v[i] = z[i] / zn;
    if (it > 0 && std::abs(next - lambda) <= tol * std::max(std::abs(next), 1e-30)) {
      return std::max(next, 0.0);
    }
    lambda = next;
  }
  throw std::runtime_error("spectral_deviation: power iteration did not converge; raise max_iters");
}

}  // namespace

double spectral_deviation(const DenseMatrix& w, double tol, int max_iters) {
  if (!w.square()) throw std::invalid_argument("spectral_deviation: matrix not square");
  const int n = w.rows;
  DenseMatrix what = w;
  const double jv = 1.0 / n;
  for (double& e : what.data) e -= jv;

  std::vector<double> alt(n);
  for (int i = 0; i < n; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
  double lambda = power_iterate(what, alt, tol, max_iters);

  std::vector<double> rnd(n);
  StreamRng rng(0x5eedu, 0x5eedu);
  for (int i = 0; i < n; ++i) rnd[i] = rng.next_gaussian();
  lambda = std::max(lambda, power_iterate(what, rnd, tol, max_iters));

  return std::sqrt(lambda);
}

std::string format_double17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_matrix_csv(const DenseMatrix& w, std::ostream& out) {
  for (int i = 0; i < w.rows; ++i) {
    for (int j = 0; j < w.cols; ++j) {
      if (j) out << ',';
      out << format_double17(w(i, j));
    }
    out << '\n';
  }
}

}  // namespace ftc
