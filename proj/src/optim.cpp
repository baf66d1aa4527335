#include "ftc/optim.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ftc/kernels.hpp"
#include "ftc/matkit.hpp"
#include "ftc/rng.hpp"

namespace ftc {

namespace {

void check_agent(const Problem& p, int agent) {
  if (agent < 0 || agent >= p.n) throw std::invalid_argument("agent index out of range");
}

void check_x(const Problem& p, std::span<const double> x) {
  if (static_cast<int>(x.size()) != p.d) throw std::invalid_argument("iterate has wrong dimension");
}

std::vector<double>& residual_scratch(int m) {
  thread_local std::vector<double> r;
  r.resize(static_cast<std::size_t>(m));
  return r;
}

}  // namespace

Problem generate_problem(int n, int m, int d, double delta, double mu, std::uint64_t seed) {
  if (n < 1 || m < 1 || d < 1) throw std::invalid_argument("generate_problem: n, m, d must be >= 1");
  if (delta < 0.0 || mu < 0.0) throw std::invalid_argument("generate_problem: delta, mu must be >= 0");
  Problem p;
  p.n = n;
  p.m = m;
  p.d = d;
  p.mu = mu;
  p.delta = delta;
  p.seed = seed;
  p.A.reserve(n);
  p.b.reserve(n);
  for (int i = 0; i < n; ++i) {
    StreamRng ra(seed, kStreamProblemA, static_cast<std::uint64_t>(i));
    DenseMatrix A(m, d);
    for (double& e : A.data) e = ra.next_gaussian();

    StreamRng rx(seed, kStreamProblemXtilde, static_cast<std::uint64_t>(i));
    std::vector<double> xt(d);
    for (double& e : xt) e = rx.next_gaussian();

    StreamRng rz(seed, kStreamProblemZ, static_cast<std::uint64_t>(i));
    std::vector<double> b(m);
    for (int r = 0; r < m; ++r)
      b[r] = kernels::dot(A.row(r), xt.data(), static_cast<std::size_t>(d)) +
             delta * rz.next_gaussian();

    p.A.push_back(std::move(A));
    p.b.push_back(std::move(b));
  }
  return p;
}

double local_objective(const Problem& p, int agent, std::span<const double> x) {
  check_agent(p, agent);
  check_x(p, x);
  const DenseMatrix& A = p.A[agent];
  const std::vector<double>& b = p.b[agent];
  double ls = 0.0;
  for (int r = 0; r < p.m; ++r) {
    const double res = kernels::dot(A.row(r), x.data(), x.size()) - b[r];
    ls += res * res;
  }
  double reg = 0.0;
  for (int j = 0; j < p.d; ++j) {
    const double t = x[j] * x[j];
    reg += t / (1.0 + t);
  }
  return ls + p.mu * reg;
}

double local_objective_and_gradient(const Problem& p, int agent, std::span<const double> x,
                                    std::span<double> grad_out) {
  check_agent(p, agent);
  check_x(p, x);
  if (grad_out.size() != x.size()) throw std::invalid_argument("gradient output size mismatch");
  const DenseMatrix& A = p.A[agent];
  const std::vector<double>& b = p.b[agent];
  std::vector<double>& r = residual_scratch(p.m);
  double ls = 0.0;
  for (int row = 0; row < p.m; ++row) {
    r[row] = kernels::dot(A.row(row), x.data(), x.size()) - b[row];
    ls += r[row] * r[row];
  }
  std::fill(grad_out.begin(), grad_out.end(), 0.0);
  for (int row = 0; row < p.m; ++row)
    kernels::axpy(2.0 * r[row], A.row(row), grad_out.data(), grad_out.size());
  double reg = 0.0;
  for (int j = 0; j < p.d; ++j) {
    const double t = x[j] * x[j];
    const double den = 1.0 + t;
    reg += t / den;
    grad_out[j] += p.mu * 2.0 * x[j] / (den * den);
  }
  return ls + p.mu * reg;
}

void local_gradient(const Problem& p, int agent, std::span<const double> x,
                    std::span<double> out) {
  local_objective_and_gradient(p, agent, x, out);
}

void stochastic_gradient_into(const Problem& p, int agent, std::span<const double> x,
                              const NoiseModel& noise, long round, std::span<double> out) {
  local_gradient(p, agent, x, out);
  if (noise.sigma2 > 0.0) {
    const double sigma = std::sqrt(noise.sigma2);
    StreamRng rng(noise.stream, kStreamGradNoise, static_cast<std::uint64_t>(agent),
                  static_cast<std::uint64_t>(round));
    for (double& e : out) e += sigma * rng.next_gaussian();
  }
}

GradientSample stochastic_gradient(const Problem& p, int agent, std::span<const double> x,
                                   const NoiseModel& noise, long round) {
  GradientSample s;
  s.agent = agent;
  s.iterate.assign(x.begin(), x.end());
  s.value.resize(x.size());
  stochastic_gradient_into(p, agent, x, noise, round, s.value);
  return s;
}

double global_objective(const Problem& p, std::span<const double> x) {
  double acc = 0.0;
  for (int i = 0; i < p.n; ++i) acc += local_objective(p, i, x);
  return acc / p.n;
}

double global_objective_and_gradient(const Problem& p, std::span<const double> x,
                                     std::span<double> grad_out) {
  std::fill(grad_out.begin(), grad_out.end(), 0.0);
  std::vector<double> g(p.d);
  double acc = 0.0;
  for (int i = 0; i < p.n; ++i) {
    acc += local_objective_and_gradient(p, i, x, g);
    kernels::axpy(1.0 / p.n, g.data(), grad_out.data(), grad_out.size());
  }
  return acc / p.n;
}

std::vector<double> global_gradient(const Problem& p, std::span<const double> x) {
  std::vector<double> g(p.d);
  global_objective_and_gradient(p, x, g);
  return g;
}

double consensus_error_flat(std::span<const double> states_flat, int n, int d,
                            std::span<const double> reference) {
  if (static_cast<int>(states_flat.size()) != n * d || static_cast<int>(reference.size()) != d)
    throw std::invalid_argument("consensus_error: dimension mismatch");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* xi = states_flat.data() + static_cast<std::size_t>(i) * d;
    for (int j = 0; j < d; ++j) {
      const double diff = xi[j] - reference[j];
      acc += diff * diff;
    }
  }
  return acc / n;
}

double consensus_error(const std::vector<std::vector<double>>& states,
                       std::span<const double> reference) {
  if (states.empty()) throw std::invalid_argument("consensus_error: no states");
  double acc = 0.0;
  for (const auto& xi : states) {
    if (xi.size() != reference.size())
      throw std::invalid_argument("consensus_error: dimension mismatch");
    for (std::size_t j = 0; j < xi.size(); ++j) {
      const double diff = xi[j] - reference[j];
      acc += diff * diff;
    }
  }
  return acc / static_cast<double>(states.size());
}

double estimate_smoothness(const Problem& p) {
  const double tol = 1e-10;
  const int max_iters = 10000;
  double max_lambda = 0.0;
  std::vector<double> v(p.d), u(p.m), z(p.d);
  for (int agent = 0; agent < p.n; ++agent) {
    const DenseMatrix& A = p.A[agent];
    // power iteration on A^T A, two deterministic starts
    double best = 0.0;
    for (int start = 0; start < 2; ++start) {
      if (start == 0) {
        for (int j = 0; j < p.d; ++j) v[j] = (j % 2 == 0) ? 1.0 : -1.0;
      } else {
        StreamRng rng(p.seed, 0xE16E, static_cast<std::uint64_t>(agent));
        for (int j = 0; j < p.d; ++j) v[j] = rng.next_gaussian();
      }
      double vn = std::sqrt(kernels::dot(v.data(), v.data(), v.size()));
      for (double& e : v) e /= vn;
      double lambda = 0.0;
      bool converged = false;
      for (int it = 0; it < max_iters; ++it) {
        for (int r = 0; r < p.m; ++r) u[r] = kernels::dot(A.row(r), v.data(), v.size());
        std::fill(z.begin(), z.end(), 0.0);
        for (int r = 0; r < p.m; ++r) kernels::axpy(u[r], A.row(r), z.data(), z.size());
        const double next = kernels::dot(v.data(), z.data(), v.size());
        const double zn = std::sqrt(kernels::dot(z.data(), z.data(), z.size()));
        if (zn < 1e-150) {
          lambda = 0.0;
          converged = true;
          break;
        }
        for (int j = 0; j < p.d; ++j) v[j] = z[j] / zn;
        if (it > 0 && std::abs(next - lambda) <= tol * std::max(std::abs(next), 1e-30)) {
          lambda = next;
          converged = true;
          break;
        }
        lambda = next;
      }
      if (!converged)
        throw std::runtime_error("estimate_smoothness: power iteration did not converge");
      best = std::max(best, lambda);
    }
    max_lambda = std::max(max_lambda, best);
  }
  return 2.0 * max_lambda + 2.0 * p.mu;
}

void dump_problem(const Problem& p, std::ostream& out) {
  out << p.n << ',' << p.m << ',' << p.d << ',' << format_double17(p.mu) << ','
      << format_double17(p.delta) << ',' << p.seed << '\n';
  for (int i = 0; i < p.n; ++i) {
    out << "# agent " << i << '\n';
    write_matrix_csv(p.A[i], out);
    for (int r = 0; r < p.m; ++r) {
      if (r) out << ',';
      out << format_double17(p.b[i][r]);
    }
    out << '\n';
  }
}

}  // namespace ftc
