#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ftc/dense.hpp"

namespace ftc {

// Regularized least squares over n agents:
//   f_i(x) = ||A_i x - b_i||^2 + mu * sum_j x_j^2 / (1 + x_j^2),
// so the network average (1/n) sum f_i is the benchmark objective.
struct Problem {
  int n = 0;
  int m = 0;
  int d = 0;
  std::vector<DenseMatrix> A;         // n matrices, m x d
  std::vector<std::vector<double>> b; // n vectors, length m
  double mu = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

// A_i, xtilde_i, z_i all IID standard normal; b_i = A_i xtilde_i + delta z_i.
// Bit-reproducible for a fixed seed.
Problem generate_problem(int n, int m, int d, double delta, double mu, std::uint64_t seed);

struct NoiseModel {
  double sigma2 = 0.0;
  std::uint64_t stream = 0;  // root of the counter-based noise streams
};

struct GradientSample {
  int agent = 0;
  std::vector<double> iterate;
  std::vector<double> value;
};

double local_objective(const Problem& p, int agent, std::span<const double> x);
void local_gradient(const Problem& p, int agent, std::span<const double> x,
                    std::span<double> out);
// Objective and gradient sharing one residual pass.
double local_objective_and_gradient(const Problem& p, int agent, std::span<const double> x,
                                    std::span<double> grad_out);

// local_gradient plus N(0, sigma^2 I) noise; the draw is a pure function of
// (noise.stream, agent, round).
void stochastic_gradient_into(const Problem& p, int agent, std::span<const double> x,
                              const NoiseModel& noise, long round, std::span<double> out);
GradientSample stochastic_gradient(const Problem& p, int agent, std::span<const double> x,
                                   const NoiseModel& noise, long round);

double global_objective(const Problem& p, std::span<const double> x);
std::vector<double> global_gradient(const Problem& p, std::span<const double> x);
double global_objective_and_gradient(const Problem& p, std::span<const double> x,
                                     std::span<double> grad_out);

// (1/n) sum_i ||x_i - reference||^2
double consensus_error(const std::vector<std::vector<double>>& states,
                       std::span<const double> reference);
double consensus_error_flat(std::span<const double> states_flat, int n, int d,
                            std::span<const double> reference);

// L = 2 max_i lambda_max(A_i^T A_i) + 2 mu  (the regularizer's second
// derivative peaks at 2, at the origin). Power iteration to 1e-10.
double estimate_smoothness(const Problem& p);

// Header "n,m,d,mu,delta,seed" then per agent "# agent i", A_i in matrix
// CSV form, and b_i as a single CSV row.
void dump_problem(const Problem& p, std::ostream& out);

}  // namespace ftc
