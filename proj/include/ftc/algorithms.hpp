#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ftc/metrics.hpp"
#include "ftc/optim.hpp"
#include "ftc/topology.hpp"

namespace ftc {

enum class Algorithm { GtFt, GtStatic, Dgd };
enum class X0Mode { Zero, Gaussian, SharedGaussian };

struct RunConfig {
  Algorithm algorithm = Algorithm::GtFt;
  TopologySequence topology;
  double alpha = 1e-4;
  long iters = 1;
  double sigma2 = 0.0;
  bool warmup = false;
  std::uint64_t seed = 0;
  X0Mode x0_mode = X0Mode::Zero;
  // Optional early stop: halt once grad_at_mean_sq drops to this level
  // (0 disables). The stopping row is still recorded.
  double stop_grad_at_mean_sq = 0.0;
};

// Stacked per-agent state, agent-major rows of length d. last_sample holds
// the stochastic gradients consumed at the current round; the tracking
// update reuses them and never resamples.
struct AgentStates {
  int n = 0;
  int d = 0;
  std::vector<double> x;
  std::vector<double> g;
  std::vector<double> last_sample;
  long round = 0;

  double* x_row(int i) { return x.data() + static_cast<std::size_t>(i) * d; }
  const double* x_row(int i) const { return x.data() + static_cast<std::size_t>(i) * d; }
  double* g_row(int i) { return g.data() + static_cast<std::size_t>(i) * d; }
  double* sample_row(int i) { return last_sample.data() + static_cast<std::size_t>(i) * d; }
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

AgentStates init_states(const Problem& problem, const RunConfig& config);

// out_i = sum_j w[j,i] in_j over stacked agent-major rows: one communication
// round of the network, applying W on the receiver side.
void mix_states(const DenseMatrix& w, const std::vector<double>& in, std::vector<double>& out,
                int n, int d);

// One synchronous round. Receivers combine column weights: the stacked
// update applies W^T, i.e. x_i <- sum_j w[j,i] (x_j - alpha g_j), matching
// the in-neighbor sum over w_ji. Throws DivergenceError past 1e12.
void gt_step(AgentStates& states, const MixingMatrix& w, const Problem& problem,
             const RunConfig& config);
void dgd_step(AgentStates& states, const MixingMatrix& w, const Problem& problem,
              const RunConfig& config);

// Forces a shared x^(0) (network average), re-evaluates the round-0
// gradients there, then runs tau rounds of gt_step with J_n so that
// sum_{k<=tau} ||x^(k) - xbar^(k)||^2 = 0.
void allreduce_warmup(AgentStates& states, const Problem& problem, const RunConfig& config);

struct StepsizeTuning {
  enum class Variant { Cor5, Cor6 };
  double L = 0.0;
  int tau = 1;
  int n = 1;
  long T = 1;
  double sigma2 = 0.0;
  Variant variant = Variant::Cor6;
};
// alpha = min{ (c0/(c1 T))^(1/2), (c0/(c2 T))^(1/3), 1/(2L), 1/(4 sqrt(3) tau^2 L) }
// with c1 = L sigma^2 / n, c2 = tau^3 L^2 sigma^2 and c0 = L^2 (Cor5) or 1 (Cor6).
double tuned_stepsize(const StepsizeTuning& t);

struct RunResult {
  MetricsTrace trace;
  // Analysis identities observed as runtime diagnostics (GT only):
  double max_tracking_dev = 0.0;  // max_k |gbar - mean of cached samples|_inf
  double max_centroid_dev = 0.0;  // max_k |xbar^(k+1) - (xbar^(k) - alpha gbar^(k))|_inf
  double warmup_consensus_sq = 0.0;  // sum_{k=0}^{tau} ||x - xbar||^2
  long stopped_at = 0;               // last recorded iteration
};

RunResult run(const Problem& problem, const RunConfig& config);

}  // namespace ftc
