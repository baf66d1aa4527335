#include "ftc/algorithms.hpp"

#include <cmath>
#include <limits>

#include "ftc/kernels.hpp"
#include "ftc/rng.hpp"

namespace ftc {

void mix_states(const DenseMatrix& w, const std::vector<double>& in, std::vector<double>& out,
                int n, int d) {
  out.assign(static_cast<std::size_t>(n) * d, 0.0);
  for (int j = 0; j < n; ++j) {
    const double* wrow = w.row(j);
    const double* src = in.data() + static_cast<std::size_t>(j) * d;
    for (int i = 0; i < n; ++i) {
      if (wrow[i] != 0.0)
        kernels::axpy(wrow[i], src, out.data() + static_cast<std::size_t>(i) * d,
                      static_cast<std::size_t>(d));
    }
  }
}

namespace {

void check_finite_bound(const std::vector<double>& x) {
  for (double v : x) {
    if (!(std::abs(v) <= 1e12))
      throw DivergenceError("iterate norm exceeded 1e12; reduce the stepsize");
  }
}

void check_mixing(const AgentStates& st, const MixingMatrix& w) {
  if (!w.weights.square() || w.weights.rows != st.n)
    throw std::invalid_argument("mixing matrix does not match agent count");
}

void force_shared_x(AgentStates& st) {
  std::vector<double> mean(st.d, 0.0);
  for (int i = 0; i < st.n; ++i)
    kernels::axpy(1.0 / st.n, st.x_row(i), mean.data(), mean.size());
  for (int i = 0; i < st.n; ++i)
    std::copy(mean.begin(), mean.end(), st.x_row(i));
}

void sample_round0(AgentStates& st, const Problem& pb, const RunConfig& cfg) {
  const NoiseModel noise{cfg.sigma2, cfg.seed};
  for (int i = 0; i < st.n; ++i) {
    std::span<double> out(st.sample_row(i), static_cast<std::size_t>(st.d));
    stochastic_gradient_into(pb, i, {st.x_row(i), static_cast<std::size_t>(st.d)}, noise, 0, out);
  }
  st.g = st.last_sample;
}

MixingMatrix fully_connected_mixing(int n) {
  MixingMatrix m;
  m.weights = DenseMatrix::averaging(n);
  m.index_l = 0;
  m.max_degree = n - 1;
  return m;
}

}  // namespace

AgentStates init_states(const Problem& pb, const RunConfig& cfg) {
  AgentStates st;
  st.n = pb.n;
  st.d = pb.d;
  st.x.assign(static_cast<std::size_t>(pb.n) * pb.d, 0.0);
  st.g.assign(st.x.size(), 0.0);
  st.last_sample.assign(st.x.size(), 0.0);
  st.round = 0;
  switch (cfg.x0_mode) {
    case X0Mode::Zero:
      break;
    case X0Mode::Gaussian:
      for (int i = 0; i < pb.n; ++i) {
        StreamRng rng(cfg.seed, kStreamInitX, static_cast<std::uint64_t>(i));
        for (int j = 0; j < pb.d; ++j) st.x_row(i)[j] = rng.next_gaussian();
      }
      break;
    case X0Mode::SharedGaussian: {
      StreamRng rng(cfg.seed, kStreamInitX, 0);
      std::vector<double> x0(pb.d);
      for (double& e : x0) e = rng.next_gaussian();
      for (int i = 0; i < pb.n; ++i) std::copy(x0.begin(), x0.end(), st.x_row(i));
      break;
    }
  }
  sample_round0(st, pb, cfg);
  return st;
}

void gt_step(AgentStates& st, const MixingMatrix& w, const Problem& pb, const RunConfig& cfg) {
  check_mixing(st, w);
  const int n = st.n, d = st.d;
  const NoiseModel noise{cfg.sigma2, cfg.seed};

  thread_local std::vector<double> y, newx, newg;
  y.resize(st.x.size());
  for (std::size_t k = 0; k < st.x.size(); ++k) y[k] = st.x[k] - cfg.alpha * st.g[k];

  mix_states(w.weights, y, newx, n, d);
  check_finite_bound(newx);
  mix_states(w.weights, st.g, newg, n, d);

  const long next_round = st.round + 1;
  thread_local std::vector<double> snew;
  snew.resize(st.x.size());
  for (int i = 0; i < n; ++i) {
    std::span<double> si(snew.data() + static_cast<std::size_t>(i) * d,
                         static_cast<std::size_t>(d));
    stochastic_gradient_into(pb, i, {newx.data() + static_cast<std::size_t>(i) * d,
                                     static_cast<std::size_t>(d)},
                             noise, next_round, si);
    double* gi = newg.data() + static_cast<std::size_t>(i) * d;
    const double* old = st.sample_row(i);
    for (int j = 0; j < d; ++j) gi[j] += si[j] - old[j];
  }

  st.x.swap(newx);
  st.g.swap(newg);
  st.last_sample.swap(snew);
  st.round = next_round;
}

void dgd_step(AgentStates& st, const MixingMatrix& w, const Problem& pb, const RunConfig& cfg) {
  check_mixing(st, w);
  const int n = st.n, d = st.d;
  const NoiseModel noise{cfg.sigma2, cfg.seed};

  thread_local std::vector<double> y, grad, newx;
  y.resize(st.x.size());
  grad.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < n; ++j) {
    stochastic_gradient_into(pb, j, {st.x_row(j), static_cast<std::size_t>(d)}, noise, st.round,
                             {grad.data(), grad.size()});
    double* yj = y.data() + static_cast<std::size_t>(j) * d;
    const double* xj = st.x_row(j);
    for (int k = 0; k < d; ++k) yj[k] = xj[k] - cfg.alpha * grad[k];
  }
  mix_states(w.weights, y, newx, n, d);
  check_finite_bound(newx);
  st.x.swap(newx);
  st.round += 1;
}

void allreduce_warmup(AgentStates& st, const Problem& pb, const RunConfig& cfg) {
  if (st.round != 0) throw std::invalid_argument("allreduce_warmup: expects round-0 states");
  force_shared_x(st);
  sample_round0(st, pb, cfg);
  const MixingMatrix j = fully_connected_mixing(st.n);
  for (int k = 0; k < cfg.topology.tau; ++k) gt_step(st, j, pb, cfg);
}

double tuned_stepsize(const StepsizeTuning& t) {
  if (t.L <= 0.0 || t.tau < 1 || t.n < 1 || t.T < 1 || t.sigma2 < 0.0)
    throw std::invalid_argument("tuned_stepsize: inputs must be positive");
  const double tau = static_cast<double>(t.tau);
  double alpha = std::min(1.0 / (2.0 * t.L), 1.0 / (4.0 * std::sqrt(3.0) * tau * tau * t.L));
  if (t.sigma2 > 0.0) {
    const double c0 = (t.variant == StepsizeTuning::Variant::Cor5) ? t.L * t.L : 1.0;
    const double c1 = t.L * t.sigma2 / t.n;
    const double c2 = tau * tau * tau * t.L * t.L * t.sigma2;
    const double T = static_cast<double>(t.T);
    alpha = std::min(alpha, std::sqrt(c0 / (c1 * T)));
    alpha = std::min(alpha, std::cbrt(c0 / (c2 * T)));
  }
  return alpha;
}

RunResult run(const Problem& pb, const RunConfig& cfg) {
  if (cfg.alpha <= 0.0) throw std::invalid_argument("run: alpha must be > 0");
  if (cfg.iters < 1) throw std::invalid_argument("run: iters must be >= 1");
  if (cfg.topology.matrices.empty()) throw std::invalid_argument("run: empty topology");
  if (cfg.topology.n != pb.n) throw std::invalid_argument("run: topology size != agent count");

  const int n = pb.n, d = pb.d;
  const int tau = cfg.topology.tau;
  const bool tracks = cfg.algorithm != Algorithm::Dgd;

  AgentStates st = init_states(pb, cfg);
  if (cfg.warmup) {
    force_shared_x(st);
    sample_round0(st, pb, cfg);
  }
  const MixingMatrix jmix = fully_connected_mixing(n);

  RunResult res;
  res.trace.rows.reserve(static_cast<std::size_t>(cfg.iters) + 1);

  std::vector<double> xbar(d), gbar(d), grad_mean(d), grad_at_mean(d), scratch(d);
  std::vector<double> prev_xbar(d), prev_gbar(d);
  bool have_prev = false;

  for (long k = 0;; ++k) {
    // means over agents
    std::fill(xbar.begin(), xbar.end(), 0.0);
    for (int i = 0; i < n; ++i) kernels::axpy(1.0 / n, st.x_row(i), xbar.data(), xbar.size());

    MetricsRow row;
    row.iter = k;
    row.objective = global_objective_and_gradient(pb, xbar, grad_at_mean);
    row.grad_at_mean_sq =
        kernels::dot(grad_at_mean.data(), grad_at_mean.data(), grad_at_mean.size());
    std::fill(grad_mean.begin(), grad_mean.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      local_gradient(pb, i, {st.x_row(i), static_cast<std::size_t>(d)}, scratch);
      kernels::axpy(1.0 / n, scratch.data(), grad_mean.data(), grad_mean.size());
    }
    row.grad_mean_sq = kernels::dot(grad_mean.data(), grad_mean.data(), grad_mean.size());
    row.consensus_err = consensus_error_flat(st.x, n, d, xbar);
    res.trace.rows.push_back(row);

    if (k <= tau) res.warmup_consensus_sq += static_cast<double>(n) * row.consensus_err;

    if (tracks) {
      std::fill(gbar.begin(), gbar.end(), 0.0);
      for (int i = 0; i < n; ++i) kernels::axpy(1.0 / n, st.g_row(i), gbar.data(), gbar.size());
      // the tracking mean must equal the mean of the cached round-k samples
      std::fill(scratch.begin(), scratch.end(), 0.0);
      for (int i = 0; i < n; ++i)
        kernels::axpy(1.0 / n, st.sample_row(i), scratch.data(), scratch.size());
      for (int j = 0; j < d; ++j)
        res.max_tracking_dev = std::max(res.max_tracking_dev, std::abs(gbar[j] - scratch[j]));
      if (have_prev) {
        for (int j = 0; j < d; ++j) {
          const double predicted = prev_xbar[j] - cfg.alpha * prev_gbar[j];
          res.max_centroid_dev = std::max(res.max_centroid_dev, std::abs(xbar[j] - predicted));
        }
      }
      prev_xbar = xbar;
      prev_gbar = gbar;
      have_prev = true;
    }

    res.stopped_at = k;
    if (k == cfg.iters) break;
    if (cfg.stop_grad_at_mean_sq > 0.0 && row.grad_at_mean_sq <= cfg.stop_grad_at_mean_sq) break;

    const MixingMatrix& w =
        (cfg.warmup && k < tau) ? jmix : cfg.topology.matrices[static_cast<std::size_t>(k % tau)];
    if (cfg.algorithm == Algorithm::Dgd) {
      dgd_step(st, w, pb, cfg);
    } else {
      gt_step(st, w, pb, cfg);
    }
  }
  return res;
}

}  // namespace ftc
