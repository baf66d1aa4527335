#include "ftc/harness.hpp"

#include <stdexcept>

#include "ftc/kernels.hpp"
#include "ftc/rng.hpp"

namespace ftc {

MetricsTrace run_consensus_sim(GraphFamily family, int n, int iters, std::uint64_t seed, int d,
                               int de_bruijn_base) {
  if (iters < 0 || d < 1) throw std::invalid_argument("run_consensus_sim: bad iters/d");
  const TopologySequence seq = build_sequence(family, n, de_bruijn_base);

  std::vector<double> x(static_cast<std::size_t>(n) * d);
  for (int i = 0; i < n; ++i) {
    StreamRng rng(seed, kStreamConsensusX, static_cast<std::uint64_t>(i));
    for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(i) * d + j] = rng.next_gaussian();
  }
  std::vector<double> ref(d, 0.0);
  for (int i = 0; i < n; ++i)
    kernels::axpy(1.0 / n, x.data() + static_cast<std::size_t>(i) * d, ref.data(), ref.size());

  MetricsTrace trace;
  trace.consensus_only = true;
  std::vector<double> next;
  for (int k = 0;; ++k) {
    MetricsRow row;
    row.iter = k;
    row.consensus_err = consensus_error_flat(x, n, d, ref);
    trace.rows.push_back(row);
    if (k == iters) break;
    mix_states(seq.matrices[static_cast<std::size_t>(k % seq.tau)].weights, x, next, n, d);
    x.swap(next);
  }
  return trace;
}

TopologySequence topology_for(Algorithm algorithm, GraphFamily family, int n,
                              int de_bruijn_base) {
  if (algorithm == Algorithm::GtStatic && family_is_dynamic(family)) {
    TopologySequence seq;
    seq.n = n;
    seq.tau = 1;
    seq.matrices.push_back(static_variant(family, n, de_bruijn_base));
    seq.family = family == GraphFamily::OnePeerExponential ? GraphFamily::StaticExponential
                 : family == GraphFamily::DeBruijn         ? GraphFamily::DeBruijn
                                                           : GraphFamily::StaticHyperCuboid;
    seq.ftc_claimed = family == GraphFamily::DeBruijn;
    return seq;
  }
  return build_sequence(family, n, de_bruijn_base);
}

PresetPlan make_preset_plan(const std::string& name, const std::string& scale) {
  if (scale != "paper" && scale != "desk") throw std::invalid_argument("unknown scale: " + scale);
  const bool paper = scale == "paper";
  PresetPlan plan;
  plan.name = name;
  plan.scale = scale;
  plan.m = paper ? 500 : 50;
  plan.d = paper ? 20 : 10;
  plan.delta = 10.0;
  plan.mu = 0.1;
  plan.alpha = 1e-4;
  plan.iters = 5000;

  using GF = GraphFamily;
  if (name == "consensus") {
    if (paper) {
      plan.consensus_arms = {{GF::OnePeerExponential, 64}, {GF::OnePeerHyperCube, 64},
                             {GF::PPeerHyperCuboid, 72},   {GF::DeBruijn, 64},
                             {GF::StaticExponential, 64},  {GF::StaticHyperCuboid, 72},
                             {GF::StaticHyperCuboid, 64}};
    } else {
      plan.consensus_arms = {{GF::OnePeerExponential, 8}, {GF::OnePeerHyperCube, 8},
                             {GF::PPeerHyperCuboid, 12},  {GF::DeBruijn, 8},
                             {GF::StaticExponential, 8},  {GF::StaticHyperCuboid, 12},
                             {GF::StaticHyperCuboid, 8}};
    }
    plan.iters = 30;
    return plan;
  }

  auto arms_for = [](GF dynamic, GF stat, bool with_static) {
    std::vector<OptimizeArm> arms;
    const std::string dyn(family_name(dynamic));
    const std::string sta(family_name(stat));
    for (double s2 : {0.0, 1e-4}) {
      const std::string mode = s2 == 0.0 ? "det" : "stoch";
      arms.push_back({"gt-ft_" + dyn + "_" + mode, Algorithm::GtFt, dynamic, s2});
      if (with_static)
        arms.push_back({"gt-static_" + sta + "_" + mode, Algorithm::GtStatic, stat, s2});
      arms.push_back({"dgd_" + dyn + "_" + mode, Algorithm::Dgd, dynamic, s2});
      if (with_static) arms.push_back({"dgd_" + sta + "_" + mode, Algorithm::Dgd, stat, s2});
    }
    return arms;
  };

  if (name == "optimize-exp") {
    plan.n = paper ? 64 : 8;
    plan.optimize_arms = arms_for(GF::OnePeerExponential, GF::StaticExponential, true);
  } else if (name == "optimize-cuboid") {
    plan.n = paper ? 72 : 12;
    plan.optimize_arms = arms_for(GF::PPeerHyperCuboid, GF::StaticHyperCuboid, true);
  } else if (name == "optimize-debruijn") {
    plan.n = paper ? 64 : 8;
    plan.optimize_arms = arms_for(GF::DeBruijn, GF::DeBruijn, false);
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return plan;
}

std::vector<std::string> run_preset(const std::string& name, const std::string& scale,
                                    std::uint64_t seed, const std::filesystem::path& out_dir) {
  const PresetPlan plan = make_preset_plan(name, scale);
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;

  if (!plan.consensus_arms.empty()) {
    for (const auto& [family, n] : plan.consensus_arms) {
      const MetricsTrace trace =
          run_consensus_sim(family, n, static_cast<int>(plan.iters), seed, plan.d);
      const std::string file =
          "consensus_" + std::string(family_name(family)) + "_n" + std::to_string(n) + ".csv";
      write_metrics_csv(trace, out_dir / file);
      written.push_back(file);
    }
    return written;
  }

  const Problem problem = generate_problem(plan.n, plan.m, plan.d, plan.delta, plan.mu, seed);
  for (const auto& arm : plan.optimize_arms) {
    RunConfig cfg;
    cfg.algorithm = arm.algorithm;
    cfg.topology = topology_for(arm.algorithm, arm.family, plan.n);
    cfg.alpha = plan.alpha;
    cfg.iters = plan.iters;
    cfg.sigma2 = arm.sigma2;
    cfg.seed = seed;
    cfg.x0_mode = X0Mode::Zero;
    const RunResult res = run(problem, cfg);
    const std::string file = plan.name + "_" + arm.label + ".csv";
    write_metrics_csv(res.trace, out_dir / file);
    written.push_back(file);
  }
  return written;
}

}  // namespace ftc
