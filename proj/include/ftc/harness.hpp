#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ftc/algorithms.hpp"
#include "ftc/metrics.hpp"
#include "ftc/topology.hpp"

namespace ftc {

// Average-consensus simulation: Gaussian x_i^(0) (d coordinates), pure
// mixing x <- W^(k mod tau) applied each round, consensus error measured
// against the initial mean. The trace carries only iter,consensus_error.
MetricsTrace run_consensus_sim(GraphFamily family, int n, int iters, std::uint64_t seed,
                               int d = 10, int de_bruijn_base = 0);

struct OptimizeArm {
  std::string label;         // file stem, e.g. "gt-ft_one-peer-exp_det"
  Algorithm algorithm;
  GraphFamily family;
  double sigma2;
};

struct PresetPlan {
  std::string name;   // consensus | optimize-exp | optimize-cuboid | optimize-debruijn
  std::string scale;  // paper | desk
  // consensus arms: (family, n); optimize arms share one problem size
  std::vector<std::pair<GraphFamily, int>> consensus_arms;
  std::vector<OptimizeArm> optimize_arms;
  int n = 0, m = 0, d = 0;
  double delta = 10.0, mu = 0.1, alpha = 1e-4;
  long iters = 0;
};

PresetPlan make_preset_plan(const std::string& name, const std::string& scale);

// Runs every arm of the preset and writes one CSV per arm into out_dir.
// Returns the written file names in emission order.
std::vector<std::string> run_preset(const std::string& name, const std::string& scale,
                                    std::uint64_t seed, const std::filesystem::path& out_dir);

// Builds the topology an algorithm arm uses: GtStatic coerces a dynamic
// family to its static counterpart (length-1 sequence).
TopologySequence topology_for(Algorithm algorithm, GraphFamily family, int n,
                              int de_bruijn_base = 0);

}  // namespace ftc
