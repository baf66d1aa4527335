// ftc: finite-time consensus topology toolkit and decentralized
// optimization simulator. Subcommands: gen-topology, verify, spectral,
// consensus, optimize, preset.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ftc/algorithms.hpp"
#include "ftc/harness.hpp"
#include "ftc/matkit.hpp"
#include "ftc/metrics.hpp"
#include "ftc/optim.hpp"
#include "ftc/topology.hpp"

namespace {

constexpr const char* kFamilyHelp =
    "one of: one-peer-exp, one-peer-hypercube, p-peer-hypercuboid, de-bruijn, "
    "static-exp, static-hypercuboid, fully-connected";

ftc::GraphFamily parse_family(const std::string& name) {
  auto f = ftc::family_from_name(name);
  if (!f) throw CLI::ValidationError("--family", "unknown family '" + name + "'");
  return *f;
}

struct ProblemFlags {
  int m = 500;
  int d = 20;
  double delta = 10.0;
  double mu = 0.1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--m", m, "rows per agent")->capture_default_str();
    cmd->add_option("--d", d, "problem dimension")->capture_default_str();
    cmd->add_option("--delta", delta, "observation noise scale")->capture_default_str();
    cmd->add_option("--mu", mu, "nonconvex regularization weight")->capture_default_str();
  }
};

// Flat key=value config support: `--config FILE` anywhere after the
// subcommand loads defaults for that subcommand; explicit CLI flags win.
// Implemented by injecting the file's pairs as tokens right after the
// subcommand name, with take-last multi-option policy on every option.
std::vector<std::string> merge_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  std::size_t at = args.size();
  std::size_t span = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      at = i;
      span = 2;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      at = i;
      span = 1;
      break;
    }
  }
  if (path.empty()) return args;
  args.erase(args.begin() + static_cast<long>(at), args.begin() + static_cast<long>(at + span));

  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read config file '" + path + "'");
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value == "false") {
      continue;
    } else {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  if (args.empty()) return extra;
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

void print_report(const ftc::TopologySequence& seq, const ftc::FtcReport& rep, double tol) {
  double stoch = 0.0;
  for (const auto& r : rep.stochastic) stoch = std::max(stoch, r.worst());
  std::cout << "family=" << ftc::family_name(seq.family) << " n=" << seq.n << " tau=" << seq.tau
            << " ftc_claimed=" << (seq.ftc_claimed ? "yes" : "no") << "\n"
            << "max stochastic residual: " << ftc::format_double17(stoch) << "\n"
            << "product residual:        " << ftc::format_double17(rep.product_residual) << "\n"
            << "residual-form norm:      " << ftc::format_double17(rep.residual_form) << "\n"
            << "FTC: " << (rep.pass ? "PASS" : "FAIL") << " (tol " << tol << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-time consensus topologies and gradient tracking"};
  app.require_subcommand(1);

  std::string family_name;
  int n = 8;
  int index_l = 0;
  int debruijn_p = 0;
  std::string out_path;
  double tol = 1e-12;
  bool static_flag = false;
  long iters = 30;
  std::uint64_t seed = 0;

  const auto with_config = [](CLI::App* cmd) {
    // handled by merge_config_args; registered here for the help text
    cmd->add_option("--config")
        ->description("flat key=value config file; explicit flags take precedence")
        ->type_name("FILE");
    return cmd;
  };

  auto* gen = with_config(app.add_subcommand("gen-topology", "write one mixing matrix as CSV"));
  gen->add_option("--family", family_name, kFamilyHelp)->required();
  gen->add_option("--n", n, "number of agents")->required();
  gen->add_option("--index", index_l, "sequence position l")->capture_default_str();
  gen->add_option("--p", debruijn_p, "de Bruijn base (default: smallest)")->capture_default_str();
  gen->add_option("--out", out_path, "output CSV path")->required();

  auto* verify = with_config(app.add_subcommand("verify", "check the finite-time consensus property"));
  verify->add_option("--family", family_name, kFamilyHelp)->required();
  verify->add_option("--n", n, "number of agents")->required();
  verify->add_option("--tol", tol, "residual tolerance")->capture_default_str();
  verify->add_option("--p", debruijn_p, "de Bruijn base (default: smallest)");

  auto* spectral = with_config(app.add_subcommand("spectral", "spectral deviation rho = ||W - J||_2"));
  spectral->add_option("--family", family_name, kFamilyHelp)->required();
  spectral->add_option("--n", n, "number of agents")->required();
  spectral->add_flag("--static", static_flag, "use the family's static variant");
  spectral->add_option("--p", debruijn_p, "de Bruijn base (default: smallest)");

  auto* consensus = with_config(app.add_subcommand("consensus", "average-consensus simulation"));
  consensus->add_option("--family", family_name, kFamilyHelp)->required();
  consensus->add_option("--n", n, "number of agents")->required();
  consensus->add_option("--iters", iters, "rounds to simulate")->required();
  consensus->add_option("--seed", seed, "root seed")->required();
  consensus->add_option("--out", out_path, "output CSV path")->required();
  consensus->add_option("--p", debruijn_p, "de Bruijn base (default: smallest)");

  std::string algo = "gt-ft";
  double alpha = 1e-4;
  double sigma2 = 0.0;
  bool warmup = false;
  std::string tuned;
  std::string x0 = "zero";
  std::string dump_path;
  ProblemFlags pf;
  auto* optimize = with_config(app.add_subcommand("optimize", "run one optimization arm"));
  optimize->add_option("--algo", algo, "gt-ft | gt-static | dgd")
      ->check(CLI::IsMember({"gt-ft", "gt-static", "dgd"}))
      ->capture_default_str();
  optimize->add_option("--family", family_name, kFamilyHelp)->required();
  optimize->add_option("--n", n, "number of agents")->required();
  optimize->add_option("--alpha", alpha, "stepsize")->capture_default_str();
  optimize->add_option("--sigma2", sigma2, "gradient noise variance")->capture_default_str();
  optimize->add_option("--iters", iters, "iterations T")->required();
  optimize->add_option("--seed", seed, "root seed")->required();
  optimize->add_flag("--warmup", warmup, "AllReduce warm-up for the first tau rounds");
  optimize->add_option("--tuned-stepsize", tuned, "cor5 | cor6: derive alpha from L, tau, n, T")
      ->check(CLI::IsMember({"cor5", "cor6"}));
  optimize->add_option("--out", out_path, "output CSV path")->required();
  optimize->add_option("--x0", x0, "zero | gaussian | shared-gaussian")
      ->check(CLI::IsMember({"zero", "gaussian", "shared-gaussian"}))
      ->capture_default_str();
  optimize->add_option("--dump-problem", dump_path, "also dump the problem data as CSV");
  optimize->add_option("--p", debruijn_p, "de Bruijn base (default: smallest)");
  pf.attach(optimize);

  std::string preset_name;
  std::string scale = "desk";
  std::string out_dir;
  auto* preset = with_config(app.add_subcommand("preset", "run a full experiment preset"));
  preset->add_option("--name", preset_name,
                     "consensus | optimize-exp | optimize-cuboid | optimize-debruijn")
      ->required()
      ->check(CLI::IsMember({"consensus", "optimize-exp", "optimize-cuboid", "optimize-debruijn"}));
  preset->add_option("--scale", scale, "paper | desk")
      ->check(CLI::IsMember({"paper", "desk"}))
      ->capture_default_str();
  preset->add_option("--seed", seed, "root seed")->required();
  preset->add_option("--out-dir", out_dir, "directory for the emitted CSV files")->required();

  try {
    // take-last lets config-injected tokens yield to explicit flags
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
      for (CLI::Option* opt : sub->get_options())
        opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::vector<std::string> args = merge_config_args(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      const auto family = parse_family(family_name);
      if (index_l < 0) throw std::invalid_argument("--index must be >= 0");
      const ftc::TopologySequence seq = ftc::build_sequence(family, n, debruijn_p);
      const auto& w = seq.matrices[static_cast<std::size_t>(index_l % seq.tau)];
      std::ofstream out(out_path);
      if (!out) throw std::runtime_error("cannot open " + out_path);
      ftc::write_matrix_csv(w.weights, out);
      if (!out.flush()) throw std::runtime_error("write failed for " + out_path);
      std::cout << "wrote " << seq.n << "x" << seq.n << " matrix (l=" << index_l % seq.tau
                << ", max degree " << w.max_degree << ") to " << out_path << "\n";
    } else if (*verify) {
      const auto family = parse_family(family_name);
      const ftc::TopologySequence seq = ftc::build_sequence(family, n, debruijn_p);
      print_report(seq, ftc::verify_ftc(seq, tol), tol);
    } else if (*spectral) {
      const auto family = parse_family(family_name);
      if (static_flag) {
        const auto w = ftc::static_variant(family, n, debruijn_p);
        std::cout << "static rho=" << ftc::format_double17(ftc::spectral_deviation(w.weights))
                  << "\n";
      } else {
        const ftc::TopologySequence seq = ftc::build_sequence(family, n, debruijn_p);
        for (const auto& w : seq.matrices)
          std::cout << "l=" << w.index_l
                    << " rho=" << ftc::format_double17(ftc::spectral_deviation(w.weights)) << "\n";
      }
    } else if (*consensus) {
      const auto family = parse_family(family_name);
      const ftc::MetricsTrace trace =
          ftc::run_consensus_sim(family, n, static_cast<int>(iters), seed, 10, debruijn_p);
      ftc::write_metrics_csv(trace, std::filesystem::path(out_path));
      std::cout << "wrote " << trace.rows.size() << " rows to " << out_path << "\n";
    } else if (*optimize) {
      const auto family = parse_family(family_name);
      const ftc::Algorithm algorithm = algo == "gt-ft"      ? ftc::Algorithm::GtFt
                                       : algo == "gt-static" ? ftc::Algorithm::GtStatic
                                                             : ftc::Algorithm::Dgd;
      const ftc::Problem problem = ftc::generate_problem(n, pf.m, pf.d, pf.delta, pf.mu, seed);
      if (!dump_path.empty()) {
        std::ofstream dump(dump_path);
        if (!dump) throw std::runtime_error("cannot open " + dump_path);
        ftc::dump_problem(problem, dump);
      }
      ftc::RunConfig cfg;
      cfg.algorithm = algorithm;
      cfg.topology = ftc::topology_for(algorithm, family, n, debruijn_p);
      cfg.iters = iters;
      cfg.sigma2 = sigma2;
      cfg.warmup = warmup;
      cfg.seed = seed;
      cfg.x0_mode = x0 == "zero"      ? ftc::X0Mode::Zero
                    : x0 == "gaussian" ? ftc::X0Mode::Gaussian
                                       : ftc::X0Mode::SharedGaussian;
      if (!tuned.empty()) {
        ftc::StepsizeTuning t;
        t.L = ftc::estimate_smoothness(problem);
        t.tau = cfg.topology.tau;
        t.n = n;
        t.T = iters;
        t.sigma2 = sigma2;
        t.variant = tuned == "cor5" ? ftc::StepsizeTuning::Variant::Cor5
                                    : ftc::StepsizeTuning::Variant::Cor6;
        cfg.alpha = ftc::tuned_stepsize(t);
        std::cout << "tuned alpha=" << ftc::format_double17(cfg.alpha)
                  << " (L=" << ftc::format_double17(t.L) << ")\n";
      } else {
        cfg.alpha = alpha;
      }
      const ftc::RunResult res = ftc::run(problem, cfg);
      ftc::write_metrics_csv(res.trace, std::filesystem::path(out_path));
      const auto& last = res.trace.rows.back();
      std::cout << "final iter=" << last.iter
                << " grad_at_mean_sq=" << ftc::format_double17(last.grad_at_mean_sq)
                << " consensus_err=" << ftc::format_double17(last.consensus_err) << "\n";
      if (algorithm != ftc::Algorithm::Dgd) {
        std::cout << "tracking-mean dev=" << ftc::format_double17(res.max_tracking_dev)
                  << " centroid dev=" << ftc::format_double17(res.max_centroid_dev) << "\n";
      }
    } else if (*preset) {
      const auto files = ftc::run_preset(preset_name, scale, seed, out_dir);
      for (const auto& f : files) std::cout << f << "\n";
      std::cout << "wrote " << files.size() << " files to " << out_dir << "\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
