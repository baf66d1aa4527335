#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace ftc {

struct MetricsRow {
  long iter = 0;
  double objective = 0.0;        // f(xbar)
  double grad_mean_sq = 0.0;     // || (1/n) sum_i grad f_i(x_i) ||^2
  double grad_at_mean_sq = 0.0;  // || grad f(xbar) ||^2
  double consensus_err = 0.0;    // (1/n) sum_i ||x_i - xbar||^2
};

struct MetricsTrace {
  std::vector<MetricsRow> rows;
  bool consensus_only = false;  // consensus runs emit only iter,consensus_error
};

void write_metrics_csv(const MetricsTrace& trace, std::ostream& out);
// Throws std::runtime_error on I/O failure.
void write_metrics_csv(const MetricsTrace& trace, const std::filesystem::path& path);

}  // namespace ftc
