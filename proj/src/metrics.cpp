#include "ftc/metrics.hpp"

#include <fstream>
#include <ostream>

#include "ftc/matkit.hpp"

namespace ftc {

void write_metrics_csv(const MetricsTrace& trace, std::ostream& out) {
  if (trace.consensus_only) {
    out << "iter,consensus_error\n";
    for (const auto& r : trace.rows)
      out << r.iter << ',' << format_double17(r.consensus_err) << '\n';
    return;
  }
  out << "iter,objective,grad_mean_sq,grad_at_mean_sq,consensus_error\n";
  for (const auto& r : trace.rows) {
    out << r.iter << ',' << format_double17(r.objective) << ',' << format_double17(r.grad_mean_sq)
        << ',' << format_double17(r.grad_at_mean_sq) << ',' << format_double17(r.consensus_err)
        << '\n';
  }
}

void write_metrics_csv(const MetricsTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_metrics_csv(trace, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ftc
