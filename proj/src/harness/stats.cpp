#include "spie/harness/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace spie::harness {

AggregateStat aggregate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot aggregate an empty sample");
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  AggregateStat out;
  out.mean = mean;
  out.n_seeds = values.size();
  out.std_error = values.size() > 1 ? std::sqrt(sq / (n - 1.0)) / std::sqrt(n) : 0.0;
  return out;
}

std::size_t coverage_threshold(int percent, std::size_t n_states) {
  if (percent <= 0 || percent > 100) throw std::invalid_argument("coverage percent must lie in (0, 100]");
  const std::size_t p = static_cast<std::size_t>(percent);
  return (p * n_states + 99) / 100;
}

std::optional<long> steps_to_coverage(const RunRecord& record, int percent) {
  const std::size_t need = coverage_threshold(percent, record.n_states);
  if (record.initial_unique >= need) return 0L;
  for (const auto& row : record.steps) {
    if (row.unique_states >= need) return row.t;
  }
  return std::nullopt;
}

CoverageMilestones coverage_milestones(const RunRecord& record) {
  return {steps_to_coverage(record, 50), steps_to_coverage(record, 90), steps_to_coverage(record, 99)};
}

Series mean_series(const std::vector<std::vector<double>>& runs) {
  if (runs.empty()) throw std::invalid_argument("cannot average zero series");
  const std::size_t len = runs.front().size();
  for (const auto& r : runs) {
    if (r.size() != len) throw std::invalid_argument("series lengths differ");
  }
  Series out;
  out.x.resize(len);
  out.y.resize(len);
  out.err.resize(len);
  std::vector<double> column(runs.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t k = 0; k < runs.size(); ++k) column[k] = runs[k][i];
    const auto stat = aggregate(column);
    out.x[i] = static_cast<double>(i);
    out.y[i] = stat.mean;
    out.err[i] = stat.std_error;
  }
  return out;
}

}  // namespace spie::harness
