#pragma once

#include <optional>
#include <span>
#include <vector>

#include "spie/harness/run_record.hpp"

namespace spie::harness {

struct AggregateStat {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(n_seeds); 0 for a single seed
  std::size_t n_seeds = 0;
};

// Throws std::invalid_argument on an empty sample.
AggregateStat aggregate(std::span<const double> values);

// Steps until ceil(pct * |S| / 100) distinct states had been visited, counting
// the start state at t = 0. Empty when not reached within the run.
struct CoverageMilestones {
  std::optional<long> steps_to_50;
  std::optional<long> steps_to_90;
  std::optional<long> steps_to_99;
};

std::size_t coverage_threshold(int percent, std::size_t n_states);
std::optional<long> steps_to_coverage(const RunRecord& record, int percent);
CoverageMilestones coverage_milestones(const RunRecord& record);

// "Not reached" is reported as budget + 1.
inline long encode_milestone(const std::optional<long>& steps, long budget) {
  return steps ? *steps : budget + 1;
}

// Elementwise mean and standard error of equally long series.
struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;
};
Series mean_series(const std::vector<std::vector<double>>& runs);

}  // namespace spie::harness
