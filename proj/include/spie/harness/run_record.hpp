#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spie/common.hpp"

namespace spie::harness {

struct StepRow {
  long t = 0;  // 1-based step index
  StateId s = 0;
  ActionId a = 0;
  double r_ext = 0.0;
  double r_int = 0.0;  // unscaled intrinsic reward
  bool done = false;
  std::size_t unique_states = 0;  // distinct states seen so far, start included
};

struct EpisodeRow {
  long episode = 0;
  long length = 0;
  double ret = 0.0;  // undiscounted extrinsic return
  bool terminated = false;  // false when cut by a budget or step cap
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::size_t n_states = 0;
  std::size_t initial_unique = 1;  // distinct states at t = 0
  long total_steps = 0;
  double total_extrinsic = 0.0;
  std::vector<StepRow> steps;  // empty when step logging is off
  std::vector<EpisodeRow> episodes;

  // Distinct-state count after t steps, t = 0..total_steps.
  std::vector<std::size_t> coverage_curve() const;
};

// Equality of everything the environment and policy produced: states,
// actions, extrinsic rewards, termination flags, coverage, and episodes.
// The unscaled intrinsic column and the config fingerprint are not compared.
bool same_trajectory(const RunRecord& a, const RunRecord& b);

}  // namespace spie::harness
