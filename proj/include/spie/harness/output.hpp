#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "spie/harness/experiments.hpp"

namespace spie::harness {

// Writes to a sibling temp file and renames it over `path`, creating parent
// directories. Throws std::runtime_error when the path is not writable.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Leading "# key=value" comment lines shared by every CSV of an experiment.
struct OutputHeader {
  std::string experiment;
  std::string env;
  std::uint64_t base_seed = 0;
  std::size_t seeds = 0;
  std::vector<std::pair<std::string, std::string>> extra;

  std::string render() const;
};

// Shortest round-tripping decimal form, so reruns produce identical bytes.
std::string format_number(double value);
// Lowercase alphanumerics and '_' only, for file names.
std::string slug(const std::string& name);

std::string step_log_csv(const OutputHeader& header, const RunRecord& run);
std::string episode_log_csv(const OutputHeader& header, const RunRecord& run);

struct AggregateRow {
  std::string agent;
  std::string metric;
  AggregateStat stat;
};
// Columns: agent, metric, mean, stderr, n_seeds.
std::string aggregate_csv(const OutputHeader& header, const std::vector<AggregateRow>& rows);

// Columns: agent, series, x, y, err.
struct NamedSeries {
  std::string agent;
  std::string series;
  const Series* data;
};
std::string series_csv(const OutputHeader& header, const std::vector<NamedSeries>& series);

// Per-run logs under <dir>/runs/<agent>/seed_<n>_{steps,episodes}.csv.
void emit_runs(const std::filesystem::path& dir, const OutputHeader& header, const std::string& agent,
               const std::vector<RunRecord>& runs);

void emit_coverage(const std::filesystem::path& dir, OutputHeader header, const std::vector<CoverageResult>& results,
                   long budget);
void emit_hardexp(const std::filesystem::path& dir, const OutputHeader& header,
                  const std::vector<HardExpResult>& results);
void emit_goal(const std::filesystem::path& dir, OutputHeader header, const GoalTaskResult& result);
void emit_nmrdp(const std::filesystem::path& dir, OutputHeader header, const NmrdpResult& result);
void emit_mountaincar(const std::filesystem::path& dir, OutputHeader header,
                      const std::vector<MountainCarResult>& results, long episodes);
void emit_sweep(const std::filesystem::path& dir, const OutputHeader& header, const SweepResult& result);

}  // namespace spie::harness
