#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "spie/agents/sarsa.hpp"
#include "spie/envs/environment.hpp"
#include "spie/harness/config_file.hpp"
#include "spie/harness/stats.hpp"
#include "spie/linfa/linear_q.hpp"

namespace spie::harness {

// Runs fn(0) .. fn(n-1) on worker threads and returns the results in index
// order, so the output never depends on scheduling. workers = 0 picks the
// hardware concurrency.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t workers = 0);

template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn, std::size_t workers = 0) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); }, workers);
  return out;
}

// Environment named by an experiment: a grid name (exploration, goal or
// scheduled-goal variant by `kind`), "riverswim", "sixarms", or a path to an
// MDP table file.
std::unique_ptr<envs::TabularEnvironment> make_environment(const std::string& env, ExperimentKind kind,
                                                           int switch_period = 30);

// Run i uses seed base_seed + i.
std::vector<RunRecord> run_seeds(const envs::TabularEnvironment& proto, const agents::AgentConfig& config,
                                 const agents::RunBudget& budget, std::size_t n_seeds,
                                 std::uint64_t base_seed,
                                 const agents::FixedRepresentations* fixed = nullptr);

// Frozen agents get the analytic random-walk representations of `mdp`.
std::optional<agents::FixedRepresentations> fixed_for(const envs::DiscreteMdpSpec& mdp,
                                                      const agents::AgentConfig& config);

// ---- pure-exploration coverage ----

struct CoverageOptions {
  long budget = 8000;
  std::size_t seeds = 10;
  std::uint64_t base_seed = 0;
  bool frozen_repr = false;  // replace learned SR/FR/PR with the diffusion matrices
  bool optimistic = false;   // q_init = 1 / (1 - gamma) for SR and FR agents
};

struct CoverageResult {
  std::string agent;
  std::string fingerprint;
  std::vector<CoverageMilestones> milestones;  // per seed
  // Milestone statistics with "not reached" counted as budget + 1.
  AggregateStat steps_to_50, steps_to_90, steps_to_99;
  Series curve;  // mean distinct states after t steps, t = 0..budget
  std::vector<RunRecord> runs;
};

// Apply the frozen / optimistic switches to a config.
agents::AgentConfig coverage_variant(agents::AgentConfig config, const CoverageOptions& options);

std::vector<CoverageResult> coverage_experiment(const envs::GridSpec& grid,
                                                const std::vector<agents::AgentConfig>& configs,
                                                const CoverageOptions& options = {});

// The grid tuple (0.1, 0.1, 0.95, 0.95, 1.0, 0.1) for SARSA, SARSA-SR,
// SARSA-FR and SARSA-SRR.
std::vector<agents::AgentConfig> grid_agents();

// ---- RiverSwim / SixArms ----

struct HardExpResult {
  std::string agent;
  std::string fingerprint;
  std::vector<double> totals;  // cumulative extrinsic reward per seed
  AggregateStat stat;
};

std::vector<HardExpResult> hard_exploration_eval(const std::string& task,
                                                 const std::vector<agents::AgentConfig>& configs,
                                                 long steps = 5000, std::size_t seeds = 100,
                                                 std::uint64_t base_seed = 0);

// Presets for SARSA, SARSA-SR, SARSA-FR, SARSA-SRR, SARSA-SR-PR,
// SARSA-SRR(a), SARSA-SRR(b) on `task`; `fixed` selects the frozen rows.
std::vector<agents::AgentConfig> table1_agents(const std::string& task);
std::vector<agents::AgentConfig> fixed_agents(const std::string& task);

// Mean with the standard error in parentheses, one column per agent.
std::string table1_report(const std::string& task, const std::vector<HardExpResult>& results);

// ---- goal tasks ----

struct EpisodeOptions {
  long episodes = 100;
  std::size_t seeds = 10;
  std::uint64_t base_seed = 0;
  long max_episode_steps = 5000;
  int switch_period = 30;
};

struct CurveResult {
  std::string agent;
  std::string fingerprint;
  Series length;  // per-episode mean length and standard error
  Series ret;     // per-episode mean return and standard error
  std::vector<RunRecord> runs;
};

struct GoalTaskResult {
  int reference = 0;  // BFS distance start -> goal
  std::vector<CurveResult> agents;
};

GoalTaskResult goal_task_eval(const envs::GridSpec& grid, const std::vector<agents::AgentConfig>& configs,
                              const EpisodeOptions& options = {});

struct NmrdpResult {
  std::vector<long> switch_episodes;  // first episode of each new phase
  std::vector<int> phase_reference;   // BFS distance per scheduled goal
  std::vector<CurveResult> agents;
  // Per agent: per-seed mean recovery and its aggregate.
  std::vector<std::vector<double>> recovery;
  std::vector<AggregateStat> recovery_stat;
};

// Episodes into a phase before the first one whose length is within
// 1.5x the BFS distance; the phase length when that never happens.
double mean_recovery(const RunRecord& run, const envs::NmrdpEnvironment& env, long episodes,
                     double tolerance = 1.5);

NmrdpResult nmrdp_eval(const envs::GridSpec& grid, const std::vector<agents::AgentConfig>& configs,
                       const EpisodeOptions& options = {});

// ---- sweeps ----

// Per-seed scalar metric for one config; larger is better.
using SeedMetric = std::function<double(const agents::AgentConfig&, std::uint64_t seed)>;

struct SweepRow {
  agents::AgentConfig config;
  std::vector<double> per_seed;
  AggregateStat stat;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::size_t best = 0;  // first row with the largest mean
};

struct SweepAxis {
  std::string key;  // a config key such as "alpha"
  std::vector<std::string> values;
};

// Cartesian product of the axes applied over `base`, first axis slowest.
std::vector<agents::AgentConfig> cartesian_grid(const KeyValueConfig& base, const std::vector<SweepAxis>& axes);
// alpha, eta, gamma_repr, beta, epsilon over the published sweep sets.
std::vector<SweepAxis> tabular_sweep_axes();

SweepResult sweep(const std::vector<agents::AgentConfig>& grid, const SeedMetric& metric,
                  std::size_t seeds, std::uint64_t base_seed = 0);

// ---- MountainCar ----

struct MountainCarResult {
  std::string agent;
  std::string fingerprint;
  std::vector<double> first_success;  // 0-based episode; `episodes` when never reached
  std::vector<double> final_return;   // mean return over the last 100 episodes
  AggregateStat first_success_stat;
  AggregateStat final_return_stat;
  Series ret;
  Series length;
};

std::vector<MountainCarResult> mountaincar_eval(const std::vector<linfa::LinearAgentConfig>& configs,
                                                long episodes = 1000, std::size_t seeds = 10,
                                                std::uint64_t base_seed = 0,
                                                long max_episode_steps = linfa::kMountainCarEpisodeCap);

std::vector<linfa::LinearAgentConfig> mountaincar_agents();

}  // namespace spie::harness
