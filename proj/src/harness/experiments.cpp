#include "spie/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "spie/envs/grid.hpp"

namespace spie::harness {

using agents::AgentConfig;
using agents::FixedRepresentations;
using agents::RunBudget;
using intrinsic::IntrinsicKind;

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

bool is_grid_name(const std::string& env) {
  const auto& names = envs::grid_names();
  return std::find(names.begin(), names.end(), env) != names.end();
}

std::vector<double> as_doubles(const std::vector<RunRecord>& runs, const std::function<double(const RunRecord&)>& f) {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& r : runs) out.push_back(f(r));
  return out;
}

CurveResult episode_curves(const AgentConfig& config, std::vector<RunRecord> runs) {
  CurveResult out;
  out.agent = config.name;
  out.fingerprint = config.fingerprint();
  std::vector<std::vector<double>> lengths, returns;
  for (const auto& r : runs) {
    std::vector<double> len, ret;
    for (const auto& e : r.episodes) {
      len.push_back(static_cast<double>(e.length));
      ret.push_back(e.ret);
    }
    lengths.push_back(std::move(len));
    returns.push_back(std::move(ret));
  }
  out.length = mean_series(lengths);
  out.ret = mean_series(returns);
  out.runs = std::move(runs);
  return out;
}

}  // namespace

std::unique_ptr<envs::TabularEnvironment> make_environment(const std::string& env, ExperimentKind kind,
                                                           int switch_period) {
  if (env == "riverswim") return std::make_unique<envs::MdpEnvironment>(envs::riverswim_spec());
  if (env == "sixarms") return std::make_unique<envs::MdpEnvironment>(envs::sixarms_spec());
  if (is_grid_name(env)) {
    const auto spec = envs::named_grid(env, switch_period);
    switch (kind) {
      case ExperimentKind::kGoal:
        return std::make_unique<envs::MdpEnvironment>(envs::build_grid(spec, envs::GridTask::kGoal, 0));
      case ExperimentKind::kNmrdp:
        return std::make_unique<envs::NmrdpEnvironment>(spec);
      default:
        return std::make_unique<envs::MdpEnvironment>(envs::build_grid(spec, envs::GridTask::kExploration));
    }
  }
  return std::make_unique<envs::MdpEnvironment>(envs::load_mdp_table(env));
}

std::vector<RunRecord> run_seeds(const envs::TabularEnvironment& proto, const AgentConfig& config,
                                 const RunBudget& budget, std::size_t n_seeds, std::uint64_t base_seed,
                                 const FixedRepresentations* fixed) {
  config.validate();
  budget.validate();
  return parallel_map<RunRecord>(n_seeds, [&](std::size_t i) {
    auto env = proto.clone();
    AgentConfig c = config;
    c.seed = base_seed + i;
    return agents::run_agent(*env, c, budget, fixed);
  });
}

std::optional<FixedRepresentations> fixed_for(const envs::DiscreteMdpSpec& mdp, const AgentConfig& config) {
  if (!config.intrinsic.frozen) return std::nullopt;
  return agents::diffusion_representations(mdp, config, intrinsic::needs_pr(config.intrinsic.kind));
}

// ---- coverage ----

AgentConfig coverage_variant(AgentConfig config, const CoverageOptions& options) {
  const auto kind = config.intrinsic.kind;
  if (options.frozen_repr && kind != IntrinsicKind::kNone) {
    config.intrinsic.frozen = true;
    config.name += " (fixed)";
  }
  if (options.optimistic && (kind == IntrinsicKind::kSR || kind == IntrinsicKind::kFR)) {
    config.q_init = agents::optimistic_init(config, kind);
    config.name += " (optimistic)";
  }
  return config;
}

std::vector<CoverageResult> coverage_experiment(const envs::GridSpec& grid, const std::vector<AgentConfig>& configs,
                                                const CoverageOptions& options) {
  if (options.budget <= 0) throw std::invalid_argument("coverage budget must be positive");
  if (options.seeds == 0) throw std::invalid_argument("coverage needs at least one seed");
  const envs::MdpEnvironment env(envs::build_grid(grid, envs::GridTask::kExploration));
  RunBudget budget;
  budget.steps = options.budget;

  std::vector<CoverageResult> results;
  for (const auto& base : configs) {
    const AgentConfig config = coverage_variant(base, options);
    const auto fixed = fixed_for(env.mdp(), config);
    auto runs = run_seeds(env, config, budget, options.seeds, options.base_seed, fixed ? &*fixed : nullptr);

    CoverageResult r;
    r.agent = config.name;
    r.fingerprint = config.fingerprint();
    std::vector<double> m50, m90, m99;
    std::vector<std::vector<double>> curves;
    for (const auto& run : runs) {
      const auto m = coverage_milestones(run);
      r.milestones.push_back(m);
      m50.push_back(static_cast<double>(encode_milestone(m.steps_to_50, options.budget)));
      m90.push_back(static_cast<double>(encode_milestone(m.steps_to_90, options.budget)));
      m99.push_back(static_cast<double>(encode_milestone(m.steps_to_99, options.budget)));
      const auto c = run.coverage_curve();
      curves.emplace_back(c.begin(), c.end());
    }
    r.steps_to_50 = aggregate(m50);
    r.steps_to_90 = aggregate(m90);
    r.steps_to_99 = aggregate(m99);
    r.curve = mean_series(curves);
    r.runs = std::move(runs);
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<AgentConfig> grid_agents() {
  return {load_agent_preset("grid_sarsa"), load_agent_preset("grid_sarsa_sr"),
          load_agent_preset("grid_sarsa_fr"), load_agent_preset("grid_sarsa_srr")};
}

// ---- hard exploration ----

std::vector<HardExpResult> hard_exploration_eval(const std::string& task, const std::vector<AgentConfig>& configs,
                                                 long steps, std::size_t seeds, std::uint64_t base_seed) {
  if (steps <= 0) throw std::invalid_argument("step budget must be positive");
  if (seeds == 0) throw std::invalid_argument("need at least one seed");
  const auto env = make_environment(task, ExperimentKind::kHardExp);
  RunBudget budget;
  budget.steps = steps;
  budget.log_steps = false;
  std::vector<HardExpResult> out;
  for (const auto& config : configs) {
    const auto fixed = fixed_for(env->mdp(), config);
    const auto runs = run_seeds(*env, config, budget, seeds, base_seed, fixed ? &*fixed : nullptr);
    HardExpResult r;
    r.agent = config.name;
    r.fingerprint = config.fingerprint();
    r.totals = as_doubles(runs, [](const RunRecord& run) { return run.total_extrinsic; });
    r.stat = aggregate(r.totals);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AgentConfig> table1_agents(const std::string& task) {
  std::vector<AgentConfig> out;
  for (const char* id : {"sarsa", "sarsa_sr", "sarsa_fr", "sarsa_srr", "sarsa_sr_pr", "sarsa_srr_a", "sarsa_srr_b"}) {
    out.push_back(load_agent_preset(task + "_" + id));
  }
  return out;
}

std::vector<AgentConfig> fixed_agents(const std::string& task) {
  std::vector<AgentConfig> out;
  for (const char* id : {"sarsa_sr_fixed", "sarsa_fr_fixed", "sarsa_srr_fixed"}) {
    out.push_back(load_agent_preset(task + "_" + id));
  }
  return out;
}

namespace {

std::string with_commas(double value) {
  const long long v = std::llround(value);
  std::string digits = std::to_string(v < 0 ? -v : v);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return v < 0 ? "-" + out : out;
}

}  // namespace

std::string table1_report(const std::string& task, const std::vector<HardExpResult>& results) {
  std::vector<std::string> head{""}, means{task}, errs{""};
  for (const auto& r : results) {
    head.push_back(r.agent);
    means.push_back(with_commas(r.stat.mean));
    errs.push_back("(" + with_commas(r.stat.std_error) + ")");
  }
  std::vector<std::size_t> width(head.size(), 0);
  for (const auto* row : {&head, &means, &errs}) {
    for (std::size_t i = 0; i < row->size(); ++i) width[i] = std::max(width[i], (*row)[i].size());
  }
  std::ostringstream os;
  for (const auto* row : {&head, &means, &errs}) {
    for (std::size_t i = 0; i < row->size(); ++i) {
      os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << (*row)[i];
    }
    os << '\n';
  }
  return os.str();
}

// ---- goal tasks ----

GoalTaskResult goal_task_eval(const envs::GridSpec& grid, const std::vector<AgentConfig>& configs,
                              const EpisodeOptions& options) {
  if (options.episodes <= 0 || options.seeds == 0) throw std::invalid_argument("goal task needs episodes and seeds");
  const envs::GridLayout layout(grid);
  const auto distance = layout.shortest_path(layout.start_state(), layout.goal_state(0));
  if (!distance) throw std::invalid_argument("goal " + envs::to_string(grid.goal_schedule.front().cell) + " is unreachable");
  const envs::MdpEnvironment env(envs::build_grid(grid, envs::GridTask::kGoal, 0));
  RunBudget budget;
  budget.episodes = options.episodes;
  budget.max_episode_steps = options.max_episode_steps;
  budget.log_steps = false;

  GoalTaskResult out;
  out.reference = *distance;
  for (const auto& config : configs) {
    const auto fixed = fixed_for(env.mdp(), config);
    auto runs = run_seeds(env, config, budget, options.seeds, options.base_seed, fixed ? &*fixed : nullptr);
    out.agents.push_back(episode_curves(config, std::move(runs)));
  }
  return out;
}

double mean_recovery(const RunRecord& run, const envs::NmrdpEnvironment& env, long episodes, double tolerance) {
  const auto& layout = env.layout();
  const auto n = std::min<long>(episodes, static_cast<long>(run.episodes.size()));
  double sum = 0.0;
  long phases = 0;
  long e = 1;
  while (e < n) {
    if (env.goal_for_episode(e) == env.goal_for_episode(e - 1)) {
      ++e;
      continue;
    }
    const std::size_t goal = env.goal_for_episode(e);
    const double limit = tolerance * *layout.shortest_path(layout.start_state(), layout.goal_state(goal));
    long end = e;
    while (end < n && env.goal_for_episode(end) == goal) ++end;
    long recovery = end - e;
    for (long k = e; k < end; ++k) {
      const auto& ep = run.episodes[static_cast<std::size_t>(k)];
      if (ep.terminated && static_cast<double>(ep.length) <= limit) {
        recovery = k - e;
        break;
      }
    }
    sum += static_cast<double>(recovery);
    ++phases;
    e = end;
  }
  return phases ? sum / static_cast<double>(phases) : 0.0;
}

NmrdpResult nmrdp_eval(const envs::GridSpec& grid, const std::vector<AgentConfig>& configs,
                       const EpisodeOptions& options) {
  if (options.episodes <= 0 || options.seeds == 0) throw std::invalid_argument("NMRDP eval needs episodes and seeds");
  envs::GridSpec spec = grid;
  for (auto& g : spec.goal_schedule) g.episodes = options.switch_period;
  const envs::NmrdpEnvironment env(spec);
  const auto& layout = env.layout();

  NmrdpResult out;
  for (long e = 1; e < options.episodes; ++e) {
    if (env.goal_for_episode(e) != env.goal_for_episode(e - 1)) out.switch_episodes.push_back(e);
  }
  for (std::size_t g = 0; g < spec.goal_schedule.size(); ++g) {
    out.phase_reference.push_back(*layout.shortest_path(layout.start_state(), layout.goal_state(g)));
  }
  RunBudget budget;
  budget.episodes = options.episodes;
  budget.max_episode_steps = options.max_episode_steps;
  budget.log_steps = false;
  for (const auto& config : configs) {
    auto runs = run_seeds(env, config, budget, options.seeds, options.base_seed);
    std::vector<double> rec;
    for (const auto& run : runs) rec.push_back(mean_recovery(run, env, options.episodes));
    out.recovery_stat.push_back(aggregate(rec));
    out.recovery.push_back(std::move(rec));
    out.agents.push_back(episode_curves(config, std::move(runs)));
  }
  return out;
}

// ---- sweeps ----

std::vector<AgentConfig> cartesian_grid(const KeyValueConfig& base, const std::vector<SweepAxis>& axes) {
  std::vector<KeyValueConfig> grid{base};
  for (const auto& axis : axes) {
    if (axis.values.empty()) throw std::invalid_argument("sweep axis '" + axis.key + "' has no values");
    std::vector<KeyValueConfig> next;
    for (const auto& partial : grid) {
      for (const auto& v : axis.values) {
        KeyValueConfig kv = partial;
        kv.set(axis.key, v);
        next.push_back(std::move(kv));
      }
    }
    grid = std::move(next);
  }
  std::vector<AgentConfig> out;
  out.reserve(grid.size());
  for (const auto& kv : grid) out.push_back(parse_experiment_config(kv).agent);
  return out;
}

std::vector<SweepAxis> tabular_sweep_axes() {
  return {{"alpha", {"0.005", "0.05", "0.1", "0.25", "0.5"}},
          {"eta", {"0.005", "0.05", "0.1", "0.25", "0.5"}},
          {"gamma_repr", {"0.5", "0.8", "0.9", "0.95", "0.99"}},
          {"beta", {"1", "10", "50", "100", "1000", "10000"}},
          {"epsilon", {"0.01", "0.05", "0.1"}}};
}

SweepResult sweep(const std::vector<AgentConfig>& grid, const SeedMetric& metric, std::size_t seeds,
                  std::uint64_t base_seed) {
  if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
  if (seeds == 0) throw std::invalid_argument("sweep needs at least one seed");
  const std::size_t total = grid.size() * seeds;
  const auto values = parallel_map<double>(total, [&](std::size_t i) {
    return metric(grid[i / seeds], base_seed + i % seeds);
  });
  SweepResult out;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    SweepRow row;
    row.config = grid[c];
    row.per_seed.assign(values.begin() + static_cast<long>(c * seeds),
                        values.begin() + static_cast<long>((c + 1) * seeds));
    row.stat = aggregate(row.per_seed);
    if (c == 0 || row.stat.mean > out.rows[out.best].stat.mean) out.best = c;
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---- MountainCar ----

std::vector<MountainCarResult> mountaincar_eval(const std::vector<linfa::LinearAgentConfig>& configs, long episodes,
                                                std::size_t seeds, std::uint64_t base_seed, long max_episode_steps) {
  if (episodes <= 0 || seeds == 0) throw std::invalid_argument("MountainCar eval needs episodes and seeds");
  std::vector<MountainCarResult> out;
  for (const auto& config : configs) {
    config.validate();
    const auto runs = parallel_map<RunRecord>(seeds, [&](std::size_t i) {
      linfa::LinearAgentConfig c = config;
      c.seed = base_seed + i;
      return linfa::run_linear_q(c, episodes, max_episode_steps);
    });
    MountainCarResult r;
    r.agent = config.name;
    r.fingerprint = config.fingerprint();
    std::vector<std::vector<double>> lengths, returns;
    const long tail = std::min<long>(100, episodes);
    for (const auto& run : runs) {
      const long first = linfa::first_success_episode(run);
      r.first_success.push_back(static_cast<double>(first < 0 ? episodes : first));
      double s = 0.0;
      for (long e = episodes - tail; e < episodes; ++e) s += run.episodes[static_cast<std::size_t>(e)].ret;
      r.final_return.push_back(s / static_cast<double>(tail));
      std::vector<double> len, ret;
      for (const auto& e : run.episodes) {
        len.push_back(static_cast<double>(e.length));
        ret.push_back(e.ret);
      }
      lengths.push_back(std::move(len));
      returns.push_back(std::move(ret));
    }
    r.first_success_stat = aggregate(r.first_success);
    r.final_return_stat = aggregate(r.final_return);
    r.length = mean_series(lengths);
    r.ret = mean_series(returns);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<linfa::LinearAgentConfig> mountaincar_agents() {
  return {load_linear_preset("mountaincar_sf_pf"), load_linear_preset("mountaincar_sf")};
}

}  // namespace spie::harness
