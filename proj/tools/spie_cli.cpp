// Command-line front end: one subcommand per experiment protocol plus the
// acceptance checks.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spie/envs/grid.hpp"
#include "spie/harness/checks.hpp"
#include "spie/harness/experiments.hpp"
#include "spie/harness/output.hpp"

namespace fs = std::filesystem;
using namespace spie;
using harness::ExperimentKind;

namespace {

struct Common {
  std::string config;
  std::optional<std::size_t> seeds;
  std::uint64_t base_seed = 0;
  std::string out = "results";
  bool frozen_repr = false;
  bool optimistic = false;
  bool strict_pseudocode = false;
};

void add_common(CLI::App* app, Common& c, bool config_required = false) {
  auto* opt = app->add_option("--config", c.config, "experiment or agent config file");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  else opt->check(CLI::ExistingFile);
  app->add_option("--seeds", c.seeds, "number of seeds (overrides the config)")->check(CLI::PositiveNumber);
  app->add_option("--base-seed", c.base_seed, "seed of the first run; run i uses base + i");
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_flag("--frozen-repr", c.frozen_repr, "use the fixed random-walk SR/FR/PR instead of learning them");
  app->add_flag("--optimistic", c.optimistic, "optimistic Q initialization for SR and FR agents");
  app->add_flag("--strict-pseudocode", c.strict_pseudocode, "re-sample the action at each loop head");
}

envs::GridSpec grid_from(const std::string& env, int switch_period = 30) {
  if (fs::exists(env)) return envs::load_grid_map(env, fs::path(env).stem().string(), switch_period);
  return envs::named_grid(env, switch_period);
}

// Agents for a subcommand: the one in --config when given, else `defaults`.
struct Selection {
  std::vector<agents::AgentConfig> agents;
  std::optional<harness::ExperimentConfig> config;
};

Selection select_agents(const Common& c, std::vector<agents::AgentConfig> defaults) {
  Selection s;
  if (!c.config.empty()) {
    s.config = harness::load_experiment_config(c.config);
    s.agents = {s.config->agent};
  } else {
    s.agents = std::move(defaults);
  }
  for (auto& a : s.agents) {
    if (c.strict_pseudocode) a.strict_pseudocode = true;
    if (c.frozen_repr && a.intrinsic.kind != intrinsic::IntrinsicKind::kNone) a.intrinsic.frozen = true;
    if (c.optimistic) a.q_init = agents::optimistic_init(a, a.intrinsic.kind);
  }
  return s;
}

harness::OutputHeader header_for(const std::string& experiment, const std::string& env, std::uint64_t base,
                                 std::size_t seeds) {
  harness::OutputHeader h;
  h.experiment = experiment;
  h.env = env;
  h.base_seed = base;
  h.seeds = seeds;
  return h;
}

template <class T>
T pick(const std::optional<T>& cli, bool from_config, T config_value, T fallback) {
  if (cli) return *cli;
  return from_config && config_value ? config_value : fallback;
}

// ---- subcommands ----

int cmd_coverage(const Common& c, std::string env, std::optional<long> steps) {
  auto sel = select_agents(Common{c.config, c.seeds, c.base_seed, c.out, false, false, c.strict_pseudocode},
                           harness::grid_agents());
  harness::CoverageOptions opt;
  const bool cfg = sel.config.has_value();
  if (cfg) env = sel.config->experiment.env;
  opt.budget = pick<long>(steps, cfg, cfg ? sel.config->experiment.steps : 0, 8000);
  opt.seeds = pick<std::size_t>(c.seeds, cfg, cfg ? sel.config->experiment.seeds : 0, 10);
  opt.base_seed = c.base_seed;
  opt.frozen_repr = c.frozen_repr || (cfg && sel.config->experiment.frozen_repr);
  opt.optimistic = c.optimistic || (cfg && sel.config->experiment.optimistic);
  const auto results = harness::coverage_experiment(grid_from(env), sel.agents, opt);
  auto h = header_for("coverage", env, opt.base_seed, opt.seeds);
  if (opt.frozen_repr) h.extra.emplace_back("frozen_repr", "true");
  if (opt.optimistic) h.extra.emplace_back("optimistic", "true");
  harness::emit_coverage(c.out, h, results, opt.budget);
  for (const auto& r : results) {
    std::cout << r.agent << ": steps to 50/90/99% = " << r.steps_to_50.mean << " / " << r.steps_to_90.mean << " / "
              << r.steps_to_99.mean << "  (" << opt.budget + 1 << " = not reached)\n";
  }
  return 0;
}

int cmd_hardexp(const Common& c, std::string env, std::optional<long> steps) {
  const bool cfg_given = !c.config.empty();
  std::vector<agents::AgentConfig> defaults;
  if (!cfg_given) defaults = c.frozen_repr ? harness::fixed_agents(env) : harness::table1_agents(env);
  auto sel = select_agents(c, std::move(defaults));
  const bool cfg = sel.config.has_value();
  if (cfg) env = sel.config->experiment.env;
  const long budget = pick<long>(steps, cfg, cfg ? sel.config->experiment.steps : 0, 5000);
  const std::size_t seeds = pick<std::size_t>(c.seeds, cfg, cfg ? sel.config->experiment.seeds : 0, 100);
  const auto results = harness::hard_exploration_eval(env, sel.agents, budget, seeds, c.base_seed);
  auto h = header_for("hardexp", env, c.base_seed, seeds);
  h.extra.emplace_back("steps", std::to_string(budget));
  harness::emit_hardexp(c.out, h, results);
  std::cout << harness::table1_report(env, results);
  return 0;
}

int cmd_goal(const Common& c, std::string env, std::optional<long> episodes) {
  auto sel = select_agents(c, harness::grid_agents());
  const bool cfg = sel.config.has_value();
  if (cfg) env = sel.config->experiment.env;
  harness::EpisodeOptions opt;
  opt.episodes = pick<long>(episodes, cfg, cfg ? sel.config->experiment.episodes : 0, 100);
  opt.seeds = pick<std::size_t>(c.seeds, cfg, cfg ? sel.config->experiment.seeds : 0, 10);
  opt.base_seed = c.base_seed;
  if (cfg && sel.config->experiment.max_episode_steps > 0) opt.max_episode_steps = sel.config->experiment.max_episode_steps;
  const auto result = harness::goal_task_eval(grid_from(env), sel.agents, opt);
  harness::emit_goal(c.out, header_for("goal", env, opt.base_seed, opt.seeds), result);
  std::cout << "shortest path " << result.reference << '\n';
  for (const auto& a : result.agents) {
    std::cout << a.agent << ": final mean episode length " << a.length.y.back() << '\n';
  }
  return 0;
}

int cmd_nmrdp(const Common& c, std::string env, std::optional<long> episodes, int switch_period) {
  if (c.frozen_repr) throw std::invalid_argument("--frozen-repr is not available for the NMRDP task");
  auto sel = select_agents(c, harness::grid_agents());
  const bool cfg = sel.config.has_value();
  harness::EpisodeOptions opt;
  if (cfg) {
    env = sel.config->experiment.env;
    switch_period = sel.config->experiment.switch_period;
  }
  opt.episodes = pick<long>(episodes, cfg, cfg ? sel.config->experiment.episodes : 0, 150);
  opt.seeds = pick<std::size_t>(c.seeds, cfg, cfg ? sel.config->experiment.seeds : 0, 10);
  opt.base_seed = c.base_seed;
  opt.switch_period = switch_period;
  if (cfg && sel.config->experiment.max_episode_steps > 0) opt.max_episode_steps = sel.config->experiment.max_episode_steps;
  const auto result = harness::nmrdp_eval(grid_from(env, switch_period), sel.agents, opt);
  auto h = header_for("nmrdp", env, opt.base_seed, opt.seeds);
  h.extra.emplace_back("switch_period", std::to_string(switch_period));
  harness::emit_nmrdp(c.out, h, result);
  for (std::size_t i = 0; i < result.agents.size(); ++i) {
    std::cout << result.agents[i].agent << ": mean recovery " << result.recovery_stat[i].mean << " episodes ("
              << result.recovery_stat[i].std_error << ")\n";
  }
  return 0;
}

int cmd_mountaincar(const Common& c, std::optional<long> episodes, std::optional<long> cap) {
  std::vector<linfa::LinearAgentConfig> configs;
  std::optional<harness::ExperimentConfig> cfg_file;
  if (!c.config.empty()) {
    cfg_file = harness::load_experiment_config(c.config);
    if (cfg_file->experiment.kind != ExperimentKind::kMountainCar) {
      throw std::invalid_argument(c.config + ": not a mountaincar config");
    }
    configs = {cfg_file->linear};
  } else {
    configs = harness::mountaincar_agents();
  }
  const bool cfg = cfg_file.has_value();
  const long n_episodes = pick<long>(episodes, cfg, cfg ? cfg_file->experiment.episodes : 0, 1000);
  const long max_steps =
      pick<long>(cap, cfg, cfg ? cfg_file->experiment.max_episode_steps : 0, linfa::kMountainCarEpisodeCap);
  const std::size_t seeds = pick<std::size_t>(c.seeds, cfg, cfg ? cfg_file->experiment.seeds : 0, 10);
  const auto results = harness::mountaincar_eval(configs, n_episodes, seeds, c.base_seed, max_steps);
  auto h = header_for("mountaincar", "MountainCar", c.base_seed, seeds);
  h.extra.emplace_back("max_episode_steps", std::to_string(max_steps));
  harness::emit_mountaincar(c.out, h, results, n_episodes);
  for (const auto& r : results) {
    std::cout << r.agent << ": first success " << r.first_success_stat.mean << " (" << n_episodes
              << " = never), final-100 return " << r.final_return_stat.mean << '\n';
  }
  return 0;
}

// Larger is better for every sweep metric.
harness::SeedMetric sweep_metric(const harness::ExperimentSpec& ex) {
  switch (ex.kind) {
    case ExperimentKind::kHardExp:
    case ExperimentKind::kRun: {
      const long steps = ex.steps > 0 ? ex.steps : 5000;
      return [ex, steps](const agents::AgentConfig& config, std::uint64_t seed) {
        const auto proto = harness::make_environment(ex.env, ex.kind);
        agents::RunBudget budget;
        budget.steps = steps;
        budget.log_steps = false;
        agents::AgentConfig c = config;
        c.seed = seed;
        const auto fixed = harness::fixed_for(proto->mdp(), c);
        auto env = proto->clone();
        return agents::run_agent(*env, c, budget, fixed ? &*fixed : nullptr).total_extrinsic;
      };
    }
    case ExperimentKind::kCoverage: {
      const long steps = ex.steps > 0 ? ex.steps : 8000;
      return [ex, steps](const agents::AgentConfig& config, std::uint64_t seed) {
        const auto proto = harness::make_environment(ex.env, ex.kind);
        agents::RunBudget budget;
        budget.steps = steps;
        agents::AgentConfig c = config;
        c.seed = seed;
        const auto fixed = harness::fixed_for(proto->mdp(), c);
        auto env = proto->clone();
        const auto run = agents::run_agent(*env, c, budget, fixed ? &*fixed : nullptr);
        return -static_cast<double>(harness::encode_milestone(harness::steps_to_coverage(run, 90), steps));
      };
    }
    case ExperimentKind::kGoal:
    case ExperimentKind::kNmrdp: {
      const long episodes = ex.episodes > 0 ? ex.episodes : 100;
      const long cap = ex.max_episode_steps > 0 ? ex.max_episode_steps : 5000;
      return [ex, episodes, cap](const agents::AgentConfig& config, std::uint64_t seed) {
        const auto proto = harness::make_environment(ex.env, ex.kind, ex.switch_period);
        agents::RunBudget budget;
        budget.episodes = episodes;
        budget.max_episode_steps = cap;
        budget.log_steps = false;
        agents::AgentConfig c = config;
        c.seed = seed;
        auto env = proto->clone();
        const auto run = agents::run_agent(*env, c, budget);
        return -static_cast<double>(run.total_steps) / static_cast<double>(episodes);
      };
    }
    case ExperimentKind::kMountainCar: break;
  }
  throw std::invalid_argument("sweep supports the tabular experiments only");
}

std::vector<harness::SweepAxis> parse_axes(const std::vector<std::string>& specs) {
  std::vector<harness::SweepAxis> axes;
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("axis '" + spec + "' is not key=v1,v2,...");
    harness::SweepAxis axis{spec.substr(0, eq), {}};
    std::stringstream values(spec.substr(eq + 1));
    for (std::string v; std::getline(values, v, ',');) {
      if (!v.empty()) axis.values.push_back(v);
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

int cmd_sweep(const Common& c, const std::vector<std::string>& axis_specs) {
  auto base = harness::KeyValueConfig::load(c.config);
  if (c.strict_pseudocode) base.set("strict_pseudocode", "true");
  if (c.frozen_repr) base.set("frozen", "true");
  const auto ex = harness::parse_experiment_config(base).experiment;
  const auto axes = axis_specs.empty() ? harness::tabular_sweep_axes() : parse_axes(axis_specs);
  const auto grid = harness::cartesian_grid(base, axes);
  const std::size_t seeds = c.seeds ? *c.seeds : ex.seeds;
  const auto result = harness::sweep(grid, sweep_metric(ex), seeds, c.base_seed);
  auto h = header_for("sweep", ex.env, c.base_seed, seeds);
  h.extra.emplace_back("metric", ex.kind == ExperimentKind::kCoverage ? "-steps_to_90"
                                 : (ex.kind == ExperimentKind::kGoal || ex.kind == ExperimentKind::kNmrdp)
                                     ? "-mean_episode_length"
                                     : "total_extrinsic");
  harness::emit_sweep(c.out, h, result);
  std::cout << grid.size() << " configs; best (mean " << result.rows[result.best].stat.mean
            << "): " << result.rows[result.best].config.canonical() << '\n';
  return 0;
}

int cmd_run(const Common& c) {
  const auto cfg = harness::load_experiment_config(c.config);
  const auto& ex = cfg.experiment;
  Common sub = c;
  sub.config = c.config;
  switch (ex.kind) {
    case ExperimentKind::kCoverage: return cmd_coverage(sub, ex.env, std::nullopt);
    case ExperimentKind::kHardExp: return cmd_hardexp(sub, ex.env, std::nullopt);
    case ExperimentKind::kGoal: return cmd_goal(sub, ex.env, std::nullopt);
    case ExperimentKind::kNmrdp: return cmd_nmrdp(sub, ex.env, std::nullopt, ex.switch_period);
    case ExperimentKind::kMountainCar: return cmd_mountaincar(sub, std::nullopt, std::nullopt);
    case ExperimentKind::kRun: break;
  }
  auto sel = select_agents(c, {});
  const auto& agent = sel.agents.front();
  const auto proto = harness::make_environment(ex.env, ex.kind, ex.switch_period);
  agents::RunBudget budget;
  budget.steps = ex.steps;
  budget.episodes = ex.episodes;
  budget.max_episode_steps = ex.max_episode_steps;
  if (budget.steps == 0 && budget.episodes == 0) throw std::invalid_argument("run needs steps or episodes");
  const std::size_t seeds = c.seeds ? *c.seeds : ex.seeds;
  const std::uint64_t base = c.base_seed ? c.base_seed : ex.base_seed;
  const auto fixed = harness::fixed_for(proto->mdp(), agent);
  const auto runs = harness::run_seeds(*proto, agent, budget, seeds, base, fixed ? &*fixed : nullptr);
  const auto h = header_for("run", ex.env, base, seeds);
  harness::emit_runs(c.out, h, agent.name, runs);
  std::vector<double> totals, steps;
  for (const auto& r : runs) {
    totals.push_back(r.total_extrinsic);
    steps.push_back(static_cast<double>(r.total_steps));
  }
  harness::atomic_write(fs::path(c.out) / "aggregate.csv",
                        harness::aggregate_csv(h, {{agent.name, "total_extrinsic", harness::aggregate(totals)},
                                                   {agent.name, "total_steps", harness::aggregate(steps)}}));
  std::cout << agent.name << ": mean total extrinsic reward " << harness::aggregate(totals).mean << '\n';
  return 0;
}

int cmd_check(const std::vector<int>& ids) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (int i = 1; i <= harness::kCheckCount; ++i) todo.push_back(i);
  }
  int failed = 0;
  for (int id : todo) {
    const auto r = harness::run_check(id);
    std::cout << harness::format_check(r) << std::endl;
    if (!r.passed) ++failed;
  }
  std::cout << todo.size() - static_cast<std::size_t>(failed) << '/' << todo.size() << " passed\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Successor-predecessor intrinsic exploration experiments"};
  app.require_subcommand(1);

  Common run_c, sweep_c, cov_c, hard_c, goal_c, nmrdp_c, mc_c;
  std::string cov_env = "OF-small", hard_env = "riverswim", goal_env = "OF-small", nmrdp_env = "OF-small";
  std::optional<long> cov_steps, hard_steps, goal_episodes, nmrdp_episodes, mc_episodes, mc_cap;
  int switch_period = 30;
  std::vector<std::string> axes;
  std::vector<int> check_ids;

  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  add_common(run, run_c, true);

  auto* sw = app.add_subcommand("sweep", "hyperparameter sweep around a base config");
  add_common(sw, sweep_c, true);
  sw->add_option("--axis", axes, "key=v1,v2,... (repeatable; default: the standard tabular sets)");

  auto* cov = app.add_subcommand("coverage", "pure-exploration state coverage on a grid");
  add_common(cov, cov_c);
  cov->add_option("--env", cov_env, "grid name or map file")->capture_default_str();
  cov->add_option("--steps", cov_steps, "step budget (default 8000)");

  auto* hard = app.add_subcommand("hardexp", "cumulative reward on riverswim / sixarms");
  add_common(hard, hard_c);
  hard->add_option("--env", hard_env, "riverswim or sixarms")->capture_default_str();
  hard->add_option("--steps", hard_steps, "step budget (default 5000)");

  auto* goal = app.add_subcommand("goal", "single-goal grid learning curves");
  add_common(goal, goal_c);
  goal->add_option("--env", goal_env, "grid name or map file")->capture_default_str();
  goal->add_option("--episodes", goal_episodes, "episodes per run (default 100)");

  auto* nm = app.add_subcommand("nmrdp", "grid with goals switching on an episode schedule");
  add_common(nm, nmrdp_c);
  nm->add_option("--env", nmrdp_env, "grid name or map file")->capture_default_str();
  nm->add_option("--episodes", nmrdp_episodes, "episodes per run (default 150)");
  nm->add_option("--switch-period", switch_period, "episodes per goal")->capture_default_str();

  auto* mc = app.add_subcommand("mountaincar", "linear Q with SF / SF-PF bonuses on MountainCar");
  add_common(mc, mc_c);
  mc->add_option("--episodes", mc_episodes, "episodes per run (default 1000)");
  mc->add_option("--max-episode-steps", mc_cap, "episode step cap (default 10000)");

  auto* check = app.add_subcommand("check", "acceptance checks; all of them without ids");
  check->add_option("ids", check_ids, "check ids 1..11")->check(CLI::Range(1, harness::kCheckCount));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_c);
    if (*sw) return cmd_sweep(sweep_c, axes);
    if (*cov) return cmd_coverage(cov_c, cov_env, cov_steps);
    if (*hard) return cmd_hardexp(hard_c, hard_env, hard_steps);
    if (*goal) return cmd_goal(goal_c, goal_env, goal_episodes);
    if (*nm) return cmd_nmrdp(nmrdp_c, nmrdp_env, nmrdp_episodes, switch_period);
    if (*mc) return cmd_mountaincar(mc_c, mc_episodes, mc_cap);
    if (*check) return cmd_check(check_ids);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
