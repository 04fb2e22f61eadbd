#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "spie/envs/grid.hpp"
#include "spie/harness/config_file.hpp"
#include "spie/harness/experiments.hpp"
#include "spie/harness/output.hpp"
#include "spie/harness/stats.hpp"

using namespace spie;
using namespace spie::harness;
namespace fs = std::filesystem;
using intrinsic::IntrinsicKind;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("spie_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

RunRecord record_with_coverage(std::vector<std::size_t> unique, std::size_t n_states) {
  RunRecord r;
  r.n_states = n_states;
  r.initial_unique = 1;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    StepRow row;
    row.t = static_cast<long>(i) + 1;
    row.unique_states = unique[i];
    r.steps.push_back(row);
  }
  r.total_steps = static_cast<long>(unique.size());
  return r;
}

}  // namespace

TEST(Aggregate, TwoPointStatistics) {
  const std::vector<double> v{1.0, 3.0};
  const auto s = aggregate(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.0);
  EXPECT_DOUBLE_EQ(s.std_error, 1.0);
  EXPECT_EQ(s.n_seeds, 2u);
}

TEST(Aggregate, MatchesTwoPassComputation) {
  Rng rng(1);
  std::normal_distribution<double> nd(5.0, 3.0);
  for (int n : {1, 2, 7, 100}) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = nd(rng);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double se = n > 1 ? std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
    const auto s = aggregate(v);
    EXPECT_NEAR(s.mean, mean, 1e-12);
    EXPECT_NEAR(s.std_error, se, 1e-12);
  }
  EXPECT_THROW(aggregate(std::vector<double>{}), std::invalid_argument);
}

TEST(Coverage, ThresholdsAndMilestones) {
  EXPECT_EQ(coverage_threshold(50, 91), 46u);
  EXPECT_EQ(coverage_threshold(90, 100), 90u);
  EXPECT_EQ(coverage_threshold(99, 100), 99u);
  EXPECT_EQ(coverage_threshold(99, 91), 91u);
  // 4 states: 50% needs 2, 90% and 99% need 4.
  const auto r = record_with_coverage({1, 2, 2, 3, 4, 4}, 4);
  const auto m = coverage_milestones(r);
  EXPECT_EQ(m.steps_to_50, 2);
  EXPECT_EQ(m.steps_to_90, 5);
  EXPECT_EQ(m.steps_to_99, 5);
  const auto partial = coverage_milestones(record_with_coverage({1, 2, 3}, 4));
  EXPECT_EQ(partial.steps_to_50, 2);
  EXPECT_FALSE(partial.steps_to_90.has_value());
  EXPECT_EQ(encode_milestone(partial.steps_to_90, 8000), 8001);
}

TEST(Coverage, PerfectExplorerBound) {
  // Visiting a new state every step hits ceil(0.99 |S|) after that many - 1 steps.
  const std::size_t n = 91;
  std::vector<std::size_t> unique;
  for (std::size_t i = 2; i <= n; ++i) unique.push_back(i);
  const auto m = coverage_milestones(record_with_coverage(unique, n));
  EXPECT_EQ(*m.steps_to_99, static_cast<long>(coverage_threshold(99, n)) - 1);
  EXPECT_LE(*m.steps_to_50, *m.steps_to_90);
  EXPECT_LE(*m.steps_to_90, *m.steps_to_99);
}

// Coverage of a uniform random walk on OF-small, simulated directly on the
// layout with its own generator, agrees with the epsilon = 1 agent.
TEST(Coverage, RandomWalkMatchesIndependentSimulator) {
  const auto spec = envs::named_grid("OF-small");
  const envs::GridLayout layout(spec);
  const long budget = 2000;
  const std::size_t seeds = 40;
  std::vector<double> sim;
  Rng rng(12345);
  std::uniform_int_distribution<ActionId> act(0, 3);
  for (std::size_t k = 0; k < seeds; ++k) {
    std::set<StateId> seen;
    StateId s = layout.start_state();
    seen.insert(s);
    for (long t = 0; t < budget; ++t) {
      s = layout.move(s, act(rng));
      seen.insert(s);
    }
    sim.push_back(static_cast<double>(seen.size()));
  }
  agents::AgentConfig walker;
  walker.name = "walk";
  walker.epsilon = 1.0;
  CoverageOptions opt;
  opt.budget = budget;
  opt.seeds = seeds;
  opt.base_seed = 500;
  const auto res = coverage_experiment(spec, {walker}, opt);
  std::vector<double> agent;
  for (const auto& run : res[0].runs) agent.push_back(static_cast<double>(run.coverage_curve().back()));
  const auto a = aggregate(sim), b = aggregate(agent);
  EXPECT_LE(std::abs(a.mean - b.mean), 4.0 * std::hypot(a.std_error, b.std_error));
  // Curves are monotone and bounded by |S|.
  const auto& y = res[0].curve.y;
  ASSERT_EQ(y.size(), static_cast<std::size_t>(budget) + 1);
  for (std::size_t i = 1; i < y.size(); ++i) ASSERT_GE(y[i], y[i - 1]);
  EXPECT_LE(y.back(), static_cast<double>(layout.n_states()));
  EXPECT_DOUBLE_EQ(y.front(), 1.0);
}

TEST(MeanSeries, ElementwiseStatistics) {
  const auto s = mean_series({{1, 2, 3}, {3, 2, 1}});
  EXPECT_EQ(s.y, (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(s.err, (std::vector<double>{1, 0, 1}));
  EXPECT_EQ(s.x, (std::vector<double>{0, 1, 2}));
}

TEST(ParallelFor, ResultsIndependentOfWorkerCount) {
  auto f = [](std::size_t i) { return static_cast<double>(i * i); };
  const auto a = parallel_map<double>(50, f, 1), b = parallel_map<double>(50, f, 4);
  EXPECT_EQ(a, b);
  std::atomic<int> count{0};
  parallel_for(100, [&](std::size_t) { ++count; }, 3);
  EXPECT_EQ(count.load(), 100);
  EXPECT_THROW(parallel_for(5, [](std::size_t i) { if (i == 3) throw std::runtime_error("boom"); }, 2),
               std::runtime_error);
}

TEST(ConfigFile, ParsesAndRejects) {
  const auto kv = KeyValueConfig::parse("# c\nalpha = 0.25\n\nname = My Agent  # trailing\nfrozen = true\n");
  EXPECT_DOUBLE_EQ(kv.get_double("alpha"), 0.25);
  EXPECT_EQ(kv.get_string("name"), "My Agent");
  EXPECT_TRUE(kv.get_bool("frozen"));
  EXPECT_THROW(KeyValueConfig::parse("a = 1\na = 2\n"), std::invalid_argument);
  EXPECT_THROW(KeyValueConfig::parse("no equals sign\n"), std::invalid_argument);
  EXPECT_THROW(parse_experiment_config(KeyValueConfig::parse("alpha = 0.1\nbogus = 3\n")), std::invalid_argument);
  EXPECT_THROW(parse_experiment_config(KeyValueConfig::parse("alpha = fast\n")), std::invalid_argument);
}

TEST(ConfigFile, AgentKeysRoundTrip) {
  const auto cfg = parse_experiment_config(KeyValueConfig::parse(
      "experiment = goal\nenv = Cluster-hard\nepisodes = 50\nseeds = 3\nname = X\nintrinsic = sr_pr\n"
      "alpha = 0.05\neta = 0.5\neta_pr = 0.25\ngamma = 0.9\ngamma_repr = 0.8\ngamma_pr = 0.5\nbeta = 10\n"
      "epsilon = 0.05\nfrozen = true\nstrict_pseudocode = true\n"));
  EXPECT_EQ(cfg.experiment.kind, ExperimentKind::kGoal);
  EXPECT_EQ(cfg.experiment.env, "Cluster-hard");
  EXPECT_EQ(cfg.experiment.episodes, 50);
  EXPECT_EQ(cfg.experiment.seeds, 3u);
  const auto& a = cfg.agent;
  EXPECT_EQ(a.name, "X");
  EXPECT_EQ(a.intrinsic.kind, IntrinsicKind::kSR_PR);
  EXPECT_DOUBLE_EQ(a.alpha, 0.05);
  EXPECT_DOUBLE_EQ(a.eta, 0.5);
  EXPECT_DOUBLE_EQ(a.eta_pr, 0.25);
  EXPECT_DOUBLE_EQ(a.gamma, 0.9);
  EXPECT_DOUBLE_EQ(a.gamma_repr, 0.8);
  EXPECT_DOUBLE_EQ(a.gamma_pr, 0.5);
  EXPECT_DOUBLE_EQ(a.intrinsic.beta, 10.0);
  EXPECT_DOUBLE_EQ(a.epsilon, 0.05);
  EXPECT_TRUE(a.intrinsic.frozen);
  EXPECT_TRUE(a.strict_pseudocode);
}

TEST(ConfigFile, EveryPresetLoads) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(data_path("presets"))) {
    const auto cfg = load_experiment_config(entry.path());
    if (cfg.experiment.kind == ExperimentKind::kMountainCar) {
      EXPECT_NO_THROW(cfg.linear.validate()) << entry.path();
    } else {
      EXPECT_NO_THROW(cfg.agent.validate()) << entry.path();
    }
    ++n;
  }
  EXPECT_EQ(n, 26u);
  const auto mc = load_linear_preset("mountaincar_sf_pf");
  EXPECT_EQ(mc.kind, IntrinsicKind::kSF_PF);
  EXPECT_DOUBLE_EQ(mc.beta, 1000.0);
  EXPECT_DOUBLE_EQ(mc.epsilon, 0.3);
}

TEST(HardExpAgents, ColumnsInReportOrder) {
  for (const char* task : {"riverswim", "sixarms"}) {
    std::vector<std::string> names;
    for (const auto& c : table1_agents(task)) names.push_back(c.name);
    EXPECT_EQ(names, (std::vector<std::string>{"SARSA", "SARSA-SR", "SARSA-FR", "SARSA-SRR", "SARSA-SR-PR",
                                               "SARSA-SRR(a)", "SARSA-SRR(b)"}));
    for (const auto& c : fixed_agents(task)) EXPECT_TRUE(c.intrinsic.frozen);
  }
  std::vector<HardExpResult> rows(2);
  rows[0].agent = "SARSA";
  rows[0].stat = {25075.4, 1234.0, 100};
  rows[1].agent = "SARSA-SRR";
  rows[1].stat = {2547156.0, 81234.0, 100};
  const auto report = table1_report("riverswim", rows);
  EXPECT_NE(report.find("25,075"), std::string::npos);
  EXPECT_NE(report.find("2,547,156"), std::string::npos);
  EXPECT_NE(report.find("(81,234)"), std::string::npos);
}

TEST(HardExploration, OneTotalPerSeed) {
  const auto res = hard_exploration_eval("riverswim", {load_agent_preset("riverswim_sarsa")}, 100, 3, 0);
  ASSERT_EQ(res.size(), 1u);
  EXPECT_EQ(res[0].totals.size(), 3u);
  EXPECT_EQ(res[0].stat.n_seeds, 3u);
  for (double t : res[0].totals) EXPECT_GE(t, 0.0);
}

TEST(Sweep, SingletonReturnsThatConfig) {
  agents::AgentConfig c;
  c.alpha = 0.25;
  const auto r = sweep({c}, [](const agents::AgentConfig& cfg, std::uint64_t) { return cfg.alpha; }, 3);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.best, 0u);
  EXPECT_EQ(r.rows[0].config.alpha, 0.25);
  EXPECT_THROW(sweep({}, [](const agents::AgentConfig&, std::uint64_t) { return 0.0; }, 3), std::invalid_argument);
}

TEST(Sweep, PerSeedDominantConfigWins) {
  agents::AgentConfig a, b;
  a.name = "a";
  b.name = "b";
  // b beats a on every seed by a seed-dependent margin.
  auto metric = [](const agents::AgentConfig& cfg, std::uint64_t seed) {
    const double base = std::sin(static_cast<double>(seed));
    return cfg.name == "b" ? base + 0.01 * static_cast<double>(seed + 1) : base;
  };
  const auto r = sweep({a, b}, metric, 10, 0);
  for (std::size_t s = 0; s < 10; ++s) ASSERT_GT(r.rows[1].per_seed[s], r.rows[0].per_seed[s]);
  EXPECT_EQ(r.best, 1u);
}

TEST(Sweep, CartesianGridUsesPublishedSets) {
  const auto axes = tabular_sweep_axes();
  ASSERT_EQ(axes.size(), 5u);
  EXPECT_EQ(axes[0].values, (std::vector<std::string>{"0.005", "0.05", "0.1", "0.25", "0.5"}));
  const auto base = KeyValueConfig::parse("intrinsic = srr\n");
  const auto grid = cartesian_grid(base, {axes[0], axes[4]});
  ASSERT_EQ(grid.size(), 15u);
  EXPECT_DOUBLE_EQ(grid[0].alpha, 0.005);
  EXPECT_DOUBLE_EQ(grid[0].epsilon, 0.01);
  EXPECT_DOUBLE_EQ(grid[1].epsilon, 0.05);
  EXPECT_DOUBLE_EQ(grid[14].alpha, 0.5);
  EXPECT_EQ(grid[14].intrinsic.kind, IntrinsicKind::kSRR);
  EXPECT_THROW(cartesian_grid(base, {{"alpha", {}}}), std::invalid_argument);
}

TEST(GoalTask, ReferenceIsBfsAndAgentIndependent) {
  const auto spec = envs::named_grid("Cluster-hard");
  const envs::GridLayout layout(spec);
  EpisodeOptions opt;
  opt.episodes = 3;
  opt.seeds = 2;
  opt.max_episode_steps = 300;
  const auto agents_a = grid_agents();
  const auto r1 = goal_task_eval(spec, {agents_a[0]}, opt);
  const auto r2 = goal_task_eval(spec, {agents_a[3]}, opt);
  EXPECT_EQ(r1.reference, *layout.shortest_path(layout.start_state(), layout.goal_state(0)));
  EXPECT_EQ(r1.reference, r2.reference);
  EXPECT_EQ(r1.agents[0].length.y.size(), 3u);
  EXPECT_THROW(goal_task_eval(envs::parse_grid_map("S.#G\n..#.\n", "walled"), {agents_a[0]}, opt),
               std::invalid_argument);
}

TEST(Nmrdp, SwitchMarkersEveryThirtyEpisodes) {
  EpisodeOptions opt;
  opt.episodes = 100;
  opt.seeds = 1;
  opt.max_episode_steps = 200;
  const auto r = nmrdp_eval(envs::named_grid("OF-small"), {grid_agents()[0]}, opt);
  EXPECT_EQ(r.switch_episodes, (std::vector<long>{30, 60, 90}));
  EXPECT_EQ(r.phase_reference.size(), envs::named_grid("OF-small").goal_schedule.size());
}

TEST(Nmrdp, RecoveryCountsEpisodesUntilNearShortestPath) {
  auto spec = envs::named_grid("OF-small");
  for (auto& g : spec.goal_schedule) g.episodes = 3;
  const envs::NmrdpEnvironment env(spec);
  const auto& layout = env.layout();
  RunRecord run;
  for (long e = 0; e < 9; ++e) {
    const auto goal = env.goal_for_episode(e);
    const int d = *layout.shortest_path(layout.start_state(), layout.goal_state(goal));
    // Phase 1 recovers on its second episode; phase 2 never does.
    long length = 1000;
    if (e == 4 || goal == 0) length = d;
    run.episodes.push_back({e, length, 0.0, true});
  }
  EXPECT_DOUBLE_EQ(mean_recovery(run, env, 9), (1.0 + 3.0) / 2.0);
}

TEST(Output, NumbersRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5, 12345678.0}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(slug("SARSA-SRR (fixed)"), "sarsa_srr_fixed");
}

TEST(Output, AggregateCsvLayout) {
  OutputHeader h;
  h.experiment = "coverage";
  h.env = "OF-small";
  h.base_seed = 7;
  h.seeds = 2;
  const auto csv = aggregate_csv(h, {{"A", "m", {2.0, 1.0, 2}}});
  EXPECT_NE(csv.find("base_seed=7"), std::string::npos);
  EXPECT_NE(csv.find("agent,metric,mean,stderr,n_seeds\nA,m,2,1,2\n"), std::string::npos);
}

TEST(Output, RerunsAreByteIdentical) {
  const auto spec = envs::named_grid("OF-small");
  CoverageOptions opt;
  opt.budget = 500;
  opt.seeds = 3;
  auto agents_list = grid_agents();
  OutputHeader h;
  h.experiment = "coverage";
  h.env = "OF-small";
  h.seeds = opt.seeds;
  const auto d1 = scratch("a"), d2 = scratch("b");
  emit_coverage(d1, h, coverage_experiment(spec, agents_list, opt), opt.budget);
  emit_runs(d1, h, "x", coverage_experiment(spec, {agents_list[3]}, opt)[0].runs);
  emit_coverage(d2, h, coverage_experiment(spec, agents_list, opt), opt.budget);
  emit_runs(d2, h, "x", coverage_experiment(spec, {agents_list[3]}, opt)[0].runs);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(d1)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), d1);
    EXPECT_EQ(slurp(e.path()), slurp(d2 / rel)) << rel;
    ++files;
  }
  EXPECT_GE(files, 3u + 6u);
  EXPECT_NE(slurp(d1 / "milestones.csv").find("# not_reached=501"), std::string::npos);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Output, UnwritablePathThrows) {
  const auto dir = scratch("ro");
  fs::create_directories(dir);
  const auto blocker = dir / "file";
  std::ofstream(blocker) << "x";
  EXPECT_THROW(atomic_write(blocker / "sub" / "out.csv", "data"), std::runtime_error);
  fs::remove_all(dir);
}

TEST(RunRecord, SameTrajectoryIgnoresIntrinsicColumn) {
  RunRecord a = record_with_coverage({1, 2}, 3), b = a;
  b.steps[0].r_int = 5.0;
  b.fingerprint = "other";
  EXPECT_TRUE(same_trajectory(a, b));
  b.steps[1].a = 1;
  EXPECT_FALSE(same_trajectory(a, b));
}
