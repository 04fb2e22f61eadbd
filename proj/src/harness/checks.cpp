#include "spie/harness/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "spie/envs/grid.hpp"
#include "spie/harness/experiments.hpp"
#include "spie/intrinsic/reward.hpp"
#include "spie/repr/analytic.hpp"

namespace spie::harness {

namespace {

using Clock = std::chrono::steady_clock;
using intrinsic::IntrinsicKind;

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

// Random MDP whose policy-induced chain is irreducible: every state has a
// successor ring edge under every action plus a few random extra edges.
envs::DiscreteMdpSpec random_ergodic_mdp(std::size_t n, std::size_t n_actions, Rng& rng) {
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<std::size_t> extra(0, std::min<std::size_t>(n, 4));
  envs::MdpBuilder builder(n, n_actions);
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < n_actions; ++a) {
      std::vector<double> w(n, 0.0);
      w[(s + 1 + a) % n] += weight(rng);
      const std::size_t k = extra(rng);
      for (std::size_t i = 0; i < k; ++i) w[pick(rng)] += weight(rng);
      double total = 0.0;
      for (double x : w) total += x;
      for (StateId next = 0; next < n; ++next) {
        if (w[next] > 0.0) builder.add(s, a, next, w[next] / total, 0.0);
      }
    }
  }
  builder.start(0, 1.0);
  return builder.build();
}

Eigen::MatrixXd random_policy(std::size_t n, std::size_t n_actions, Rng& rng) {
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  Eigen::MatrixXd pi(n, n_actions);
  for (Eigen::Index s = 0; s < pi.rows(); ++s) {
    for (Eigen::Index a = 0; a < pi.cols(); ++a) pi(s, a) = weight(rng);
    pi.row(s) /= pi.row(s).sum();
  }
  return pi;
}

double induced_inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

template <class F>
CheckResult timed(int id, std::string name, double limit, F&& body) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  r.time_limit = limit;
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit > 0.0 && r.seconds >= limit) {
    r.passed = false;
    r.detail += " [over time limit " + fmt(limit) + " s]";
  }
  return r;
}

const agents::AgentConfig* find_agent(const std::vector<agents::AgentConfig>& v, IntrinsicKind kind) {
  for (const auto& c : v) {
    if (c.intrinsic.kind == kind) return &c;
  }
  throw std::logic_error("agent kind missing");
}

// Expected-update fixed points, iterated until the sweep changes nothing.
Eigen::MatrixXd sr_fixed_point(const Eigen::MatrixXd& p, double gamma) {
  const auto n = p.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (int it = 0; it < 100000; ++it) {
    Eigen::MatrixXd next = eye + gamma * p * m;
    const double change = (next - m).cwiseAbs().maxCoeff();
    m = std::move(next);
    if (change == 0.0 || change < 1e-15) break;
  }
  return m;
}

Eigen::MatrixXd fr_fixed_point(const Eigen::MatrixXd& p, double gamma) {
  const auto n = p.rows();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
  for (int it = 0; it < 100000; ++it) {
    Eigen::MatrixXd next = gamma * p * f;
    next.diagonal().setOnes();
    const double change = (next - f).cwiseAbs().maxCoeff();
    f = std::move(next);
    if (change == 0.0 || change < 1e-15) break;
  }
  return f;
}

}  // namespace

CheckResult check_reciprocity() {
  return timed(1, "reciprocity N diag(z) = diag(z) M on 50 random ergodic MDPs", 5.0, [](CheckResult& r) {
    Rng rng(20240101);
    std::uniform_int_distribution<std::size_t> size(2, 20), actions(1, 3);
    const double gammas[] = {0.5, 0.9, 0.95};
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const std::size_t n = size(rng), k = actions(rng);
      const auto mdp = random_ergodic_mdp(n, k, rng);
      const Eigen::MatrixXd p = mdp.policy_marginal(random_policy(n, k, rng));
      const double gamma = gammas[i % 3];
      const auto z = repr::stationary_distribution(p).z;
      const auto m = repr::analytic_sr(p, gamma);
      const auto nn = repr::analytic_pr(p, z, gamma);
      const Eigen::MatrixXd lhs = nn.values() * z.asDiagonal();
      const Eigen::MatrixXd rhs = z.asDiagonal() * m.values();
      worst = std::max(worst, induced_inf_norm(lhs - rhs));
    }
    r.passed = worst <= 1e-8;
    r.detail = "max ||N diag(z) - diag(z) M||_inf = " + fmt(worst, 3) + " (limit 1e-8)";
  });
}

CheckResult check_td_convergence() {
  return timed(2, "online SR/PR reach analytic values on a 5-state chain", 10.0, [](CheckResult& r) {
    // Five-state ring, actions step left/right; the random walk is ergodic.
    constexpr std::size_t n = 5;
    constexpr double gamma = 0.8;
    constexpr long steps = 200'000;
    envs::MdpBuilder builder(n, 2);
    for (StateId s = 0; s < n; ++s) {
      builder.add(s, 0, (s + n - 1) % n, 1.0, 0.0);
      builder.add(s, 1, (s + 1) % n, 1.0, 0.0);
    }
    builder.start(0, 1.0);
    envs::MdpEnvironment env(builder.build());
    const Eigen::MatrixXd p = env.mdp().random_walk_marginal();
    const auto m_true = repr::analytic_sr(p, gamma);
    const auto n_true = repr::analytic_pr(p, gamma);

    double worst_sr = 0.0, worst_pr = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Rng rng(seed);
      repr::OccupancyMatrix sr(repr::OccupancyKind::kSR, n, gamma);
      repr::OccupancyMatrix pr(repr::OccupancyKind::kPR, n, gamma);
      std::uniform_int_distribution<ActionId> act(0, 1);
      StateId s = env.reset(rng);
      for (long t = 0; t < steps; ++t) {
        const double eta = 0.5 * 2000.0 / (2000.0 + static_cast<double>(t));
        const ActionId a = act(rng);
        const auto out = env.step(a, rng);
        const envs::Transition tr{s, a, out.reward, out.next, 0, false};
        repr::sr_td_update(sr, tr, eta);
        repr::pr_td_update(pr, tr, eta);
        s = out.next;
      }
      worst_sr = std::max(worst_sr, (sr.values() - m_true.values()).cwiseAbs().maxCoeff());
      worst_pr = std::max(worst_pr, (pr.values() - n_true.values()).cwiseAbs().maxCoeff());
    }
    r.passed = worst_sr <= 0.1 && worst_pr <= 0.1;
    r.detail = "worst L_inf over 5 seeds: SR " + fmt(worst_sr, 3) + ", PR " + fmt(worst_pr, 3) + " (limit 0.1)";
  });
}

CheckResult check_fr_dominance() {
  return timed(3, "converged FR <= converged SR on 20 random chains", 0.0, [](CheckResult& r) {
    Rng rng(7);
    std::uniform_int_distribution<std::size_t> size(2, 20);
    const double gammas[] = {0.5, 0.9, 0.95, 0.99};
    double worst = -1e300;
    for (int i = 0; i < 20; ++i) {
      const std::size_t n = size(rng);
      const auto mdp = random_ergodic_mdp(n, 1, rng);
      const Eigen::MatrixXd p = mdp.random_walk_marginal();
      const double gamma = gammas[i % 4];
      const Eigen::MatrixXd f = fr_fixed_point(p, gamma);
      const Eigen::MatrixXd m = sr_fixed_point(p, gamma);
      worst = std::max(worst, (f - m).maxCoeff());
    }
    r.passed = worst <= 1e-6;
    r.detail = "max(F - M) = " + fmt(worst, 3) + " (must be <= 1e-6)";
  });
}

CheckResult check_srr_laws() {
  return timed(4, "r_srr <= 0 and r_srr = r_srr_a + r_srr_b on 1e5 fuzzed pairs", 0.0, [](CheckResult& r) {
    Rng rng(99);
    std::uniform_int_distribution<std::size_t> size(1, 20);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    long sign_violations = 0;
    double worst_gap = 0.0;
    for (int i = 0; i < 100'000; ++i) {
      const std::size_t n = size(rng);
      const double scale = std::pow(10.0, 6.0 * unit(rng) - 3.0);
      Eigen::MatrixXd m(n, n);
      for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) m(a, b) = unit(rng) < 0.2 ? 0.0 : scale * unit(rng);
      }
      const repr::OccupancyMatrix occ(repr::OccupancyKind::kSR, std::move(m), 0.9);
      std::uniform_int_distribution<StateId> st(0, n - 1);
      const envs::Transition t{st(rng), 0, 0.0, st(rng), 0, unit(rng) < 0.1};
      const double v = intrinsic::r_srr(occ, t);
      if (v > 0.0) ++sign_violations;
      worst_gap = std::max(worst_gap, std::abs(v - (intrinsic::r_srr_a(occ, t) + intrinsic::r_srr_b(occ, t))));
    }
    r.passed = sign_violations == 0 && worst_gap <= 1e-12;
    r.detail = "positive r_srr: " + std::to_string(sign_violations) + ", max decomposition gap " + fmt(worst_gap, 3);
  });
}

namespace {

CheckResult hard_exploration_check(int id, const std::string& task, double ratio) {
  return timed(id, task + ": SARSA-SRR mean >= " + fmt(ratio) + "x SARSA (5000 steps x 100 seeds)", 60.0,
               [&](CheckResult& r) {
                 const auto all = table1_agents(task);
                 const std::vector<agents::AgentConfig> pair{*find_agent(all, IntrinsicKind::kNone),
                                                             *find_agent(all, IntrinsicKind::kSRR)};
                 const auto res = hard_exploration_eval(task, pair, 5000, 100, 0);
                 const double sarsa = res[0].stat.mean, srr = res[1].stat.mean;
                 r.passed = srr >= ratio * sarsa;
                 r.detail = "SARSA " + fmt(sarsa, 8) + " (" + fmt(res[0].stat.std_error, 4) + "), SARSA-SRR " +
                            fmt(srr, 8) + " (" + fmt(res[1].stat.std_error, 4) + "), ratio " + fmt(srr / sarsa, 4);
               });
}

const std::vector<std::string>& coverage_grids() {
  static const std::vector<std::string> grids{"OF-small", "Cluster-simple", "Cluster-hard", "OF-large"};
  return grids;
}

}  // namespace

CheckResult check_riverswim() { return hard_exploration_check(5, "riverswim", 20.0); }
CheckResult check_sixarms() { return hard_exploration_check(6, "sixarms", 2.0); }

CheckResult check_coverage_ordering() {
  return timed(7, "coverage: SARSA-SRR fastest to 90%, SARSA-SR short of 50% on clustered grids", 120.0,
               [](CheckResult& r) {
                 CoverageOptions opt;
                 opt.budget = 8000;
                 opt.seeds = 10;
                 const auto agents_list = grid_agents();
                 bool ordering = true, sr_fails = true;
                 std::ostringstream detail;
                 for (const auto& name : coverage_grids()) {
                   const auto spec = envs::named_grid(name);
                   const auto res = coverage_experiment(spec, agents_list, opt);
                   const auto& srr = res[3];
                   for (std::size_t i = 0; i < 3; ++i) {
                     if (!(srr.steps_to_90.mean < res[i].steps_to_90.mean)) ordering = false;
                   }
                   const std::size_t need = coverage_threshold(50, srr.runs.front().n_states);
                   const double sr_final = res[1].curve.y.back();
                   const bool clustered = name.rfind("Cluster", 0) == 0;
                   if (clustered && !(sr_final < static_cast<double>(need))) sr_fails = false;
                   long reached = 0;
                   for (const auto& m : res[1].milestones) reached += m.steps_to_50.has_value() ? 1 : 0;
                   detail << name << ": steps_to_90";
                   for (const auto& x : res) detail << ' ' << x.agent << '=' << fmt(x.steps_to_90.mean, 5);
                   detail << "; SARSA-SR seed-mean coverage at budget " << fmt(sr_final, 4) << '/' << need
                          << " needed for 50% (" << reached << '/' << res[1].milestones.size()
                          << " seeds reached it). ";
                 }
                 r.passed = ordering && sr_fails;
                 r.detail = detail.str();
               });
}

CheckResult check_frozen_ablation() {
  return timed(8, "frozen diffusion SR: SARSA-SRR degrades least on OF-small", 0.0, [](CheckResult& r) {
    const auto spec = envs::named_grid("OF-small");
    const auto all = grid_agents();
    const std::vector<agents::AgentConfig> trio{all[1], all[2], all[3]};
    CoverageOptions online;
    CoverageOptions frozen;
    frozen.frozen_repr = true;
    const auto a = coverage_experiment(spec, trio, online);
    const auto b = coverage_experiment(spec, trio, frozen);
    double deg[3];
    std::ostringstream detail;
    for (int i = 0; i < 3; ++i) {
      deg[i] = (b[i].steps_to_90.mean - a[i].steps_to_90.mean) / a[i].steps_to_90.mean;
      detail << a[i].agent << ": " << fmt(a[i].steps_to_90.mean, 5) << " -> " << fmt(b[i].steps_to_90.mean, 5)
             << " (" << fmt(100.0 * deg[i], 3) << "%); ";
    }
    detail << "not-reached counts as " << online.budget + 1;
    r.passed = deg[2] < deg[0] && deg[2] < deg[1];
    r.detail = detail.str();
  });
}

CheckResult check_reduction() {
  return timed(9, "beta = 0 runs match vanilla SARSA exactly for every intrinsic kind", 0.0, [](CheckResult& r) {
    long compared = 0, mismatches = 0;
    const std::vector<std::pair<std::string, ExperimentKind>> envs_list{
        {"riverswim", ExperimentKind::kHardExp},
        {"sixarms", ExperimentKind::kHardExp},
        {"OF-small", ExperimentKind::kCoverage},
        {"Cluster-hard", ExperimentKind::kGoal},
        {"OF-small", ExperimentKind::kNmrdp}};
    const IntrinsicKind kinds[] = {IntrinsicKind::kSR,   IntrinsicKind::kFR,    IntrinsicKind::kSRR,
                                   IntrinsicKind::kSRR_A, IntrinsicKind::kSRR_B, IntrinsicKind::kSR_PR};
    agents::RunBudget budget;
    budget.steps = 3000;
    budget.max_episode_steps = 500;
    for (const auto& [env_name, kind] : envs_list) {
      const auto proto = make_environment(env_name, kind);
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        agents::AgentConfig vanilla;
        vanilla.seed = seed;
        vanilla.epsilon = 0.1;
        auto e0 = proto->clone();
        const auto base = agents::run_agent(*e0, vanilla, budget);
        auto check_one = [&](agents::AgentConfig c, const agents::FixedRepresentations* fixed) {
          auto e = proto->clone();
          ++compared;
          if (!same_trajectory(base, agents::run_agent(*e, c, budget, fixed))) ++mismatches;
        };
        agents::AgentConfig none_scaled = vanilla;
        none_scaled.intrinsic.beta = 5.0;
        check_one(none_scaled, nullptr);
        for (auto k : kinds) {
          agents::AgentConfig c = vanilla;
          c.intrinsic.kind = k;
          c.intrinsic.beta = 0.0;
          check_one(c, nullptr);
          // Frozen maps are the random-walk diffusion, defined for the continuing tasks.
          if (!proto->mdp().has_terminals()) {
            c.intrinsic.frozen = true;
            const auto fixed = fixed_for(proto->mdp(), c);
            check_one(c, &*fixed);
          }
        }
      }
    }
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
      linfa::LinearAgentConfig base;
      base.kind = IntrinsicKind::kNone;
      base.seed = seed;
      const auto ref = linfa::run_linear_q(base, 3, 2000);
      for (auto k : {IntrinsicKind::kSF, IntrinsicKind::kSF_PF}) {
        linfa::LinearAgentConfig c = base;
        c.kind = k;
        c.beta = 0.0;
        ++compared;
        if (!same_trajectory(ref, linfa::run_linear_q(c, 3, 2000))) ++mismatches;
      }
    }
    r.passed = mismatches == 0;
    r.detail = std::to_string(compared) + " paired runs, " + std::to_string(mismatches) + " mismatches";
  });
}

CheckResult check_nmrdp() {
  return timed(10, "NMRDP on OF-small: SARSA-SRR recovers faster than SARSA after goal switches", 0.0,
               [](CheckResult& r) {
                 const auto all = grid_agents();
                 const std::vector<agents::AgentConfig> pair{all[0], all[3]};
                 EpisodeOptions opt;
                 opt.episodes = 180;
                 opt.seeds = 10;
                 opt.switch_period = 30;
                 const auto res = nmrdp_eval(envs::named_grid("OF-small"), pair, opt);
                 const double sarsa = res.recovery_stat[0].mean, srr = res.recovery_stat[1].mean;
                 r.passed = srr < sarsa;
                 r.detail = "mean recovery episodes: SARSA " + fmt(sarsa) + " (" + fmt(res.recovery_stat[0].std_error, 3) +
                            "), SARSA-SRR " + fmt(srr) + " (" + fmt(res.recovery_stat[1].std_error, 3) +
                            "); 5 switches per run, 30 = never within 1.5x shortest path";
               });
}

CheckResult check_mountaincar() {
  return timed(11, "MountainCar: SF-PF beats SF-only (1000 episodes x 10 seeds)", 300.0, [](CheckResult& r) {
    const auto res = mountaincar_eval(mountaincar_agents(), 1000, 10, 0);
    const auto& pf = res[0];
    const auto& sf = res[1];
    r.passed = pf.first_success_stat.mean <= sf.first_success_stat.mean &&
               pf.final_return_stat.mean >= sf.final_return_stat.mean;
    r.detail = "first success episode: SF-PF " + fmt(pf.first_success_stat.mean) + ", SF " +
               fmt(sf.first_success_stat.mean) + " (1000 = never); final-100 mean return: SF-PF " +
               fmt(pf.final_return_stat.mean) + ", SF " + fmt(sf.final_return_stat.mean);
  });
}

CheckResult run_check(int id) {
  switch (id) {
    case 1: return check_reciprocity();
    case 2: return check_td_convergence();
    case 3: return check_fr_dominance();
    case 4: return check_srr_laws();
    case 5: return check_riverswim();
    case 6: return check_sixarms();
    case 7: return check_coverage_ordering();
    case 8: return check_frozen_ablation();
    case 9: return check_reduction();
    case 10: return check_nmrdp();
    case 11: return check_mountaincar();
    default: throw std::invalid_argument("no check with id " + std::to_string(id));
  }
}

std::string format_check(const CheckResult& result) {
  std::ostringstream os;
  os << (result.passed ? "[PASS] " : "[FAIL] ") << std::setw(2) << result.id << "  " << result.name << "  ("
     << std::fixed << std::setprecision(1) << result.seconds << " s)\n        " << result.detail;
  return os.str();
}

}  // namespace spie::harness
