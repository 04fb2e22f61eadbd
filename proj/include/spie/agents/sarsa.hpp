#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "spie/envs/environment.hpp"
#include "spie/harness/run_record.hpp"
#include "spie/intrinsic/reward.hpp"
#include "spie/repr/occupancy.hpp"

namespace spie::agents {

struct AgentConfig {
  std::string name = "SARSA";
  double alpha = 0.1;       // Q learning rate
  double eta = 0.1;         // SR / FR learning rate
  double eta_pr = 0.1;      // PR learning rate (SR-PR agents)
  double gamma = 0.95;      // value discount
  double gamma_repr = 0.95; // SR / FR discount
  double gamma_pr = 0.95;   // PR discount
  double epsilon = 0.1;
  double q_init = 0.0;
  intrinsic::IntrinsicRewardSpec intrinsic;
  std::uint64_t seed = 0;
  // Re-sample the executed action at each loop head, as in the printed
  // pseudocode, instead of carrying the bootstrap action over.
  bool strict_pseudocode = false;

  // Throws std::invalid_argument on out-of-range hyperparameters.
  void validate() const;
  // Stable "key=value;..." rendering of every field except the seed.
  std::string canonical() const;
  std::string fingerprint() const;
};

class QTable {
 public:
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  QTable(std::size_t n_states, std::size_t n_actions, double init = 0.0)
      : values_(Matrix::Constant(n_states, n_actions, init)) {}

  std::size_t n_states() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t n_actions() const { return static_cast<std::size_t>(values_.cols()); }
  double& operator()(StateId s, ActionId a) { return values_(s, a); }
  double operator()(StateId s, ActionId a) const { return values_(s, a); }
  const Matrix& values() const { return values_; }
  Matrix& values() { return values_; }

 private:
  Matrix values_;
};

// One uniform draw decides explore/exploit; exploring draws a uniform action,
// exploiting breaks ties among maximizers uniformly (one more draw only when
// there is a tie).
ActionId epsilon_greedy(const QTable& q, StateId s, double epsilon, Rng& rng);

// Q[s,a] += alpha (r_total + gamma (1 - done) Q[s',a'] - Q[s,a]).
void sarsa_step(QTable& q, const envs::Transition& t, double r_total, double alpha, double gamma);

// 1 / (1 - gamma) for SR and FR bonuses, 0 otherwise.
double optimistic_init(const AgentConfig& config, intrinsic::IntrinsicKind kind);

struct RunBudget {
  long steps = 0;             // stop after this many environment steps (0: unlimited)
  long episodes = 0;          // stop after this many finished episodes (0: unlimited)
  long max_episode_steps = 0; // truncate an episode after this many steps (0: never)
  bool log_steps = true;

  void validate() const;
};

// Precomputed representations for frozen-representation runs.
struct FixedRepresentations {
  std::optional<repr::OccupancyMatrix> sr;
  std::optional<repr::OccupancyMatrix> fr;
  std::optional<repr::OccupancyMatrix> pr;
};

// Analytic SR / FR / PR of the environment's current MDP under the uniform
// random-walk policy. PR is only built when `with_pr` is set (it needs an
// irreducible chain).
FixedRepresentations diffusion_representations(const envs::DiscreteMdpSpec& mdp,
                                               const AgentConfig& config, bool with_pr);

// The SARSA loop shared by every tabular agent: act epsilon-greedily, step,
// update the representations, add beta * r_int, pick a', SARSA update,
// carry a' over. `fixed` must be supplied when config.intrinsic.frozen is set
// and is never modified.
harness::RunRecord run_agent(envs::TabularEnvironment& env, const AgentConfig& config,
                             const RunBudget& budget, const FixedRepresentations* fixed = nullptr);

// Same bookkeeping as run_agent for a fixed deterministic policy.
using Policy = std::function<ActionId(StateId)>;
harness::RunRecord run_policy(envs::TabularEnvironment& env, const Policy& policy,
                              const RunBudget& budget, std::uint64_t seed);

}  // namespace spie::agents
