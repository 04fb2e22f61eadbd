#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spie/common.hpp"

namespace spie::envs {

// One possible result of taking an action: next state, its probability and
// the reward attached to that transition.
struct Outcome {
  StateId next;
  double prob;
  double reward;
};

// Immutable tabular MDP: P[s][a][s'], R[s][a][s'], start distribution and
// terminal set. Instances are produced by MdpBuilder, which validates them.
class DiscreteMdpSpec {
 public:
  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }

  double transition(StateId s, ActionId a, StateId next) const;
  double reward(StateId s, ActionId a, StateId next) const;
  std::span<const Outcome> outcomes(StateId s, ActionId a) const;
  double expected_reward(StateId s, ActionId a) const;

  const std::vector<double>& start_dist() const { return start_; }
  const std::vector<bool>& terminal_mask() const { return terminal_; }
  bool is_terminal(StateId s) const { return terminal_[s]; }
  bool has_terminals() const;

  // Both draw exactly one uniform variate from rng.
  StateId sample_start(Rng& rng) const;
  const Outcome& sample(StateId s, ActionId a, Rng& rng) const;

  // State-to-state matrix under the given stochastic policy (rows: states,
  // columns: actions). Terminal states are made absorbing.
  Eigen::MatrixXd policy_marginal(const Eigen::MatrixXd& policy) const;
  Eigen::MatrixXd random_walk_marginal() const;

 private:
  friend class MdpBuilder;
  std::size_t index(StateId s, ActionId a, StateId next) const {
    return (s * n_actions_ + a) * n_states_ + next;
  }

  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::vector<double> prob_;
  std::vector<double> reward_;
  std::vector<double> start_;
  std::vector<bool> terminal_;
  std::vector<std::vector<Outcome>> outcomes_;
};

class MdpBuilder {
 public:
  MdpBuilder(std::size_t n_states, std::size_t n_actions);

  // Adds probability mass (and sets the reward) for s --a--> next.
  MdpBuilder& add(StateId s, ActionId a, StateId next, double prob, double reward = 0.0);
  MdpBuilder& start(StateId s, double prob);
  MdpBuilder& terminal(StateId s);

  // Throws std::invalid_argument when a row is not a probability vector, the
  // start distribution does not sum to one, or an index is out of range.
  DiscreteMdpSpec build() const;

 private:
  DiscreteMdpSpec spec_;
};

// Plain-text table: "states N", "actions K", "start s p", "terminal s" and
// one "s a s' p r" tuple per line; '#' starts a comment.
DiscreteMdpSpec parse_mdp_table(std::istream& in, const std::string& origin = "<stream>");
DiscreteMdpSpec load_mdp_table(const std::filesystem::path& path);
void write_mdp_table(std::ostream& out, const DiscreteMdpSpec& spec);

}  // namespace spie::envs
