#include "spie/envs/mdp.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spie::envs {

namespace {

constexpr double kSumTolerance = 1e-12;

std::string where(StateId s, ActionId a) {
  std::ostringstream os;
  os << "(s=" << s << ", a=" << a << ")";
  return os.str();
}

}  // namespace

double DiscreteMdpSpec::transition(StateId s, ActionId a, StateId next) const {
  return prob_[index(s, a, next)];
}

double DiscreteMdpSpec::reward(StateId s, ActionId a, StateId next) const {
  return reward_[index(s, a, next)];
}

std::span<const Outcome> DiscreteMdpSpec::outcomes(StateId s, ActionId a) const {
  return outcomes_[s * n_actions_ + a];
}

double DiscreteMdpSpec::expected_reward(StateId s, ActionId a) const {
  double total = 0.0;
  for (const auto& o : outcomes(s, a)) total += o.prob * o.reward;
  return total;
}

bool DiscreteMdpSpec::has_terminals() const {
  for (bool t : terminal_) {
    if (t) return true;
  }
  return false;
}

StateId DiscreteMdpSpec::sample_start(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  StateId last = 0;
  for (StateId s = 0; s < n_states_; ++s) {
    if (start_[s] <= 0.0) continue;
    acc += start_[s];
    last = s;
    if (u < acc) return s;
  }
  return last;
}

const Outcome& DiscreteMdpSpec::sample(StateId s, ActionId a, Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  const auto& row = outcomes_[s * n_actions_ + a];
  double acc = 0.0;
  for (const auto& o : row) {
    acc += o.prob;
    if (u < acc) return o;
  }
  return row.back();
}

Eigen::MatrixXd DiscreteMdpSpec::policy_marginal(const Eigen::MatrixXd& policy) const {
  if (static_cast<std::size_t>(policy.rows()) != n_states_ ||
      static_cast<std::size_t>(policy.cols()) != n_actions_) {
    throw std::invalid_argument("policy_marginal: policy shape does not match the MDP");
  }
  Eigen::MatrixXd marginal = Eigen::MatrixXd::Zero(n_states_, n_states_);
  for (StateId s = 0; s < n_states_; ++s) {
    if (terminal_[s]) {
      marginal(s, s) = 1.0;
      continue;
    }
    for (ActionId a = 0; a < n_actions_; ++a) {
      for (const auto& o : outcomes(s, a)) marginal(s, o.next) += policy(s, a) * o.prob;
    }
  }
  return marginal;
}

Eigen::MatrixXd DiscreteMdpSpec::random_walk_marginal() const {
  return policy_marginal(Eigen::MatrixXd::Constant(n_states_, n_actions_, 1.0 / n_actions_));
}

MdpBuilder::MdpBuilder(std::size_t n_states, std::size_t n_actions) {
  if (n_states == 0 || n_actions == 0) {
    throw std::invalid_argument("MDP needs at least one state and one action");
  }
  spec_.n_states_ = n_states;
  spec_.n_actions_ = n_actions;
  spec_.prob_.assign(n_states * n_actions * n_states, 0.0);
  spec_.reward_.assign(n_states * n_actions * n_states, 0.0);
  spec_.start_.assign(n_states, 0.0);
  spec_.terminal_.assign(n_states, false);
}

MdpBuilder& MdpBuilder::add(StateId s, ActionId a, StateId next, double prob, double reward) {
  if (s >= spec_.n_states_ || next >= spec_.n_states_ || a >= spec_.n_actions_) {
    throw std::out_of_range("MDP transition index out of range " + where(s, a));
  }
  if (!(prob >= 0.0)) {
    throw std::invalid_argument("negative transition probability at " + where(s, a));
  }
  spec_.prob_[spec_.index(s, a, next)] += prob;
  spec_.reward_[spec_.index(s, a, next)] = reward;
  return *this;
}

MdpBuilder& MdpBuilder::start(StateId s, double prob) {
  if (s >= spec_.n_states_) throw std::out_of_range("start state out of range");
  spec_.start_[s] += prob;
  return *this;
}

MdpBuilder& MdpBuilder::terminal(StateId s) {
  if (s >= spec_.n_states_) throw std::out_of_range("terminal state out of range");
  spec_.terminal_[s] = true;
  return *this;
}

DiscreteMdpSpec MdpBuilder::build() const {
  DiscreteMdpSpec spec = spec_;
  const auto n = spec.n_states_;
  const auto k = spec.n_actions_;
  spec.outcomes_.assign(n * k, {});
  for (StateId s = 0; s < n; ++s) {
    for (ActionId a = 0; a < k; ++a) {
      double sum = 0.0;
      auto& row = spec.outcomes_[s * k + a];
      for (StateId next = 0; next < n; ++next) {
        const double p = spec.prob_[spec.index(s, a, next)];
        if (p < 0.0) throw std::invalid_argument("negative probability at " + where(s, a));
        if (p > 0.0) row.push_back({next, p, spec.reward_[spec.index(s, a, next)]});
        sum += p;
      }
      if (std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os << "transition row " << where(s, a) << " sums to " << std::setprecision(17) << sum;
        throw std::invalid_argument(os.str());
      }
    }
  }
  double start_sum = 0.0;
  for (double p : spec.start_) {
    if (p < 0.0) throw std::invalid_argument("negative start probability");
    start_sum += p;
  }
  if (std::abs(start_sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("start distribution does not sum to 1");
  }
  return spec;
}

DiscreteMdpSpec parse_mdp_table(std::istream& in, const std::string& origin) {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  struct Row {
    StateId s;
    ActionId a;
    StateId next;
    double p;
    double r;
  };
  std::vector<Row> rows;
  std::vector<std::pair<StateId, double>> starts;
  std::vector<StateId> terminals;

  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "states") {
      if (!(ls >> n_states)) fail("expected state count");
    } else if (head == "actions") {
      if (!(ls >> n_actions)) fail("expected action count");
    } else if (head == "start") {
      StateId s;
      double p;
      if (!(ls >> s >> p)) fail("expected 'start <state> <prob>'");
      starts.emplace_back(s, p);
    } else if (head == "terminal") {
      StateId s;
      if (!(ls >> s)) fail("expected 'terminal <state>'");
      terminals.push_back(s);
    } else {
      Row row{};
      std::istringstream full(line);
      if (!(full >> row.s >> row.a >> row.next >> row.p >> row.r)) {
        fail("expected 's a s' p r' tuple");
      }
      rows.push_back(row);
    }
  }
  if (n_states == 0 || n_actions == 0) {
    throw std::invalid_argument(origin + ": missing 'states' or 'actions' header");
  }
  MdpBuilder builder(n_states, n_actions);
  for (const auto& r : rows) builder.add(r.s, r.a, r.next, r.p, r.r);
  for (const auto& [s, p] : starts) builder.start(s, p);
  for (StateId s : terminals) builder.terminal(s);
  return builder.build();
}

DiscreteMdpSpec load_mdp_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open MDP table " + path.string());
  return parse_mdp_table(in, path.string());
}

void write_mdp_table(std::ostream& out, const DiscreteMdpSpec& spec) {
  out << "states " << spec.n_states() << "\n";
  out << "actions " << spec.n_actions() << "\n";
  out << std::setprecision(17);
  for (StateId s = 0; s < spec.n_states(); ++s) {
    if (spec.start_dist()[s] > 0.0) out << "start " << s << " " << spec.start_dist()[s] << "\n";
  }
  for (StateId s = 0; s < spec.n_states(); ++s) {
    if (spec.is_terminal(s)) out << "terminal " << s << "\n";
  }
  for (StateId s = 0; s < spec.n_states(); ++s) {
    for (ActionId a = 0; a < spec.n_actions(); ++a) {
      for (const auto& o : spec.outcomes(s, a)) {
        out << s << " " << a << " " << o.next << " " << o.prob << " " << o.reward << "\n";
      }
    }
  }
}

}  // namespace spie::envs
