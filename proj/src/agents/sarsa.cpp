#include "spie/agents/sarsa.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "spie/repr/analytic.hpp"

namespace spie::agents {

using envs::Transition;
using intrinsic::IntrinsicKind;
using repr::OccupancyKind;
using repr::OccupancyMatrix;

void AgentConfig::validate() const {
  auto in_open_closed = [](double x) { return x > 0.0 && x <= 1.0; };
  auto in_open = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in_open_closed(alpha)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!in_open_closed(eta)) throw std::invalid_argument("eta must lie in (0, 1]");
  if (!in_open_closed(eta_pr)) throw std::invalid_argument("eta_pr must lie in (0, 1]");
  if (!in_open(gamma)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (!in_open(gamma_repr)) throw std::invalid_argument("gamma_repr must lie in (0, 1)");
  if (!in_open(gamma_pr)) throw std::invalid_argument("gamma_pr must lie in (0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (!std::isfinite(q_init)) throw std::invalid_argument("q_init must be finite");
  intrinsic.validate();
  if (!intrinsic::is_tabular(intrinsic.kind)) {
    throw std::invalid_argument("intrinsic kind '" + intrinsic::to_string(intrinsic.kind) +
                                "' needs the linear agent");
  }
}

std::string AgentConfig::canonical() const {
  std::ostringstream os;
  os << std::setprecision(17) << "name=" << name << ";alpha=" << alpha << ";eta=" << eta
     << ";eta_pr=" << eta_pr << ";gamma=" << gamma << ";gamma_repr=" << gamma_repr
     << ";gamma_pr=" << gamma_pr << ";epsilon=" << epsilon << ";q_init=" << q_init
     << ";intrinsic=" << intrinsic::to_string(intrinsic.kind) << ";beta=" << intrinsic.beta
     << ";frozen=" << intrinsic.frozen << ";strict=" << strict_pseudocode;
  return os.str();
}

std::string AgentConfig::fingerprint() const { return hex64(fnv1a(canonical())); }

ActionId epsilon_greedy(const QTable& q, StateId s, double epsilon, Rng& rng) {
  const std::size_t n = q.n_actions();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (unif(rng) < epsilon) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    return pick(rng);
  }
  const auto row = q.values().row(s);
  const double best = row.maxCoeff();
  std::size_t ties = 0;
  ActionId first = 0;
  for (std::size_t a = 0; a < n; ++a) {
    if (row(a) == best) {
      if (ties == 0) first = a;
      ++ties;
    }
  }
  if (ties == 1) return first;
  std::uniform_int_distribution<std::size_t> pick(0, ties - 1);
  std::size_t k = pick(rng);
  for (std::size_t a = 0; a < n; ++a) {
    if (row(a) == best && k-- == 0) return a;
  }
  return first;
}

void sarsa_step(QTable& q, const Transition& t, double r_total, double alpha, double gamma) {
  const double bootstrap = t.done ? 0.0 : gamma * q(t.s_next, t.a_next);
  q(t.s, t.a) += alpha * (r_total + bootstrap - q(t.s, t.a));
}

double optimistic_init(const AgentConfig& config, IntrinsicKind kind) {
  if (kind == IntrinsicKind::kSR || kind == IntrinsicKind::kFR) return 1.0 / (1.0 - config.gamma);
  return 0.0;
}

void RunBudget::validate() const {
  if (steps < 0 || episodes < 0 || max_episode_steps < 0) {
    throw std::invalid_argument("run budget must be non-negative");
  }
  if (steps == 0 && episodes == 0) {
    throw std::invalid_argument("run budget needs a positive step or episode count");
  }
}

FixedRepresentations diffusion_representations(const envs::DiscreteMdpSpec& mdp,
                                               const AgentConfig& config, bool with_pr) {
  const Eigen::MatrixXd p = mdp.random_walk_marginal();
  FixedRepresentations fixed;
  fixed.sr = repr::analytic_sr(p, config.gamma_repr);
  fixed.fr = repr::analytic_fr(p, config.gamma_repr);
  if (with_pr) fixed.pr = repr::analytic_pr(p, config.gamma_pr);
  return fixed;
}

namespace {

// Step/episode bookkeeping shared by run_agent and run_policy.
class Recorder {
 public:
  Recorder(std::size_t n_states, const RunBudget& budget, std::uint64_t seed, std::string fingerprint)
      : budget_(budget), seen_(n_states, false) {
    record_.seed = seed;
    record_.fingerprint = std::move(fingerprint);
    record_.n_states = n_states;
    if (budget.log_steps && budget.steps > 0) record_.steps.reserve(static_cast<std::size_t>(budget.steps));
  }

  void begin_episode(StateId s) {
    visit(s);
    if (record_.total_steps == 0) record_.initial_unique = unique_;
    episode_length_ = 0;
    episode_return_ = 0.0;
  }

  // Returns true when the episode must end here (terminal or truncated).
  bool log_step(StateId s, ActionId a, double r_ext, double r_int, StateId next, bool done) {
    visit(next);
    ++record_.total_steps;
    ++episode_length_;
    episode_return_ += r_ext;
    record_.total_extrinsic += r_ext;
    if (budget_.log_steps) {
      record_.steps.push_back({record_.total_steps, s, a, r_ext, r_int, done, unique_});
    }
    const bool truncated = budget_.max_episode_steps > 0 && episode_length_ >= budget_.max_episode_steps;
    if (done || truncated || steps_exhausted()) {
      record_.episodes.push_back({static_cast<long>(record_.episodes.size()), episode_length_,
                                  episode_return_, done});
      return true;
    }
    return false;
  }

  bool steps_exhausted() const { return budget_.steps > 0 && record_.total_steps >= budget_.steps; }
  bool finished() const {
    return steps_exhausted() ||
           (budget_.episodes > 0 && static_cast<long>(record_.episodes.size()) >= budget_.episodes);
  }

  harness::RunRecord take() { return std::move(record_); }

 private:
  void visit(StateId s) {
    if (!seen_[s]) {
      seen_[s] = true;
      ++unique_;
    }
  }

  RunBudget budget_;
  std::vector<bool> seen_;
  std::size_t unique_ = 0;
  long episode_length_ = 0;
  double episode_return_ = 0.0;
  harness::RunRecord record_;
};

// Online or frozen representations plus the intrinsic reward they feed.
class RepresentationSet {
 public:
  RepresentationSet(const AgentConfig& config, std::size_t n_states, const FixedRepresentations* fixed)
      : config_(config) {
    const auto kind = config.intrinsic.kind;
    if (config.intrinsic.frozen) {
      if (fixed == nullptr) {
        throw std::invalid_argument("frozen intrinsic reward needs precomputed representations");
      }
      auto check = [&](bool needed, const std::optional<OccupancyMatrix>& m, const char* what) {
        if (!needed) return;
        if (!m || m->size() != n_states) {
          throw std::invalid_argument(std::string("frozen run is missing a fitting ") + what + " matrix");
        }
      };
      check(intrinsic::needs_sr(kind), fixed->sr, "SR");
      check(intrinsic::needs_fr(kind), fixed->fr, "FR");
      check(intrinsic::needs_pr(kind), fixed->pr, "PR");
      sr_ = fixed->sr ? &*fixed->sr : nullptr;
      fr_ = fixed->fr ? &*fixed->fr : nullptr;
      pr_ = fixed->pr ? &*fixed->pr : nullptr;
      return;
    }
    if (intrinsic::needs_sr(kind)) {
      own_sr_.emplace(OccupancyKind::kSR, n_states, config.gamma_repr);
      sr_ = &*own_sr_;
    }
    if (intrinsic::needs_fr(kind)) {
      own_fr_.emplace(OccupancyKind::kFR, n_states, config.gamma_repr);
      fr_ = &*own_fr_;
    }
    if (intrinsic::needs_pr(kind)) {
      own_pr_.emplace(OccupancyKind::kPR, n_states, config.gamma_pr);
      pr_ = &*own_pr_;
    }
  }

  void learn(const Transition& t) {
    if (own_sr_) repr::sr_td_update(*own_sr_, t, config_.eta);
    if (own_fr_) repr::fr_td_update(*own_fr_, t, config_.eta);
    if (own_pr_) repr::pr_td_update(*own_pr_, t, config_.eta_pr);
  }

  double reward(const Transition& t) const {
    switch (config_.intrinsic.kind) {
      case IntrinsicKind::kNone: return 0.0;
      case IntrinsicKind::kSR: return intrinsic::r_sr(*sr_, t);
      case IntrinsicKind::kFR: return intrinsic::r_fr(*fr_, t);
      case IntrinsicKind::kSRR: return intrinsic::r_srr(*sr_, t);
      case IntrinsicKind::kSRR_A: return intrinsic::r_srr_a(*sr_, t);
      case IntrinsicKind::kSRR_B: return intrinsic::r_srr_b(*sr_, t);
      case IntrinsicKind::kSR_PR: return intrinsic::r_sr_pr(*sr_, *pr_, t);
      default: throw std::logic_error("non-tabular intrinsic kind in a tabular agent");
    }
  }

 private:
  const AgentConfig& config_;
  std::optional<OccupancyMatrix> own_sr_, own_fr_, own_pr_;
  const OccupancyMatrix* sr_ = nullptr;
  const OccupancyMatrix* fr_ = nullptr;
  const OccupancyMatrix* pr_ = nullptr;
};

}  // namespace

harness::RunRecord run_agent(envs::TabularEnvironment& env, const AgentConfig& config,
                             const RunBudget& budget, const FixedRepresentations* fixed) {
  config.validate();
  budget.validate();
  const std::size_t n_states = env.n_states();
  const std::size_t n_actions = env.n_actions();

  Rng rng(config.seed);
  QTable q(n_states, n_actions, config.q_init);
  RepresentationSet reps(config, n_states, fixed);
  Recorder recorder(n_states, budget, config.seed, config.fingerprint());
  const double beta = config.intrinsic.beta;

  while (!recorder.finished()) {
    StateId s = env.reset(rng);
    recorder.begin_episode(s);
    ActionId a = config.strict_pseudocode ? 0 : epsilon_greedy(q, s, config.epsilon, rng);
    for (;;) {
      if (config.strict_pseudocode) a = epsilon_greedy(q, s, config.epsilon, rng);
      const auto step = env.step(a, rng);
      Transition t{s, a, step.reward, step.next, 0, step.done};
      if (!config.intrinsic.frozen) reps.learn(t);
      const double r_int = reps.reward(t);
      const double r_total = intrinsic::combine(step.reward, r_int, beta);
      if (!step.done) t.a_next = epsilon_greedy(q, step.next, config.epsilon, rng);
      sarsa_step(q, t, r_total, config.alpha, config.gamma);
      if (recorder.log_step(s, a, step.reward, r_int, step.next, step.done)) break;
      s = step.next;
      a = t.a_next;
    }
  }
  return recorder.take();
}

harness::RunRecord run_policy(envs::TabularEnvironment& env, const Policy& policy,
                              const RunBudget& budget, std::uint64_t seed) {
  budget.validate();
  Rng rng(seed);
  Recorder recorder(env.n_states(), budget, seed, "fixed-policy");
  while (!recorder.finished()) {
    StateId s = env.reset(rng);
    recorder.begin_episode(s);
    for (;;) {
      const ActionId a = policy(s);
      const auto step = env.step(a, rng);
      if (recorder.log_step(s, a, step.reward, 0.0, step.next, step.done)) break;
      s = step.next;
    }
  }
  return recorder.take();
}

}  // namespace spie::agents
